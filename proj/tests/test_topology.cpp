#include "doctest.h"

#include "grassgeo/topology.hpp"
#include "oracles.hpp"

using namespace grassgeo;

namespace {
EnergyWeights auto_weights(const Shape& s) {
  RVector a(s.ambient());
  for (int k = 0; k < s.ambient(); ++k) a(k) = k + 1;
  return EnergyWeights(a);
}
}  // namespace

TEST_CASE("euler characteristic") {
  CHECK(euler_characteristic(Shape(1, 1)) == 2);
  CHECK(euler_characteristic(Shape(2, 2)) == 6);
  CHECK(euler_characteristic(Shape(2, 3)) == 10);
  CHECK(euler_characteristic(Shape(30, 30)) == 118264581564861424ull);
  CHECK_THROWS_AS(euler_characteristic(Shape(30, 31)), Overflow);
}

TEST_CASE("cell count") {
  CHECK(cell_count(Shape(1, 1)) == 2);
  CHECK(cell_count(Shape(1, 5)) == 6);
  CHECK(cell_count(Shape(2, 2)) == 6);
  // brute-force partition enumeration agrees on small boxes
  for (int n = 1; n <= 4; ++n)
    for (int m = 1; m <= 4; ++m)
      CHECK(cell_count(Shape(n, m)) == oracles::partitions_in_box_brute(n, m));
}

TEST_CASE("Borel-Weil dimension") {
  CHECK(borel_weil_dim(Shape(1, 1)) == 2);
  CHECK(borel_weil_dim(Shape(2, 2)) == 6);
  CHECK(borel_weil_dim(Shape(2, 3)) == 10);
  for (int n = 1; n <= 6; ++n)
    for (int m = 1; m <= 6; ++m)
      CHECK(borel_weil_dim(Shape(n, m)) == oracles::binomial(n + m, n));
}

TEST_CASE("orthogonal coherent count") {
  CHECK(orthogonal_coherent_count(Shape(1, 1)) == 2);
  CHECK(orthogonal_coherent_count(Shape(1, 2)) == 3);
  CHECK(orthogonal_coherent_count(Shape(2, 2)) == 6);
  CHECK_THROWS_AS(orthogonal_coherent_count(Shape(10, 11)), TooLarge);
}

TEST_CASE("energy criticality") {
  SUBCASE("CP^1 with weights (0, 1)") {
    RVector a(2);
    a << 0.0, 1.0;
    const auto res = energy_critical_check(Shape(1, 1), EnergyWeights(a));
    CHECK(res.count == 2);
    CHECK(res.certified);
  }
  SUBCASE("(2,2) with weights 1..4") {
    const auto res = energy_critical_check(Shape(2, 2), auto_weights(Shape(2, 2)));
    CHECK(res.count == 6);
    CHECK(res.certified);
  }
  SUBCASE("degenerate weights are rejected") {
    RVector a(4);
    a << 1.0, 1.0, 2.0, 3.0;
    CHECK_THROWS_AS(EnergyWeights{a}, DegenerateWeights);
  }
  SUBCASE("the count does not depend on the particular distinct weights") {
    CounterRng rng(401);
    for (const auto [n, m] : {std::pair{1, 1}, {1, 2}, {2, 2}}) {
      const Shape s(n, m);
      for (int draw = 0; draw < 5; ++draw) {
        RVector a(s.ambient());
        bool distinct = false;
        while (!distinct) {
          a = rng.gaussian_vector(s.ambient());
          distinct = true;
          for (int i = 0; i < s.ambient() && distinct; ++i)
            for (int j = i + 1; j < s.ambient(); ++j)
              if (std::abs(a(i) - a(j)) <= 1e-3) distinct = false;
        }
        const auto res = energy_critical_check(s, EnergyWeights(a));
        CHECK(res.count == oracles::binomial(n + m, n));
        CHECK(res.certified);
      }
    }
  }
}

TEST_CASE("seven numbers agree") {
  for (const auto [n, m] : {std::pair{1, 1}, {2, 2}, {2, 3}}) {
    const Shape s(n, m);
    const auto rep = seven_numbers(s, auto_weights(s));
    CHECK(rep.all_equal);
    CHECK(rep.euler_characteristic == oracles::binomial(n + m, n));
  }
}

TEST_CASE("all integer routes agree for n+m <= 12 and are (n,m)-symmetric") {
  for (int total = 2; total <= 12; ++total) {
    for (int n = 1; n < total; ++n) {
      const Shape s(n, total - n);
      const std::uint64_t chi = euler_characteristic(s);
      CHECK(chi == cell_count(s));
      CHECK(chi == borel_weil_dim(s));
      CHECK(chi == static_cast<std::uint64_t>(plucker(base_point(s)).coords.size()));
      CHECK(chi == orthogonal_coherent_count(s));

      const Shape swapped(total - n, n);
      CHECK(euler_characteristic(swapped) == chi);
      CHECK(cell_count(swapped) == chi);
      CHECK(borel_weil_dim(swapped) == chi);
    }
  }
}
