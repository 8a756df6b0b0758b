#include "doctest.h"

#include <cmath>
#include <numbers>

#include "grassgeo/coherent.hpp"
#include "oracles.hpp"

using namespace grassgeo;

namespace {
constexpr double pi = std::numbers::pi;

ChartZ scalar_z(double v) {
  CMatrix z(1, 1);
  z(0, 0) = v;
  return {z};
}
}  // namespace

TEST_CASE("overlap fixed values") {
  const ChartZ zero{CMatrix::Zero(2, 2)};
  const Overlap same = overlap(zero, zero);
  CHECK(std::abs(same.value - Complex(1.0)) < 1e-14);

  // antipodal points on CP^1: 1 + z1 conj(z2) = 0
  const Overlap anti = overlap(scalar_z(1.0), scalar_z(-1.0));
  CHECK(anti.modulus < 1e-14);
  const double plucker_dot =
      std::abs(plucker(frame_from_z(scalar_z(1.0)))
                   .coords.dot(plucker(frame_from_z(scalar_z(-1.0))).coords));
  CHECK(plucker_dot < 1e-14);
}

TEST_CASE("overlap modulus is the product of angle cosines") {
  CounterRng rng(201);
  for (int trial = 0; trial < 200; ++trial) {
    const Shape s(2, 3);
    const ChartZ z1{0.8 * rng.gaussian_matrix(s.n, s.m)};
    const ChartZ z2{0.8 * rng.gaussian_matrix(s.n, s.m)};
    const double mod = overlap(z1, z2).modulus;
    double prod = 1.0;
    for (double a : principal_angles(frame_from_z(z1), frame_from_z(z2)))
      prod *= std::cos(a);
    CHECK(std::abs(mod - prod) < 1e-9);
  }
}

TEST_CASE("overlap equals the Pluecker inner product up to phase") {
  CounterRng rng(202);
  for (int trial = 0; trial < 100; ++trial) {
    const Shape s(2, 2);
    const ChartZ z1{0.8 * rng.gaussian_matrix(s.n, s.m)};
    const ChartZ z2{0.8 * rng.gaussian_matrix(s.n, s.m)};
    const auto v1 = plucker(frame_from_z(z1)).coords;
    const auto v2 = plucker(frame_from_z(z2)).coords;
    const double via_plucker = std::abs(v1.dot(v2)) / (v1.norm() * v2.norm());
    CHECK(std::abs(overlap(z1, z2).modulus - via_plucker) < 1e-9);
  }
}

TEST_CASE("overlap hermitian symmetry") {
  CounterRng rng(203);
  for (int trial = 0; trial < 50; ++trial) {
    const ChartZ z1{rng.gaussian_matrix(2, 3)};
    const ChartZ z2{rng.gaussian_matrix(2, 3)};
    const Complex a = overlap(z1, z2).value;
    const Complex b = overlap(z2, z1).value;
    CHECK(std::abs(a - std::conj(b)) < 1e-12);
  }
}

TEST_CASE("diastasis") {
  CHECK(diastasis(scalar_z(0.3), scalar_z(0.3)) < 1e-14);
  CHECK(diastasis(scalar_z(0.0), scalar_z(1.0)) ==
        doctest::Approx(std::log(2.0)).epsilon(1e-12));
  // cross-check: -2 log cos(pi/4)
  CHECK(diastasis(scalar_z(0.0), scalar_z(1.0)) ==
        doctest::Approx(-2.0 * std::log(std::cos(pi / 4))).epsilon(1e-12));
  CHECK_THROWS_AS(diastasis(scalar_z(1.0), scalar_z(-1.0)), DiastasisUndefined);
}

TEST_CASE("overlap with the base point decays to the polar divisor") {
  // |overlap(0, z)| = prod 1/sqrt(1+s_i^2) -> 0 exactly as z leaves every
  // chart-classification threshold behind
  double prev = 1.0;
  for (double scale : {1.0, 10.0, 100.0, 1000.0}) {
    const double mod = overlap(scalar_z(0.0), scalar_z(scale)).modulus;
    CHECK(mod == doctest::Approx(1.0 / std::sqrt(1.0 + scale * scale)).epsilon(1e-12));
    CHECK(mod < prev);
    prev = mod;
  }
  // far enough out the chart plane degenerates onto the polar divisor and
  // the overlap crosses the diastasis floor together with it
  const ChartZ far = scalar_z(1e12);
  CHECK(overlap(scalar_z(0.0), far).modulus < 1e-10);
  CHECK_THROWS_AS(z_from_plane(frame_from_z(far)), OnPolarDivisor);
}

TEST_CASE("cayley distance") {
  ProjectiveVector v1{CVector(2)}, v2{CVector(2)};
  v1.coords << 1.0, 0.0;
  v2.coords << 1.0, 1.0;
  CHECK(cayley_distance(v1, v1) == 0.0);
  CHECK(cayley_distance(v1, v2) == doctest::Approx(pi / 4).epsilon(1e-12));
  ProjectiveVector orth{CVector(2)};
  orth.coords << 0.0, 1.0;
  CHECK(cayley_distance(v1, orth) == doctest::Approx(pi / 2).epsilon(1e-12));
  ProjectiveVector zero{CVector::Zero(2)};
  CHECK_THROWS_AS(cayley_distance(v1, zero), ZeroVector);
}

TEST_CASE("plucker embedding") {
  SUBCASE("base point maps to the first coordinate ray") {
    const auto v = plucker(base_point(Shape(2, 2))).coords;
    CHECK(v.size() == 6);
    CHECK(std::abs(v(0) - Complex(1.0)) < 1e-14);
    CHECK(v.tail(5).norm() < 1e-14);
  }
  SUBCASE("n = 1 returns the frame column") {
    CounterRng rng(204);
    const Plane p = random_plane(Shape(1, 2), rng);
    const auto v = plucker(p).coords;
    CHECK((v - p.frame().col(0)).norm() < 1e-14);
  }
  SUBCASE("unit norm and right-unitary equivariance") {
    CounterRng rng(205);
    for (int trial = 0; trial < 30; ++trial) {
      const Plane p = random_plane(Shape(2, 3), rng);
      const auto v = plucker(p).coords;
      CHECK(std::abs(v.norm() - 1.0) < 1e-10);
      const CMatrix u = random_unitary(2, rng);
      const auto vu = plucker(Plane(p.frame() * u)).coords;
      const Complex det_u = u.determinant();
      CHECK((vu - det_u * v).norm() < 1e-10);
    }
  }
}

TEST_CASE("diastasis relation D = -2 log cos theta") {
  const auto anchor = check_diastasis_relation(scalar_z(0.0), scalar_z(1.0));
  CHECK(anchor.diastasis == doctest::Approx(std::log(2.0)).epsilon(1e-12));
  CHECK(anchor.theta == doctest::Approx(pi / 4).epsilon(1e-12));
  CHECK(anchor.residual < 1e-12);

  const auto trivial = check_diastasis_relation(scalar_z(0.4), scalar_z(0.4));
  CHECK(trivial.diastasis < 1e-12);
  CHECK(trivial.theta < 1e-6);
  CHECK(trivial.residual < 1e-10);

  CounterRng rng(206);
  for (const auto [n, m] : {std::pair{1, 1}, {1, 2}, {2, 2}, {2, 3}}) {
    for (int trial = 0; trial < 50; ++trial) {
      const ChartZ z1{0.6 * rng.gaussian_matrix(n, m)};
      const ChartZ z2{0.6 * rng.gaussian_matrix(n, m)};
      if (overlap(z1, z2).modulus < 1e-3) continue;
      CHECK(check_diastasis_relation(z1, z2).residual < 1e-9);
    }
  }
}

TEST_CASE("noncompact overlap") {
  const ChartZ zero{CMatrix::Zero(1, 1)};
  SUBCASE("fixed values") {
    const Overlap same = noncompact_overlap(zero, zero);
    CHECK(same.modulus == doctest::Approx(1.0));
    CHECK(noncompact_diastasis(zero, zero) < 1e-14);

    const Overlap disk = noncompact_overlap(zero, scalar_z(0.5));
    CHECK(disk.modulus == doctest::Approx(1.0 / std::sqrt(0.75)).epsilon(1e-12));
    // cosh of the hyperbolic distance arctanh(0.5)
    CHECK(disk.modulus == doctest::Approx(std::cosh(std::atanh(0.5))).epsilon(1e-12));

    CHECK_THROWS_AS(noncompact_overlap(zero, scalar_z(1.01)), OutsideDomain);
  }
  SUBCASE("modulus >= 1 and cosh-distance relation on the ball, n = 1") {
    CounterRng rng(207);
    for (const auto [n, m] : {std::pair{1, 1}, {1, 2}}) {
      for (int trial = 0; trial < 100; ++trial) {
        const auto draw = [&] {
          CMatrix z = rng.gaussian_matrix(n, m);
          Eigen::JacobiSVD<CMatrix> svd(z);
          z *= 0.95 * rng.next_unit() / svd.singularValues()(0);
          return ChartZ{z};
        };
        const ChartZ z1 = draw(), z2 = draw();
        const Overlap o = noncompact_overlap(z1, z2);
        CHECK(o.modulus >= 1.0 - 1e-12);
        const double delta =
            oracles::ball_distance(z1.z.row(0).transpose(), z2.z.row(0).transpose());
        CHECK(std::abs(std::cosh(delta) - std::exp(noncompact_diastasis(z1, z2) / 2.0)) <
              1e-9);
      }
    }
  }
}
