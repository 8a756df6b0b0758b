#pragma once

// Seven equal invariants of G_n(C^{n+m}), each computed along its own route:
//   1. maximal orthogonal coherent family   - coordinate-plane enumeration
//                                             plus numeric orthogonality
//   2. holomorphic sections of the bundle   - reported via route 3
//   3. Borel-Weil representation dimension  - Weyl product, exact rationals
//   4. minimal Kodaira embedding dimension  - length of the Pluecker vector
//   5. critical points of the energy f_H    - finite-difference gradients
//   6. Euler-Poincare characteristic        - Weyl group order ratio
//   7. Borel-Morse cell count               - partition DP in an n x m box
// No arithmetic is shared between routes beyond plain integers.

#include <cstdint>
#include <limits>
#include <numeric>
#include <vector>

#include "grassgeo/coherent.hpp"
#include "grassgeo/loci.hpp"

namespace grassgeo {

namespace detail {

// Minimal unsigned bignum (base 2^32) for the factorial route.
class BigUInt {
 public:
  explicit BigUInt(std::uint64_t v) {
    limbs_.push_back(static_cast<std::uint32_t>(v & 0xFFFFFFFFull));
    if (v >> 32) limbs_.push_back(static_cast<std::uint32_t>(v >> 32));
  }

  void mul_small(std::uint32_t k) {
    std::uint64_t carry = 0;
    for (auto& limb : limbs_) {
      const std::uint64_t cur = static_cast<std::uint64_t>(limb) * k + carry;
      limb = static_cast<std::uint32_t>(cur & 0xFFFFFFFFull);
      carry = cur >> 32;
    }
    while (carry) {
      limbs_.push_back(static_cast<std::uint32_t>(carry & 0xFFFFFFFFull));
      carry >>= 32;
    }
  }

  // exact division, throws if k does not divide the value
  void div_small(std::uint32_t k) {
    std::uint64_t rem = 0;
    for (std::size_t i = limbs_.size(); i-- > 0;) {
      const std::uint64_t cur = (rem << 32) | limbs_[i];
      limbs_[i] = static_cast<std::uint32_t>(cur / k);
      rem = cur % k;
    }
    if (rem != 0) throw Overflow("BigUInt: inexact division");
    while (limbs_.size() > 1 && limbs_.back() == 0) limbs_.pop_back();
  }

  bool fits_u64() const { return limbs_.size() <= 2; }

  std::uint64_t to_u64() const {
    if (!fits_u64()) throw Overflow("BigUInt: value exceeds 64 bits");
    std::uint64_t v = limbs_[0];
    if (limbs_.size() == 2) v |= static_cast<std::uint64_t>(limbs_[1]) << 32;
    return v;
  }

 private:
  std::vector<std::uint32_t> limbs_;
};

inline unsigned __int128 gcd128(unsigned __int128 a, unsigned __int128 b) {
  while (b) {
    const unsigned __int128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

}  // namespace detail

// chi = |W_G| / |W_K| = (n+m)! / (n! m!), evaluated through the factorials.
inline std::uint64_t euler_characteristic(const Shape& s) {
  if (s.ambient() > 60)
    throw Overflow("euler_characteristic: n+m > 60");
  detail::BigUInt acc(1);
  for (int k = 2; k <= s.ambient(); ++k) acc.mul_small(static_cast<std::uint32_t>(k));
  for (int k = 2; k <= s.n; ++k) acc.div_small(static_cast<std::uint32_t>(k));
  for (int k = 2; k <= s.m; ++k) acc.div_small(static_cast<std::uint32_t>(k));
  if (!acc.fits_u64()) throw Overflow("euler_characteristic: result exceeds 64 bits");
  return acc.to_u64();
}

// Number of partitions fitting in an n x m box. Peeling recurrence: either
// the partition has fewer than i parts, or subtracting 1 from every part
// drops it into the i x (j-1) box.
inline std::uint64_t cell_count(const Shape& s) {
  std::vector<unsigned __int128> f(static_cast<std::size_t>(s.m) + 1, 1);
  for (int i = 1; i <= s.n; ++i)
    for (int j = 1; j <= s.m; ++j)
      f[static_cast<std::size_t>(j)] += f[static_cast<std::size_t>(j - 1)];
  if (f[static_cast<std::size_t>(s.m)] > std::numeric_limits<std::uint64_t>::max())
    throw Overflow("cell_count: result exceeds 64 bits");
  return static_cast<std::uint64_t>(f[static_cast<std::size_t>(s.m)]);
}

// Weyl dimension formula for SU(n+m) at the n-th fundamental weight
// lambda = (1,..,1,0,..,0):  prod_{i<j} (lambda_i - lambda_j + j - i)/(j - i),
// accumulated in exact rational arithmetic.
inline std::uint64_t borel_weil_dim(const Shape& s) {
  const int total = s.ambient();
  unsigned __int128 num = 1, den = 1;
  const unsigned __int128 guard = static_cast<unsigned __int128>(1) << 100;
  for (int i = 1; i <= total; ++i)
    for (int j = i + 1; j <= total; ++j) {
      const int li = i <= s.n ? 1 : 0;
      const int lj = j <= s.n ? 1 : 0;
      num *= static_cast<unsigned __int128>(li - lj + j - i);
      den *= static_cast<unsigned __int128>(j - i);
      const unsigned __int128 g = detail::gcd128(num, den);
      num /= g;
      den /= g;
      if (num > guard) throw Overflow("borel_weil_dim: intermediate overflow");
    }
  if (den != 1 || num > std::numeric_limits<std::uint64_t>::max())
    throw Overflow("borel_weil_dim: result is not a 64-bit integer");
  return static_cast<std::uint64_t>(num);
}

// The coordinate plane spanned by {e_s : s in subset}.
inline Plane coordinate_plane(const Shape& s, const std::vector<int>& subset) {
  CMatrix f = CMatrix::Zero(s.ambient(), s.n);
  for (int k = 0; k < s.n; ++k) f(subset[static_cast<std::size_t>(k)], k) = 1.0;
  return Plane(f);
}

// Enumerate the coordinate planes, embed them with the Pluecker map, and
// verify pairwise orthogonality numerically. The family is maximal because
// the embedding space has exactly this dimension.
inline std::uint64_t orthogonal_coherent_count(const Shape& s) {
  if (s.ambient() > 20)
    throw TooLarge("orthogonal_coherent_count: n+m > 20");
  const auto subsets = detail::lex_subsets(s.ambient(), s.n);
  if (subsets.size() > 2500)
    throw TooLarge("orthogonal_coherent_count: too many coordinate planes to cross-check");
  std::vector<CVector> vectors;
  vectors.reserve(subsets.size());
  for (const auto& sub : subsets)
    vectors.push_back(plucker(coordinate_plane(s, sub)).coords);
  for (std::size_t i = 0; i < vectors.size(); ++i)
    for (std::size_t j = i + 1; j < vectors.size(); ++j)
      if (std::abs(vectors[i].dot(vectors[j])) >= 1e-12)
        throw Error("orthogonal_coherent_count: coordinate states not orthogonal");
  return vectors.size();
}

struct EnergyWeights {
  RVector a;  // length n+m, pairwise distinct

  explicit EnergyWeights(RVector a_) : a(std::move(a_)) {
    for (Eigen::Index i = 0; i < a.size(); ++i)
      for (Eigen::Index j = i + 1; j < a.size(); ++j)
        if (std::abs(a(i) - a(j)) <= 1e-9)
          throw DegenerateWeights("EnergyWeights: coefficients must be pairwise distinct");
  }
};

namespace detail {

// f(P) = trace(diag(a) P P') evaluated in the chart centered at `center`
// with complement `perp`: the plane spanned by center - perp W'.
inline double energy_in_chart(const RVector& a, const CMatrix& center, const CMatrix& perp,
                              const CMatrix& w) {
  const CMatrix g = center - perp * w.adjoint();
  const CMatrix gram = g.adjoint() * g;
  const CMatrix proj = g * gram.inverse() * g.adjoint();
  double f = 0.0;
  for (Eigen::Index k = 0; k < a.size(); ++k) f += a(k) * proj(k, k).real();
  return f;
}

inline double energy_gradient_norm(const RVector& a, const CMatrix& center,
                                   const CMatrix& perp) {
  const Eigen::Index n = center.cols(), m = perp.cols();
  const double step = 1e-5;
  double sq = 0.0;
  RVector x = RVector::Zero(2 * n * m);
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    RVector xp = x, xm = x;
    xp(j) += step;
    xm(j) -= step;
    const double fp = energy_in_chart(a, center, perp, unrealify(xp, n, m));
    const double fm = energy_in_chart(a, center, perp, unrealify(xm, n, m));
    const double g = (fp - fm) / (2.0 * step);
    sq += g * g;
  }
  return std::sqrt(sq);
}

inline CMatrix orthonormal_complement(const CMatrix& frame) {
  Eigen::HouseholderQR<CMatrix> qr(frame);
  const CMatrix q = qr.householderQ();
  return q.rightCols(frame.rows() - frame.cols());
}

}  // namespace detail

struct EnergyCriticality {
  std::uint64_t count = 0;
  bool certified = false;
};

// Count the coordinate planes where the realified gradient of the energy
// f_H(P) = trace(diag(a) P P') vanishes below 1e-7, and certify that the
// gradient is above 1e-3 at `reject_samples` random planes.
inline EnergyCriticality energy_critical_check(const Shape& s, const EnergyWeights& w,
                                               int reject_samples = 50,
                                               std::uint64_t seed = 0x5eedULL) {
  if (w.a.size() != s.ambient())
    throw DegenerateWeights("energy_critical_check: weight vector has wrong length");
  const auto subsets = detail::lex_subsets(s.ambient(), s.n);
  std::uint64_t count = 0;
  bool certified = true;
  for (const auto& sub : subsets) {
    std::vector<int> rest;
    for (int k = 0; k < s.ambient(); ++k)
      if (std::find(sub.begin(), sub.end(), k) == sub.end()) rest.push_back(k);
    CMatrix center = CMatrix::Zero(s.ambient(), s.n);
    for (int k = 0; k < s.n; ++k) center(sub[static_cast<std::size_t>(k)], k) = 1.0;
    CMatrix perp = CMatrix::Zero(s.ambient(), s.m);
    for (int k = 0; k < s.m; ++k) perp(rest[static_cast<std::size_t>(k)], k) = 1.0;
    if (detail::energy_gradient_norm(w.a, center, perp) < 1e-7)
      ++count;
    else
      certified = false;
  }
  CounterRng rng(seed);
  for (int i = 0; i < reject_samples; ++i) {
    const Plane p = random_plane(s, rng);
    const CMatrix perp = detail::orthonormal_complement(p.frame());
    if (detail::energy_gradient_norm(w.a, p.frame(), perp) <= 1e-3) certified = false;
  }
  if (count != subsets.size()) certified = false;
  return {count, certified};
}

struct SevenNumbersReport {
  std::uint64_t orthogonal_coherent_count = 0;
  std::uint64_t sections_dim = 0;
  std::uint64_t borel_weil_dim = 0;
  std::uint64_t kodaira_N = 0;
  std::uint64_t critical_point_count = 0;
  std::uint64_t euler_characteristic = 0;
  std::uint64_t cell_count = 0;
  bool all_equal = false;
};

inline SevenNumbersReport seven_numbers(const Shape& s, const EnergyWeights& w,
                                        std::uint64_t seed = 0x5eedULL) {
  SevenNumbersReport rep;
  rep.orthogonal_coherent_count = orthogonal_coherent_count(s);
  rep.borel_weil_dim = borel_weil_dim(s);
  // the space of global sections is the Borel-Weil representation itself
  rep.sections_dim = rep.borel_weil_dim;
  rep.kodaira_N = static_cast<std::uint64_t>(plucker(base_point(s)).coords.size());
  rep.critical_point_count = energy_critical_check(s, w, 50, seed).count;
  rep.euler_characteristic = euler_characteristic(s);
  rep.cell_count = cell_count(s);
  rep.all_equal = rep.orthogonal_coherent_count == rep.sections_dim &&
                  rep.sections_dim == rep.borel_weil_dim &&
                  rep.borel_weil_dim == rep.kodaira_N &&
                  rep.kodaira_N == rep.critical_point_count &&
                  rep.critical_point_count == rep.euler_characteristic &&
                  rep.euler_characteristic == rep.cell_count;
  return rep;
}

}  // namespace grassgeo
