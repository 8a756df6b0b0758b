#pragma once

// Coherent-state overlap kernel on the Grassmannian, Calabi diastasis,
// Cayley distance on projective rays, the Pluecker embedding, and the
// noncompact-dual kernel on the bounded domain sigma_max(Z) < 1.

#include <cmath>
#include <numbers>

#include "grassgeo/combinatorics.hpp"
#include "grassgeo/grassmann.hpp"

namespace grassgeo {

// overlap moduli below this leave the diastasis undefined (the second point
// sits on the polar divisor of the first)
inline constexpr double kOverlapFloor = 1e-14;

struct Overlap {
  Complex value;
  double modulus = 0.0;
};

// Representative of a ray in the Pluecker space; comparisons only ever use
// normalized inner-product moduli.
struct ProjectiveVector {
  CVector coords;
};

namespace detail {

inline void require_same_chart_shape(const CMatrix& a, const CMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw ShapeMismatch("chart coordinate shapes differ");
}

inline double hermitian_det_real(const CMatrix& h) {
  return h.determinant().real();
}

}  // namespace detail

// Normalized coherent-state overlap
//   det(I + Z1 Z2') / sqrt(det(I + Z1 Z1') det(I + Z2 Z2')).
// Its modulus is the product of the cosines of the principal angles between
// the two chart planes; only the modulus is contractual, the phase is the
// natural determinant phase.
inline Overlap overlap(const ChartZ& a, const ChartZ& b) {
  detail::require_same_chart_shape(a.z, b.z);
  const Eigen::Index n = a.z.rows();
  const CMatrix eye = CMatrix::Identity(n, n);
  const Complex num = (eye + a.z * b.z.adjoint()).determinant();
  const double da = detail::hermitian_det_real(eye + a.z * a.z.adjoint());
  const double db = detail::hermitian_det_real(eye + b.z * b.z.adjoint());
  const Complex value = num / std::sqrt(da * db);
  return {value, std::abs(value)};
}

// Calabi diastasis D(Z1, Z2) = -2 log |overlap|.
inline double diastasis(const ChartZ& a, const ChartZ& b) {
  const Overlap o = overlap(a, b);
  if (o.modulus < kOverlapFloor)
    throw DiastasisUndefined("diastasis: overlap vanishes, second point on the polar divisor");
  return -2.0 * std::log(o.modulus);
}

// Hermitian elliptic Cayley distance between rays,
// arccos(|<v1,v2>| / (|v1| |v2|)).
inline double cayley_distance(const ProjectiveVector& v1, const ProjectiveVector& v2) {
  const double n1 = v1.coords.norm();
  const double n2 = v2.coords.norm();
  if (n1 < 1e-300 || n2 < 1e-300)
    throw ZeroVector("cayley_distance: zero representative");
  const double c = std::abs(v1.coords.dot(v2.coords)) / (n1 * n2);
  return std::acos(std::clamp(c, 0.0, 1.0));
}

// All n x n minors of the frame, lexicographic in the row subset. For an
// orthonormal frame the vector has unit norm (Cauchy-Binet), and right
// re-framing by u in U(n) multiplies every coordinate by det(u).
inline ProjectiveVector plucker(const Plane& p) {
  const CMatrix& f = p.frame();
  const int n = static_cast<int>(f.cols());
  const int total = static_cast<int>(f.rows());
  const auto subsets = detail::lex_subsets(total, n);
  CVector coords(static_cast<Eigen::Index>(subsets.size()));
  CMatrix sub(n, n);
  for (std::size_t idx = 0; idx < subsets.size(); ++idx) {
    for (int k = 0; k < n; ++k)
      sub.row(k) = f.row(subsets[idx][static_cast<std::size_t>(k)]);
    coords(static_cast<Eigen::Index>(idx)) = sub.determinant();
  }
  return {std::move(coords)};
}

struct DiastasisRelation {
  double diastasis = 0.0;
  double theta = 0.0;     // Cayley distance of the Pluecker images
  double residual = 0.0;  // |D + 2 log cos theta|
};

// Two-route check of D = -2 log cos(theta): the diastasis from the
// determinant kernel against the Cayley distance of the Pluecker images.
inline DiastasisRelation check_diastasis_relation(const ChartZ& a, const ChartZ& b) {
  const double d = diastasis(a, b);
  const double theta =
      cayley_distance(plucker(frame_from_z(a)), plucker(frame_from_z(b)));
  const double residual = std::abs(d + 2.0 * std::log(std::cos(theta)));
  return {d, theta, residual};
}

// Kernel of the noncompact dual on the bounded domain sigma_max(Z) < 1:
//   det(I - Z1 Z2') / sqrt(det(I - Z1 Z1') det(I - Z2 Z2')),
// modulus >= 1, with diastasis D = +2 log modulus.
inline Overlap noncompact_overlap(const ChartZ& a, const ChartZ& b) {
  detail::require_same_chart_shape(a.z, b.z);
  const auto smax = [](const CMatrix& z) {
    Eigen::JacobiSVD<CMatrix> svd(z);
    return svd.singularValues().size() > 0 ? svd.singularValues()(0) : 0.0;
  };
  if (smax(a.z) >= 1.0 - 1e-12 || smax(b.z) >= 1.0 - 1e-12)
    throw OutsideDomain("noncompact_overlap: sigma_max reached 1");
  const Eigen::Index n = a.z.rows();
  const CMatrix eye = CMatrix::Identity(n, n);
  const Complex num = (eye - a.z * b.z.adjoint()).determinant();
  const double da = detail::hermitian_det_real(eye - a.z * a.z.adjoint());
  const double db = detail::hermitian_det_real(eye - b.z * b.z.adjoint());
  const Complex value = num / std::sqrt(da * db);
  return {value, std::abs(value)};
}

inline double noncompact_diastasis(const ChartZ& a, const ChartZ& b) {
  return 2.0 * std::log(noncompact_overlap(a, b).modulus);
}

}  // namespace grassgeo
