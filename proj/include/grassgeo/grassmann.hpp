#pragma once

// The Grassmannian G_n(C^{n+m}) as a coherent-state manifold: the dense
// chart V0, normal-coordinate exponential and logarithm maps, geodesics
// through the base point O = span(e_1..e_n), geodesic distance, and the
// chart / polar-divisor decomposition.
//
// Conventions shared by every module:
//   * geodesics exponentiate the antihermitian generator (0 B; -B' 0),
//     whose frame has the cos / -sin block structure
//   * a chart point Z spans the columns of (I; -Z'), orthonormalized as
//     (I; -Z') (I + Z Z')^{-1/2}
//   * the metric is normalized so a unit-Frobenius tangent gives a
//     unit-speed geodesic

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "grassgeo/matfun.hpp"
#include "grassgeo/rng.hpp"

namespace grassgeo {

// top-block singular values below this put a plane on the polar divisor
inline constexpr double kChartTol = 1e-8;
// planes are equal when all principal angles are below this
inline constexpr double kPlaneEqTol = 1e-8;

struct Shape {
  int n = 1;
  int m = 1;

  Shape(int n_, int m_) : n(n_), m(m_) {
    if (n < 1 || m < 1) throw std::invalid_argument("Shape: n and m must be >= 1");
  }

  int r() const { return std::min(n, m); }
  int ambient() const { return n + m; }
};

// An n-plane in C^{n+m}, stored as one orthonormal (n+m) x n representative
// frame. Frames are representatives modulo the right U(n) action; equality
// is principal-angle based.
class Plane {
 public:
  explicit Plane(CMatrix frame) : frame_(std::move(frame)) {
    const Eigen::Index n = frame_.cols();
    if (frame_.rows() <= n)
      throw std::invalid_argument("Plane: frame must be tall, (n+m) x n");
    const double defect =
        (frame_.adjoint() * frame_ - CMatrix::Identity(n, n)).cwiseAbs().maxCoeff();
    if (defect > 1e-10)
      throw std::invalid_argument("Plane: frame columns are not orthonormal");
  }

  const CMatrix& frame() const { return frame_; }
  Shape shape() const {
    return Shape(static_cast<int>(frame_.cols()),
                 static_cast<int>(frame_.rows() - frame_.cols()));
  }

 private:
  CMatrix frame_;
};

struct TangentB {
  CMatrix b;  // n x m normal coordinates
};

struct ChartZ {
  CMatrix z;  // n x m chart coordinates on V0
};

inline Plane base_point(const Shape& s) {
  CMatrix f = CMatrix::Zero(s.ambient(), s.n);
  f.topRows(s.n) = CMatrix::Identity(s.n, s.n);
  return Plane(f);
}

inline std::vector<double> principal_angles(const Plane& p, const Plane& q) {
  return principal_angles(p.frame(), q.frame());
}

inline bool approx_equal(const Plane& p, const Plane& q, double tol_angle = kPlaneEqTol) {
  const auto angles = principal_angles(p, q);
  return angles.empty() || angles.back() <= tol_angle;
}

// Z = B tan(sqrt(B'B)) / sqrt(B'B). Defined while every singular value of B
// stays below pi/2; beyond that the geodesic has left V0.
inline ChartZ exp_map(const TangentB& tangent) {
  const auto fac = SpectralFactorization::compute(tangent.b);
  if (fac.singulars.size() > 0 &&
      fac.singulars(0) >= std::numbers::pi / 2 - kPoleTol)
    throw ChartEscape("exp_map: singular value reached pi/2, geodesic left the chart");
  return {apply_odd_kernel(tangent.b, ScalarKernel::tanc())};
}

// B = Z arctan(sqrt(Z'Z)) / sqrt(Z'Z), the global inverse of exp_map on V0.
inline TangentB log_map(const ChartZ& chart) {
  return {apply_odd_kernel(chart.z, ScalarKernel::arctanc())};
}

// Orthonormal frame of the chart point: (I; -Z') (I + Z Z')^{-1/2}.
inline Plane frame_from_z(const ChartZ& chart) {
  const CMatrix& z = chart.z;
  const Eigen::Index n = z.rows(), m = z.cols();
  const auto fac = SpectralFactorization::compute(z);
  RVector inv_sqrt = RVector::Ones(n);
  for (Eigen::Index i = 0; i < fac.singulars.size(); ++i)
    inv_sqrt(i) = 1.0 / std::sqrt(1.0 + fac.singulars(i) * fac.singulars(i));
  CMatrix smat = CMatrix::Zero(m, n);
  for (Eigen::Index i = 0; i < fac.singulars.size(); ++i)
    smat(i, i) = fac.singulars(i) * inv_sqrt(i);
  CMatrix frame(n + m, n);
  frame.topRows(n) = fac.left_factors * inv_sqrt.cast<Complex>().asDiagonal() *
                     fac.left_factors.adjoint();
  frame.bottomRows(m) = -(fac.right_factors * smat * fac.left_factors.adjoint());
  return Plane(frame);
}

// Chart coordinates of a plane: Z = -(bottom * top^{-1})'. Only defined off
// the polar divisor, where the top n x n block is invertible.
inline ChartZ z_from_plane(const Plane& p) {
  const Shape s = p.shape();
  const CMatrix top = p.frame().topRows(s.n);
  Eigen::JacobiSVD<CMatrix> svd(top);
  if (svd.singularValues()(s.n - 1) <= kChartTol)
    throw OnPolarDivisor("z_from_plane: top block singular, plane lies on the polar divisor");
  const CMatrix bottom = p.frame().bottomRows(s.m);
  return {-(bottom * top.inverse()).adjoint()};
}

// Frame of the geodesic through O with initial velocity b, at time t:
// columns of ( U cos(t S) U' ; -V sin(t S) U' ) with b = U S V'.
inline Plane geodesic(const TangentB& tangent, double t) {
  const CMatrix& b = tangent.b;
  const Eigen::Index n = b.rows(), m = b.cols();
  const auto fac = SpectralFactorization::compute(b);
  CVector cosd = CVector::Ones(n);
  for (Eigen::Index i = 0; i < fac.singulars.size(); ++i)
    cosd(i) = std::cos(t * fac.singulars(i));
  CMatrix smat = CMatrix::Zero(m, n);
  for (Eigen::Index i = 0; i < fac.singulars.size(); ++i)
    smat(i, i) = std::sin(t * fac.singulars(i));
  CMatrix frame(n + m, n);
  frame.topRows(n) =
      fac.left_factors * cosd.asDiagonal() * fac.left_factors.adjoint();
  frame.bottomRows(m) = -(fac.right_factors * smat * fac.left_factors.adjoint());
  return Plane(frame);
}

// Geodesic distance d(P,Q) = sqrt(sum theta_i^2) over principal angles.
inline double distance(const Plane& p, const Plane& q) {
  const auto angles = principal_angles(p, q);
  double sum = 0.0;
  for (double a : angles) sum += a * a;
  return std::sqrt(sum);
}

inline CMatrix block_diag(const CMatrix& k1, const CMatrix& k2) {
  CMatrix k = CMatrix::Zero(k1.rows() + k2.rows(), k1.cols() + k2.cols());
  k.topLeftCorner(k1.rows(), k1.cols()) = k1;
  k.bottomRightCorner(k2.rows(), k2.cols()) = k2;
  return k;
}

// Haar-ish random plane: thin QR of a complex Gaussian frame.
inline Plane random_plane(const Shape& s, CounterRng& rng) {
  const CMatrix g = rng.gaussian_matrix(s.ambient(), s.n);
  Eigen::HouseholderQR<CMatrix> qr(g);
  const CMatrix q =
      qr.householderQ() * CMatrix::Identity(s.ambient(), s.n);
  return Plane(q);
}

inline TangentB random_unit_tangent(const Shape& s, CounterRng& rng) {
  CMatrix b = rng.gaussian_matrix(s.n, s.m);
  b /= b.norm();
  return {b};
}

}  // namespace grassgeo
