#pragma once

// Dense complex matrix-function kernel: SVD-driven evaluation of odd matrix
// functions B -> B f(sqrt(B'B)), principal angles between subspace frames,
// and central-difference Jacobians with singular-value rank analysis.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

#include "grassgeo/errors.hpp"

namespace grassgeo {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

// proximity to a kernel pole that raises KernelPole / ChartEscape
inline constexpr double kPoleTol = 1e-9;
// below this scale /sigma kernels switch to their analytic limit
inline constexpr double kKernelZeroSwitch = 1e-7;

struct SpectralFactorization {
  CMatrix left_factors;   // n x n unitary
  RVector singulars;      // min(n,m), descending, >= 0
  CMatrix right_factors;  // m x m unitary

  static SpectralFactorization compute(const CMatrix& b) {
    Eigen::JacobiSVD<CMatrix> svd(b, Eigen::ComputeFullU | Eigen::ComputeFullV);
    return {svd.matrixU(), svd.singularValues(), svd.matrixV()};
  }

  CMatrix reconstruct() const {
    const Eigen::Index n = left_factors.rows();
    const Eigen::Index m = right_factors.rows();
    CMatrix sigma = CMatrix::Zero(n, m);
    for (Eigen::Index i = 0; i < singulars.size(); ++i) sigma(i, i) = singulars(i);
    return left_factors * sigma * right_factors.adjoint();
  }
};

enum class KernelFn { tan, arctan, sin, cos, sinc, tanc, arctanc };

// Scalar kernel f acting on singular values. The /sigma family (sinc, tanc,
// arctanc) stores its sigma -> 0 limit and switches to it below
// kKernelZeroSwitch where direct division loses all relative accuracy.
struct ScalarKernel {
  KernelFn name;
  double value_at_zero;

  double operator()(double s) const {
    switch (name) {
      case KernelFn::tan: return std::tan(s);
      case KernelFn::arctan: return std::atan(s);
      case KernelFn::sin: return std::sin(s);
      case KernelFn::cos: return std::cos(s);
      case KernelFn::sinc: return s < kKernelZeroSwitch ? value_at_zero : std::sin(s) / s;
      case KernelFn::tanc: return s < kKernelZeroSwitch ? value_at_zero : std::tan(s) / s;
      case KernelFn::arctanc: return s < kKernelZeroSwitch ? value_at_zero : std::atan(s) / s;
    }
    return 0.0;
  }

  bool has_pole() const { return name == KernelFn::tan || name == KernelFn::tanc; }

  static ScalarKernel tan() { return {KernelFn::tan, 0.0}; }
  static ScalarKernel arctan() { return {KernelFn::arctan, 0.0}; }
  static ScalarKernel sin() { return {KernelFn::sin, 0.0}; }
  static ScalarKernel cos() { return {KernelFn::cos, 1.0}; }
  static ScalarKernel sinc() { return {KernelFn::sinc, 1.0}; }
  static ScalarKernel tanc() { return {KernelFn::tanc, 1.0}; }
  static ScalarKernel arctanc() { return {KernelFn::arctanc, 1.0}; }
};

// distance from s to the nearest pole of tan, pi/2 + k pi
inline double tan_pole_distance(double s) {
  return std::abs(std::remainder(s - std::numbers::pi / 2, std::numbers::pi));
}

// B f(sqrt(B'B)) = U diag(sigma_i f(sigma_i)) V'. With f = tanc this is the
// chart map Z = B tan(sqrt(B'B))/sqrt(B'B); with f = arctanc its inverse.
inline CMatrix apply_odd_kernel(const CMatrix& b, const ScalarKernel& f) {
  const auto fac = SpectralFactorization::compute(b);
  if (f.has_pole()) {
    for (Eigen::Index i = 0; i < fac.singulars.size(); ++i)
      if (tan_pole_distance(fac.singulars(i)) < kPoleTol)
        throw KernelPole("apply_odd_kernel: singular value at a tan pole");
  }
  const Eigen::Index n = b.rows(), m = b.cols();
  CMatrix mid = CMatrix::Zero(n, m);
  for (Eigen::Index i = 0; i < fac.singulars.size(); ++i) {
    const double s = fac.singulars(i);
    mid(i, i) = s * f(s);
  }
  return fac.left_factors * mid * fac.right_factors.adjoint();
}

// Principal angles between the column spans of two orthonormal frames,
// arccos of the singular values of P'Q clamped to [0,1], ascending.
inline std::vector<double> principal_angles(const CMatrix& p, const CMatrix& q) {
  if (p.rows() != q.rows() || p.cols() != q.cols())
    throw ShapeMismatch("principal_angles: frame shapes differ");
  Eigen::JacobiSVD<CMatrix> svd(p.adjoint() * q);
  const auto& sv = svd.singularValues();
  std::vector<double> angles(static_cast<std::size_t>(sv.size()));
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    angles[static_cast<std::size_t>(i)] = std::acos(std::clamp(sv(i), 0.0, 1.0));
  std::sort(angles.begin(), angles.end());
  return angles;
}

using RealMap = std::function<RVector(const RVector&)>;

inline double default_fd_step(const RVector& point) {
  return 1e-5 * std::max(1.0, point.norm());
}

inline RMatrix numeric_jacobian(const RealMap& map, const RVector& point, double step) {
  const RVector f0 = map(point);
  RMatrix jac(f0.size(), point.size());
  for (Eigen::Index j = 0; j < point.size(); ++j) {
    RVector xp = point;
    RVector xm = point;
    xp(j) += step;
    xm(j) -= step;
    jac.col(j) = (map(xp) - map(xm)) / (2.0 * step);
  }
  return jac;
}

struct DifferentialRank {
  int rank = 0;
  std::vector<double> smallest_singulars;  // all singular values, ascending
};

// Numeric rank of the differential of `map` at `point`: singular values of
// the central-difference Jacobian above tol * sigma_max count toward the
// rank. The tolerance is relative so the answer is invariant under uniform
// rescaling of the map.
inline DifferentialRank differential_rank(const RealMap& map, const RVector& point,
                                          double step, double tol) {
  const RMatrix jac = numeric_jacobian(map, point, step);
  Eigen::JacobiSVD<RMatrix> svd(jac);
  const auto& sv = svd.singularValues();
  const double smax = sv.size() > 0 ? sv(0) : 0.0;
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > tol * smax) ++rank;
  std::vector<double> sing(sv.data(), sv.data() + sv.size());
  std::sort(sing.begin(), sing.end());
  return {rank, std::move(sing)};
}

// realification helpers: column-major, [re, im] per complex entry
inline RVector realify(const CMatrix& a) {
  RVector x(2 * a.size());
  Eigen::Index k = 0;
  for (Eigen::Index j = 0; j < a.cols(); ++j)
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      x(k++) = a(i, j).real();
      x(k++) = a(i, j).imag();
    }
  return x;
}

inline CMatrix unrealify(const RVector& x, Eigen::Index rows, Eigen::Index cols) {
  CMatrix a(rows, cols);
  Eigen::Index k = 0;
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) {
      a(i, j) = Complex(x(k), x(k + 1));
      k += 2;
    }
  return a;
}

}  // namespace grassgeo
