#pragma once

// Independent oracles used across the test suites. None of these share a
// code path with the library implementations they check:
//  * dense_exp_frame exponentiates the block generator through Eigen's
//    Hermitian eigensolver (the library assembles frames from an SVD)
//  * extract_z inverts the top block directly
//  * ball_distance moves a point to the origin with the explicit ball
//    automorphism and reads off arctanh of the image norm
//  * binomial is a Pascal-triangle table
//  * partitions_in_box_brute enumerates partitions recursively

#include <cmath>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "grassgeo/matfun.hpp"

namespace oracles {

using grassgeo::CMatrix;
using grassgeo::Complex;
using grassgeo::CVector;

// First n columns of exp(0 B; -B' 0), computed as exp(-iH) with H = i X
// Hermitian and diagonalized.
inline CMatrix dense_exp_frame(const CMatrix& b) {
  const Eigen::Index n = b.rows(), m = b.cols();
  CMatrix x = CMatrix::Zero(n + m, n + m);
  x.topRightCorner(n, m) = b;
  x.bottomLeftCorner(m, n) = -b.adjoint();
  const CMatrix h = Complex(0.0, 1.0) * x;
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
  CVector phases(n + m);
  for (Eigen::Index k = 0; k < n + m; ++k)
    phases(k) = std::exp(Complex(0.0, -es.eigenvalues()(k)));
  const CMatrix expx =
      es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
  return expx.leftCols(n);
}

// Chart coordinates of a frame: Z = -(bottom * top^{-1})'.
inline CMatrix extract_z(const CMatrix& frame, Eigen::Index n) {
  const CMatrix top = frame.topRows(n);
  const CMatrix bottom = frame.bottomRows(frame.rows() - n);
  return -(bottom * top.inverse()).adjoint();
}

// Geodesic distance on the unit ball of C^m with holomorphic sectional
// curvature -4 (so d(0, z) = arctanh |z|), via the ball automorphism
// phi_a(w) = (a - P_a w - s_a Q_a w) / (1 - <w, a>).
inline double ball_distance(const CVector& a, const CVector& w) {
  const double na2 = a.squaredNorm();
  if (na2 < 1e-30) return std::atanh(w.norm());
  const Complex wa = a.dot(w);  // sum conj(a_i) w_i
  const CVector pw = (wa / na2) * a;
  const CVector qw = w - pw;
  const double s = std::sqrt(1.0 - na2);
  const CVector phi = (a - pw - s * qw) / (1.0 - wa);
  return std::atanh(std::min(phi.norm(), 1.0 - 1e-16));
}

inline std::uint64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  std::vector<std::uint64_t> row(static_cast<std::size_t>(n) + 1, 0);
  row[0] = 1;
  for (int i = 1; i <= n; ++i)
    for (int j = i; j >= 1; --j) row[static_cast<std::size_t>(j)] += row[static_cast<std::size_t>(j - 1)];
  return row[static_cast<std::size_t>(k)];
}

inline std::uint64_t partitions_rec(int rows_left, int max_part) {
  if (rows_left == 0) return 1;
  std::uint64_t total = 1;  // all remaining parts zero
  for (int p = 1; p <= max_part; ++p) total += partitions_rec(rows_left - 1, p);
  return total;
}

inline std::uint64_t partitions_in_box_brute(int n, int m) {
  return partitions_rec(n, m);
}

}  // namespace oracles
