#pragma once

// Conjugate locus of the base point: predicted times, multiplicities and
// families along a Cartan direction H = sum_i h_i D_{i,n+i}, chart-free
// numeric detection through the projector embedding P -> frame frame', the
// I/W stationary-angle classification and the V^p_l / W^p_l strata. Cut
// locus: cut times and polar-divisor membership.
//
// Along H the conjugate times are
//   t1 = lambda pi / |h_p +- h_q|, multiplicity 2,        1 <= p < q <= r
//   t2 = lambda pi / (2 |h_p|),    multiplicity 1,        1 <= p <= r
//   t3 = lambda pi / |h_p|,        multiplicity 2|m - n|, only when m != n
// for lambda = 1, 2, ...; every t3 time coincides exactly with the t2 time
// at 2 lambda, so kernel dimensions observed at such times are the sums of
// the family multiplicities.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <vector>

#include "grassgeo/grassmann.hpp"

namespace grassgeo {

struct DirectionH {
  RVector h;  // length r = min(n,m), with sum h_i^2 = 1

  explicit DirectionH(RVector h_) : h(std::move(h_)) {
    if (std::abs(h.squaredNorm() - 1.0) > 1e-12)
      throw std::invalid_argument("DirectionH: coefficients must satisfy sum h_i^2 = 1");
  }
};

enum class ConjugateFamily { T1_plus, T1_minus, T2, T3 };

inline const char* family_name(ConjugateFamily f) {
  switch (f) {
    case ConjugateFamily::T1_plus: return "T1+";
    case ConjugateFamily::T1_minus: return "T1-";
    case ConjugateFamily::T2: return "T2";
    case ConjugateFamily::T3: return "T3";
  }
  return "?";
}

struct ConjugateTimeRecord {
  double t = 0.0;
  ConjugateFamily family = ConjugateFamily::T2;
  int multiplicity = 0;
  int p = 0;                  // 1-based
  std::optional<int> q = {};  // T1 only
  int lambda = 0;
};

// The tangent realization of H: b(h) = [diag(h) | 0], n x m.
inline TangentB direction_tangent(const Shape& s, const DirectionH& dir) {
  CMatrix b = CMatrix::Zero(s.n, s.m);
  for (int i = 0; i < s.r(); ++i) b(i, i) = dir.h(i);
  return {b};
}

// All predicted conjugate times in (0, t_max], sorted ascending. Records are
// per family/index/lambda; families whose denominator vanishes emit nothing.
inline std::vector<ConjugateTimeRecord> conjugate_times(const Shape& s, const DirectionH& dir,
                                                        double t_max) {
  if (t_max <= 0.0) throw std::invalid_argument("conjugate_times: t_max must be positive");
  constexpr double kDenomFloor = 1e-12;
  const double pi = std::numbers::pi;
  std::vector<ConjugateTimeRecord> out;
  const int r = s.r();

  const auto emit = [&](double denom, ConjugateFamily fam, int mult, int p,
                        std::optional<int> q) {
    if (denom < kDenomFloor) return;
    for (int lambda = 1;; ++lambda) {
      const double t = lambda * pi / denom;
      if (t > t_max) break;
      out.push_back({t, fam, mult, p, q, lambda});
    }
  };

  for (int p = 1; p <= r; ++p)
    for (int q = p + 1; q <= r; ++q) {
      emit(std::abs(dir.h(p - 1) + dir.h(q - 1)), ConjugateFamily::T1_plus, 2, p, q);
      emit(std::abs(dir.h(p - 1) - dir.h(q - 1)), ConjugateFamily::T1_minus, 2, p, q);
    }
  for (int p = 1; p <= r; ++p)
    emit(2.0 * std::abs(dir.h(p - 1)), ConjugateFamily::T2, 1, p, {});
  if (s.m != s.n)
    for (int p = 1; p <= r; ++p)
      emit(std::abs(dir.h(p - 1)), ConjugateFamily::T3, 2 * std::abs(s.m - s.n), p, {});

  std::stable_sort(out.begin(), out.end(),
                   [](const auto& a, const auto& b) { return a.t < b.t; });
  return out;
}

struct MergedConjugateTime {
  double t = 0.0;
  int multiplicity = 0;  // summed over coincident families
};

// Collapse records sharing a time within tol; kernel dimensions add across
// coincident families.
inline std::vector<MergedConjugateTime> merge_conjugate_times(
    const std::vector<ConjugateTimeRecord>& records, double tol = 1e-12) {
  std::vector<MergedConjugateTime> merged;
  for (const auto& rec : records) {
    if (!merged.empty() && std::abs(rec.t - merged.back().t) <= tol)
      merged.back().multiplicity += rec.multiplicity;
    else
      merged.push_back({rec.t, rec.multiplicity});
  }
  return merged;
}

// Geodesic point in direction H at time t, optionally conjugated by a
// block-diagonal unitary k = diag(k1, k2) from the isotropy group.
inline Plane direction_plane(const Shape& s, const DirectionH& dir, double t,
                             const std::optional<CMatrix>& k = {}) {
  Plane p = geodesic(direction_tangent(s, dir), t);
  if (!k) return p;
  if (k->rows() != s.ambient() || k->cols() != s.ambient())
    throw KNotBlockDiagonal("direction_plane: k has the wrong size");
  const double off = std::max(k->topRightCorner(s.n, s.m).cwiseAbs().maxCoeff(),
                              k->bottomLeftCorner(s.m, s.n).cwiseAbs().maxCoeff());
  if (off > 1e-10)
    throw KNotBlockDiagonal("direction_plane: k mixes the two blocks");
  return Plane(*k * p.frame());
}

// Realified map B -> frame(Exp_O(B)) frame(Exp_O(B))', whose differential
// degenerates exactly at conjugate parameters. The projector embedding is
// used instead of the chart because T2/T3 points sit on the polar divisor
// where the chart blows up.
inline RealMap projector_map(const Shape& s) {
  const int n = s.n, m = s.m;
  return [n, m](const RVector& x) {
    const CMatrix b = unrealify(x, n, m);
    const CMatrix f = geodesic(TangentB{b}, 1.0).frame();
    return realify(f * f.adjoint());
  };
}

// Kernel dimension of the differential of the exponential at t*b, via the
// projector embedding: 2nm minus the numeric Jacobian rank.
inline int conjugacy_multiplicity(const TangentB& b, double t, double rank_tol = 1e-6) {
  if (t <= 0.0) throw std::invalid_argument("conjugacy_multiplicity: t must be positive");
  const Shape s(static_cast<int>(b.b.rows()), static_cast<int>(b.b.cols()));
  const RVector point = realify((t * b.b).eval());
  const auto dr = differential_rank(projector_map(s), point, default_fd_step(point), rank_tol);
  return 2 * s.n * s.m - dr.rank;
}

struct ConjugateClass {
  bool i_stratum = false;               // two stationary angles coincide
  bool w_stratum = false;               // some angle is 0 or pi/2
  std::vector<double> witness_angles;   // the stationary angles used
};

inline ConjugateClass classify_conjugate(const Plane& p, double tol_angle = 1e-6) {
  const auto angles = principal_angles(p, base_point(p.shape()));
  ConjugateClass cls;
  cls.witness_angles = angles;
  for (std::size_t i = 0; i < angles.size(); ++i) {
    if (angles[i] <= tol_angle || std::numbers::pi / 2 - angles[i] <= tol_angle)
      cls.w_stratum = true;
    for (std::size_t j = i + 1; j < angles.size(); ++j)
      if (std::abs(angles[i] - angles[j]) <= tol_angle) cls.i_stratum = true;
  }
  return cls;
}

// dim(P intersect span(columns of basis)), with basis orthonormalized here.
inline int intersection_dim(const Plane& p, const CMatrix& basis) {
  if (basis.rows() != p.frame().rows())
    throw ShapeMismatch("intersection_dim: ambient dimensions differ");
  Eigen::HouseholderQR<CMatrix> qr(basis);
  const CMatrix q = qr.householderQ() * CMatrix::Identity(basis.rows(), basis.cols());
  const CMatrix rest = p.frame() - q * (q.adjoint() * p.frame());
  Eigen::JacobiSVD<CMatrix> svd(rest);
  const auto& sv = svd.singularValues();
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > kChartTol) ++rank;
  return static_cast<int>(p.frame().cols()) - rank;
}

// dim(P intersect C^p) with C^p = span(e_1..e_p): n minus the rank of the
// complement-projected frame. P is in V^p_l iff the result is >= l and in
// W^p_l iff it equals l.
inline int stratum_intersection_dim(const Plane& p, int pdim) {
  const Shape s = p.shape();
  if (pdim < 1 || pdim > s.ambient())
    throw std::invalid_argument("stratum_intersection_dim: p out of range");
  if (pdim == s.ambient()) return s.n;
  const CMatrix rest = p.frame().bottomRows(s.ambient() - pdim);
  Eigen::JacobiSVD<CMatrix> svd(rest);
  const auto& sv = svd.singularValues();
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > kChartTol) ++rank;
  return s.n - rank;
}

inline bool in_v_stratum(const Plane& p, int pdim, int l) {
  return stratum_intersection_dim(p, pdim) >= l;
}

inline bool in_w_stratum(const Plane& p, int pdim, int l) {
  return stratum_intersection_dim(p, pdim) == l;
}

// First time the largest principal angle with O reaches pi/2, after which
// the geodesic stops minimizing: t_cut = pi / (2 sigma_max(b)).
inline double cut_time(const TangentB& b) {
  Eigen::JacobiSVD<CMatrix> svd(b.b);
  const double smax = svd.singularValues().size() > 0 ? svd.singularValues()(0) : 0.0;
  if (smax < 1e-15) throw ZeroTangent("cut_time: zero tangent");
  return std::numbers::pi / (2.0 * smax);
}

// Polar-divisor membership: the top block of the frame is singular at tol.
// Complements z_from_plane, which gates on the same quantity.
inline bool is_cut_locus(const Plane& p, double tol = kChartTol) {
  const Shape s = p.shape();
  Eigen::JacobiSVD<CMatrix> svd(p.frame().topRows(s.n));
  return svd.singularValues()(s.n - 1) < tol;
}

struct DetectedConjugacy {
  double t = 0.0;
  int multiplicity = 0;
};

struct ConjugacyScanOptions {
  double grid_step = 1e-2;
  double rank_tol = 1e-6;
  double refine_width = 1e-8;
  double local_min_gate = 0.2;  // smallest/largest singular ratio worth refining
};

namespace detail {

template <class F>
double golden_min(F&& f, double lo, double hi, double width) {
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = lo, b = hi;
  double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  while (b - a > width) {
    if (f1 > f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + phi * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - phi * (b - a);
      f1 = f(x1);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace detail

// Detect conjugate times along t -> t*b without using the predictions: scan
// the smallest/largest Jacobian singular ratio of the projector map on a
// grid, polish every candidate local minimum by golden section, and keep the
// points whose refined kernel dimension is positive.
inline std::vector<DetectedConjugacy> scan_conjugacies(const TangentB& b, double t_max,
                                                       const ConjugacyScanOptions& opt = {}) {
  const Shape s(static_cast<int>(b.b.rows()), static_cast<int>(b.b.cols()));
  const RealMap map = projector_map(s);
  const int dom = 2 * s.n * s.m;

  const auto singulars_at = [&](double t) {
    const RVector point = realify((t * b.b).eval());
    const RMatrix jac = numeric_jacobian(map, point, default_fd_step(point));
    Eigen::JacobiSVD<RMatrix> svd(jac);
    return RVector(svd.singularValues());
  };
  const auto ratio_at = [&](double t) {
    const RVector sv = singulars_at(t);
    return sv(0) > 0 ? sv(sv.size() - 1) / sv(0) : 0.0;
  };

  const double h = opt.grid_step;
  const int count = static_cast<int>(std::ceil(t_max / h)) + 3;
  std::vector<double> ratio(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) ratio[static_cast<std::size_t>(i)] = ratio_at((i + 1) * h);

  std::vector<DetectedConjugacy> found;
  for (int i = 1; i + 1 < count; ++i) {
    const double r0 = ratio[static_cast<std::size_t>(i)];
    if (r0 > ratio[static_cast<std::size_t>(i - 1)] ||
        r0 > ratio[static_cast<std::size_t>(i + 1)] || r0 >= opt.local_min_gate)
      continue;
    const double t_star =
        detail::golden_min(ratio_at, i * h, (i + 2) * h, opt.refine_width);
    const RVector sv = singulars_at(t_star);
    const double smax = sv(0);
    int mult = 0;
    for (Eigen::Index k = 0; k < sv.size(); ++k)
      if (sv(k) < opt.rank_tol * smax) ++mult;
    mult = std::min(mult, dom);
    if (mult < 1 || t_star > t_max + 0.5 * h) continue;
    if (!found.empty() && std::abs(found.back().t - t_star) < h) continue;
    found.push_back({t_star, mult});
  }
  return found;
}

// Rejection-sample a generic direction: every |h_i| bounded away from zero
// and all distinct predicted times separated well beyond the scan grid, so
// the only coincidences left are the exact t2/t3 ones.
inline DirectionH random_generic_direction(const Shape& s, CounterRng& rng,
                                           double min_component = 0.15,
                                           double min_gap = 0.035,
                                           int max_tries = 5000) {
  for (int attempt = 0; attempt < max_tries; ++attempt) {
    RVector h = rng.gaussian_vector(s.r());
    h /= h.norm();
    if (h.cwiseAbs().minCoeff() < min_component) continue;
    DirectionH dir(h);
    const double t_max = 1.1 * std::numbers::pi / h.cwiseAbs().minCoeff();
    const auto merged = merge_conjugate_times(conjugate_times(s, dir, t_max));
    bool ok = true;
    for (std::size_t i = 1; i < merged.size() && ok; ++i)
      if (merged[i].t - merged[i - 1].t < min_gap) ok = false;
    if (ok) return dir;
  }
  throw Error("random_generic_direction: sampling did not converge");
}

}  // namespace grassgeo
