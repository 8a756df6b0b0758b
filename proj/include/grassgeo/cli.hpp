#pragma once

// Command implementations behind the grassgeo CLI. Each returns the rendered
// report plus the process exit code: 0 all checks pass, 1 a mathematical
// check failed, 2 usage error. Sweep bodies run in parallel over per-index
// slots and every sample stream is keyed on (seed, index), so reports are
// byte-identical across runs and thread counts.

#include <charconv>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "grassgeo/coherent.hpp"
#include "grassgeo/loci.hpp"
#include "grassgeo/parallel.hpp"
#include "grassgeo/topology.hpp"

namespace grassgeo {

using Json = nlohmann::ordered_json;

struct RunConfig {
  int n = 1;
  int m = 1;
  std::uint64_t seed = 0;
  double tol = 1e-9;
  double tol_angle = 1e-6;  // conjugate-point classification tolerance
  double rank_tol = 1e-6;   // relative Jacobian rank threshold
  double t_max = std::numeric_limits<double>::quiet_NaN();  // per-command default
  int samples = -1;                                         // -1 = per-command default
  enum class Format { json, csv } format = Format::json;
};

struct CmdResult {
  std::string output;
  std::string error;
  int exit_code = 0;
};

namespace detail {

inline void validate_config(const RunConfig& cfg) {
  if (cfg.n < 1 || cfg.m < 1) throw ParseError("n and m must be >= 1");
  if (!(cfg.tol > 0.0)) throw ParseError("tol must be positive");
  if (cfg.samples != -1 && cfg.samples < 1) throw ParseError("samples must be >= 1");
  if (!(cfg.tol_angle > 0.0) || !(cfg.rank_tol > 0.0))
    throw ParseError("tol-angle and rank-tol must be positive");
  if (!std::isnan(cfg.t_max) && !(cfg.t_max > 0.0)) throw ParseError("t-max must be positive");
}

inline Json config_json(const RunConfig& cfg) {
  Json j;
  j["n"] = cfg.n;
  j["m"] = cfg.m;
  j["seed"] = cfg.seed;
  j["tol"] = cfg.tol;
  return j;
}

inline Json matrix_json(const CMatrix& z) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < z.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < z.cols(); ++j)
      row.push_back(Json::array({z(i, j).real(), z(i, j).imag()}));
    rows.push_back(std::move(row));
  }
  return rows;
}

// nested arrays of [re, im] pairs, n rows of m columns
inline CMatrix parse_matrix(const std::string& text, int n, int m) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const std::exception& e) {
    throw ParseError(std::string("matrix is not valid JSON: ") + e.what());
  }
  if (!j.is_array() || static_cast<int>(j.size()) != n)
    throw ParseError("matrix must have n rows");
  CMatrix z(n, m);
  for (int i = 0; i < n; ++i) {
    if (!j[i].is_array() || static_cast<int>(j[i].size()) != m)
      throw ParseError("matrix row has wrong length");
    for (int k = 0; k < m; ++k) {
      const auto& cell = j[i][k];
      if (!cell.is_array() || cell.size() != 2 || !cell[0].is_number() || !cell[1].is_number())
        throw ParseError("matrix entries must be [re, im] pairs");
      z(i, k) = Complex(cell[0].get<double>(), cell[1].get<double>());
    }
  }
  return z;
}

inline RVector parse_real_vector(const std::string& text, int len) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const std::exception& e) {
    throw ParseError(std::string("vector is not valid JSON: ") + e.what());
  }
  if (!j.is_array() || static_cast<int>(j.size()) != len)
    throw ParseError("vector has wrong length");
  RVector v(len);
  for (int i = 0; i < len; ++i) {
    if (!j[i].is_number()) throw ParseError("vector entries must be numbers");
    v(i) = j[i].get<double>();
  }
  return v;
}

inline std::string fmt_double(double v) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline std::string render(const Json& j) { return j.dump(2) + "\n"; }

inline CmdResult usage_error(const std::string& what) { return {"", what + "\n", 2}; }

// per-sample counter block so parallel draws stay reproducible
inline constexpr std::uint64_t kCounterBlock = 1u << 14;

}  // namespace detail

// Geodesic report: chart coordinates, distance from O and chart-escape times
// along t -> Exp_O(t b) on a uniform grid.
inline CmdResult cmd_geodesic(RunConfig cfg, const std::optional<std::string>& b_spec,
                              bool random_b) {
  try {
    detail::validate_config(cfg);
    if (std::isnan(cfg.t_max)) cfg.t_max = 2.0;
    if (cfg.samples == -1) cfg.samples = 100;
    const Shape shape(cfg.n, cfg.m);

    TangentB b{CMatrix::Zero(cfg.n, cfg.m)};
    if (random_b) {
      CounterRng rng(cfg.seed);
      b = random_unit_tangent(shape, rng);
    } else if (b_spec) {
      b.b = detail::parse_matrix(*b_spec, cfg.n, cfg.m);
    } else {
      throw ParseError("geodesic: provide --b or --random");
    }

    Json j;
    j["schema_version"] = "1";
    j["command"] = "geodesic";
    j["config"] = detail::config_json(cfg);
    j["config"]["t_max"] = cfg.t_max;
    j["config"]["samples"] = cfg.samples;
    j["b"] = detail::matrix_json(b.b);
    try {
      const double tc = cut_time(b);
      j["cut_time"] = tc;
      // distance from O to the cut point; equals cut_time for unit tangents
      j["cut_arc_length"] = tc * b.b.norm();
    } catch (const ZeroTangent&) {
      j["cut_time"] = nullptr;
      j["cut_arc_length"] = nullptr;
    }

    const Plane origin = base_point(shape);
    Json t_grid = Json::array(), zs = Json::array(), dists = Json::array(),
         escapes = Json::array();
    for (int i = 0; i <= cfg.samples; ++i) {
      const double t = cfg.t_max * i / cfg.samples;
      t_grid.push_back(t);
      dists.push_back(distance(origin, geodesic(b, t)));
      try {
        zs.push_back(detail::matrix_json(exp_map(TangentB{(t * b.b).eval()}).z));
      } catch (const ChartEscape&) {
        zs.push_back(nullptr);
        escapes.push_back(t);
      }
    }
    j["t_grid"] = std::move(t_grid);
    j["z"] = std::move(zs);
    j["distance"] = std::move(dists);
    j["chart_escape_times"] = std::move(escapes);
    return {detail::render(j), "", 0};
  } catch (const ParseError& e) {
    return detail::usage_error(e.what());
  } catch (const std::invalid_argument& e) {
    return detail::usage_error(e.what());
  }
}

// Conjugate-locus report: predicted records, coincidence-merged times,
// grid-scan detections with kernel dimensions, per-point classification,
// and the prediction/detection agreement verdict.
inline CmdResult cmd_conjugate_scan(RunConfig cfg, const std::optional<std::string>& h_spec,
                                    bool random_h) {
  try {
    detail::validate_config(cfg);
    const Shape shape(cfg.n, cfg.m);

    std::optional<DirectionH> dir;
    if (random_h) {
      CounterRng rng(cfg.seed);
      dir = random_generic_direction(shape, rng);
    } else if (h_spec) {
      RVector h = detail::parse_real_vector(*h_spec, shape.r());
      if (std::abs(h.squaredNorm() - 1.0) > 1e-6)
        throw ParseError("h must be normalized: sum h_i^2 = 1");
      h /= h.norm();
      dir = DirectionH(h);
    } else {
      throw ParseError("conjugate-scan: provide --h or --random");
    }
    if (dir->h.cwiseAbs().minCoeff() < 1e-9)
      throw ParseError("h components must be nonzero");
    if (std::isnan(cfg.t_max))
      cfg.t_max = 1.1 * std::numbers::pi / dir->h.cwiseAbs().minCoeff();

    const auto records = conjugate_times(shape, *dir, cfg.t_max);
    const auto merged = merge_conjugate_times(records);
    ConjugacyScanOptions scan_opts;
    scan_opts.rank_tol = cfg.rank_tol;
    const auto detections =
        scan_conjugacies(direction_tangent(shape, *dir), cfg.t_max, scan_opts);

    Json j;
    j["schema_version"] = "1";
    j["command"] = "conjugate-scan";
    j["config"] = detail::config_json(cfg);
    j["config"]["t_max"] = cfg.t_max;
    Json h_json = Json::array();
    for (Eigen::Index i = 0; i < dir->h.size(); ++i) h_json.push_back(dir->h(i));
    j["h"] = std::move(h_json);

    Json preds = Json::array();
    for (const auto& rec : records) {
      Json p;
      p["t"] = rec.t;
      p["family"] = family_name(rec.family);
      p["multiplicity"] = rec.multiplicity;
      p["p"] = rec.p;
      if (rec.q)
        p["q"] = *rec.q;
      else
        p["q"] = nullptr;
      p["lambda"] = rec.lambda;
      preds.push_back(std::move(p));
    }
    j["predictions"] = std::move(preds);

    Json merged_json = Json::array();
    for (const auto& mc : merged)
      merged_json.push_back(Json{{"t", mc.t}, {"multiplicity", mc.multiplicity}});
    j["merged_predictions"] = std::move(merged_json);

    Json det_json = Json::array();
    for (const auto& d : detections)
      det_json.push_back(Json{{"t", d.t}, {"multiplicity", d.multiplicity}});
    j["detections"] = std::move(det_json);

    Json points = Json::array();
    for (const auto& mc : merged) {
      const Plane p = direction_plane(shape, *dir, mc.t);
      const auto cls = classify_conjugate(p, cfg.tol_angle);
      Json pj;
      pj["t"] = mc.t;
      pj["i_stratum"] = cls.i_stratum;
      pj["w_stratum"] = cls.w_stratum;
      Json angles = Json::array();
      for (double a : cls.witness_angles) angles.push_back(a);
      pj["angles"] = std::move(angles);
      points.push_back(std::move(pj));
    }
    j["points"] = std::move(points);

    constexpr double kMatchTol = 1e-2;
    bool agreement = true;
    for (const auto& mc : merged) {
      bool hit = false;
      for (const auto& d : detections)
        if (std::abs(d.t - mc.t) <= kMatchTol && d.multiplicity == mc.multiplicity) hit = true;
      if (!hit) agreement = false;
    }
    for (const auto& d : detections) {
      bool hit = false;
      for (const auto& mc : merged)
        if (std::abs(d.t - mc.t) <= kMatchTol) hit = true;
      if (!hit) agreement = false;
    }
    j["agreement"] = agreement;
    return {detail::render(j), "", agreement ? 0 : 1};
  } catch (const ParseError& e) {
    return detail::usage_error(e.what());
  } catch (const std::invalid_argument& e) {
    return detail::usage_error(e.what());
  }
}

// Seven-invariant report; exit 1 when the seven numbers disagree.
inline CmdResult cmd_seven(RunConfig cfg, const std::optional<std::string>& weights_spec,
                           bool auto_weights) {
  try {
    detail::validate_config(cfg);
    const Shape shape(cfg.n, cfg.m);
    RVector a(shape.ambient());
    if (auto_weights) {
      for (int k = 0; k < shape.ambient(); ++k) a(k) = k + 1;
    } else if (weights_spec) {
      a = detail::parse_real_vector(*weights_spec, shape.ambient());
    } else {
      throw ParseError("seven: provide --weights or --auto");
    }
    const EnergyWeights w(a);
    const auto rep = seven_numbers(shape, w, cfg.seed);

    Json j;
    j["schema_version"] = "1";
    j["command"] = "seven";
    j["config"] = detail::config_json(cfg);
    Json wj = Json::array();
    for (Eigen::Index i = 0; i < a.size(); ++i) wj.push_back(a(i));
    j["weights"] = std::move(wj);
    Json r;
    r["orthogonal_coherent_count"] = rep.orthogonal_coherent_count;
    r["sections_dim"] = rep.sections_dim;
    r["borel_weil_dim"] = rep.borel_weil_dim;
    r["kodaira_N"] = rep.kodaira_N;
    r["critical_point_count"] = rep.critical_point_count;
    r["euler_characteristic"] = rep.euler_characteristic;
    r["cell_count"] = rep.cell_count;
    r["all_equal"] = rep.all_equal;
    j["report"] = std::move(r);
    return {detail::render(j), "", rep.all_equal ? 0 : 1};
  } catch (const ParseError& e) {
    return detail::usage_error(e.what());
  } catch (const DegenerateWeights& e) {
    return detail::usage_error(e.what());
  } catch (const TooLarge& e) {
    return detail::usage_error(e.what());
  } catch (const Overflow& e) {
    return detail::usage_error(e.what());
  } catch (const std::invalid_argument& e) {
    return detail::usage_error(e.what());
  }
}

namespace detail {

struct DiastasisRow {
  double d = 0.0;
  double theta = 0.0;
  double residual = 0.0;
};

// Sample a chart pair in general position (overlap bounded away from the
// polar divisor, where the relation is ill-conditioned) and evaluate the
// two-route diastasis relation.
inline DiastasisRow diastasis_sample(const Shape& shape, std::uint64_t seed, std::uint64_t index) {
  CounterRng rng(seed, index * kCounterBlock);
  for (int attempt = 0; attempt < 200; ++attempt) {
    const ChartZ z1{0.5 * rng.gaussian_matrix(shape.n, shape.m)};
    const ChartZ z2{0.5 * rng.gaussian_matrix(shape.n, shape.m)};
    if (overlap(z1, z2).modulus < 1e-3) continue;
    const auto rel = check_diastasis_relation(z1, z2);
    return {rel.diastasis, rel.theta, rel.residual};
  }
  throw Error("diastasis_sample: sampling did not converge");
}

}  // namespace detail

// Sweep of the diastasis relation D = -2 log cos theta over random chart
// pairs; CSV rows (index, D, theta, residual) plus a max-residual summary.
inline CmdResult cmd_diastasis_sweep(RunConfig cfg) {
  try {
    detail::validate_config(cfg);
    if (cfg.samples == -1) cfg.samples = 200;
    const Shape shape(cfg.n, cfg.m);

    std::vector<detail::DiastasisRow> rows(static_cast<std::size_t>(cfg.samples));
    parallel_for(rows.size(), [&](std::size_t i) {
      rows[i] = detail::diastasis_sample(shape, cfg.seed, static_cast<std::uint64_t>(i));
    });
    double max_residual = 0.0;
    for (const auto& row : rows) max_residual = std::max(max_residual, row.residual);
    const bool pass = max_residual <= cfg.tol;

    if (cfg.format == RunConfig::Format::csv) {
      std::string out = "index,D,theta,residual\n";
      for (std::size_t i = 0; i < rows.size(); ++i)
        out += std::to_string(i) + "," + detail::fmt_double(rows[i].d) + "," +
               detail::fmt_double(rows[i].theta) + "," +
               detail::fmt_double(rows[i].residual) + "\n";
      out += "max,,," + detail::fmt_double(max_residual) + "\n";
      return {out, "", pass ? 0 : 1};
    }
    Json j;
    j["schema_version"] = "1";
    j["command"] = "diastasis-sweep";
    j["config"] = detail::config_json(cfg);
    j["config"]["samples"] = cfg.samples;
    Json rj = Json::array();
    for (std::size_t i = 0; i < rows.size(); ++i)
      rj.push_back(Json{{"index", i},
                        {"D", rows[i].d},
                        {"theta", rows[i].theta},
                        {"residual", rows[i].residual}});
    j["rows"] = std::move(rj);
    j["max_residual"] = max_residual;
    j["pass"] = pass;
    return {detail::render(j), "", pass ? 0 : 1};
  } catch (const ParseError& e) {
    return detail::usage_error(e.what());
  } catch (const std::invalid_argument& e) {
    return detail::usage_error(e.what());
  }
}

// Cut-locus checks: unit-speed distance up to the cut time and strictly
// shorter beyond it, polar-divisor membership of the cut point, and the
// exclusive chart / polar-divisor classification of random planes.
inline CmdResult cmd_cut_test(RunConfig cfg) {
  try {
    detail::validate_config(cfg);
    if (cfg.samples == -1) cfg.samples = 50;
    const Shape shape(cfg.n, cfg.m);
    const Plane origin = base_point(shape);

    std::vector<int> tangent_fail(static_cast<std::size_t>(cfg.samples), 0);
    std::vector<int> plane_fail(static_cast<std::size_t>(cfg.samples), 0);
    parallel_for(static_cast<std::size_t>(cfg.samples), [&](std::size_t i) {
      CounterRng rng(cfg.seed, (static_cast<std::uint64_t>(i) + 1) * detail::kCounterBlock);
      const TangentB b = random_unit_tangent(shape, rng);
      const double tc = cut_time(b);
      const double before = 0.95 * tc;
      const double after = 1.05 * tc;
      bool ok = std::abs(distance(origin, geodesic(b, before)) - before) <= cfg.tol;
      ok = ok && distance(origin, geodesic(b, after)) < after - 1e-4;
      ok = ok && is_cut_locus(geodesic(b, tc));
      tangent_fail[i] = ok ? 0 : 1;

      const Plane p = random_plane(shape, rng);
      bool in_chart = true;
      try {
        (void)z_from_plane(p);
      } catch (const OnPolarDivisor&) {
        in_chart = false;
      }
      plane_fail[i] = (in_chart != is_cut_locus(p)) ? 0 : 1;
    });

    int tangent_failures = 0, plane_failures = 0;
    for (int f : tangent_fail) tangent_failures += f;
    for (int f : plane_fail) plane_failures += f;
    const int counterexamples = tangent_failures + plane_failures;

    Json j;
    j["schema_version"] = "1";
    j["command"] = "cut-test";
    j["config"] = detail::config_json(cfg);
    j["config"]["samples"] = cfg.samples;
    j["tangent_samples"] = cfg.samples;
    j["plane_samples"] = cfg.samples;
    j["tangent_failures"] = tangent_failures;
    j["plane_failures"] = plane_failures;
    j["counterexamples"] = counterexamples;
    j["pass"] = counterexamples == 0;
    return {detail::render(j), "", counterexamples == 0 ? 0 : 1};
  } catch (const ParseError& e) {
    return detail::usage_error(e.what());
  } catch (const std::invalid_argument& e) {
    return detail::usage_error(e.what());
  }
}

}  // namespace grassgeo
