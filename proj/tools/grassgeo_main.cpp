// grassgeo command-line front end.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "grassgeo/cli.hpp"

namespace {

struct CommonOpts {
  grassgeo::RunConfig cfg;
  std::string format = "json";
  std::string output;
};

void add_common(CLI::App* sub, CommonOpts& opts) {
  sub->add_option("--n", opts.cfg.n, "plane dimension n");
  sub->add_option("--m", opts.cfg.m, "codimension m");
  sub->add_option("--seed", opts.cfg.seed, "RNG seed");
  sub->add_option("--tol", opts.cfg.tol, "check tolerance");
  sub->add_option("--t-max", opts.cfg.t_max, "largest geodesic parameter");
  sub->add_option("--samples", opts.cfg.samples, "number of samples / grid cells");
  sub->add_option("--format", opts.format, "output format: json or csv");
  sub->add_option("--output", opts.output, "write the report to this path");
}

int finish(const grassgeo::CmdResult& res, const CommonOpts& opts) {
  if (!res.error.empty()) std::cerr << res.error;
  if (!res.output.empty()) {
    if (opts.output.empty()) {
      std::cout << res.output;
    } else {
      std::ofstream out(opts.output, std::ios::binary);
      if (!out) {
        std::cerr << "cannot open output file: " << opts.output << "\n";
        return 2;
      }
      out << res.output;
    }
  }
  return res.exit_code;
}

bool apply_format(CommonOpts& opts, bool csv_allowed, std::string* err) {
  if (opts.format == "json") {
    opts.cfg.format = grassgeo::RunConfig::Format::json;
    return true;
  }
  if (opts.format == "csv") {
    if (!csv_allowed) {
      *err = "csv output is only available for diastasis-sweep";
      return false;
    }
    opts.cfg.format = grassgeo::RunConfig::Format::csv;
    return true;
  }
  *err = "unknown format: " + opts.format;
  return false;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"grassgeo: coherent-state geometry of complex Grassmannians"};
  app.require_subcommand(1);

  CommonOpts geo_opts;
  std::string geo_b;
  bool geo_random = false;
  auto* geo = app.add_subcommand("geodesic", "chart coordinates and distance along a geodesic");
  add_common(geo, geo_opts);
  geo->add_option("--b", geo_b, "tangent matrix as JSON [[ [re,im], ... ], ...]");
  geo->add_flag("--random", geo_random, "draw a random unit tangent");

  CommonOpts scan_opts;
  std::string scan_h;
  bool scan_random = false;
  auto* scan = app.add_subcommand("conjugate-scan",
                                  "predicted vs detected conjugate times along a direction");
  scan->set_help_flag("--help", "print help");  // frees -h for the direction flag
  add_common(scan, scan_opts);
  scan->add_option("--h", scan_h, "direction coefficients as JSON [h1, ...], sum h_i^2 = 1");
  scan->add_flag("--random", scan_random, "draw a random generic direction");
  scan->add_option("--tol-angle", scan_opts.cfg.tol_angle, "classification angle tolerance");
  scan->add_option("--rank-tol", scan_opts.cfg.rank_tol, "relative Jacobian rank threshold");

  CommonOpts seven_opts;
  std::string seven_weights;
  bool seven_auto = false;
  auto* seven = app.add_subcommand("seven", "the seven equal invariants");
  add_common(seven, seven_opts);
  seven->add_option("--weights", seven_weights, "energy weights as JSON [a1, ...]");
  seven->add_flag("--auto", seven_auto, "use weights a_k = k");

  CommonOpts dia_opts;
  dia_opts.format = "csv";
  auto* dia = app.add_subcommand("diastasis-sweep", "diastasis relation over random chart pairs");
  add_common(dia, dia_opts);

  CommonOpts cut_opts;
  auto* cut = app.add_subcommand("cut-test", "cut-time and polar-divisor checks");
  add_common(cut, cut_opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  std::string fmt_err;
  if (geo->parsed()) {
    if (!apply_format(geo_opts, false, &fmt_err)) return (std::cerr << fmt_err << "\n", 2);
    std::optional<std::string> b = geo_b.empty() ? std::nullopt : std::optional(geo_b);
    return finish(grassgeo::cmd_geodesic(geo_opts.cfg, b, geo_random), geo_opts);
  }
  if (scan->parsed()) {
    if (!apply_format(scan_opts, false, &fmt_err)) return (std::cerr << fmt_err << "\n", 2);
    std::optional<std::string> h = scan_h.empty() ? std::nullopt : std::optional(scan_h);
    return finish(grassgeo::cmd_conjugate_scan(scan_opts.cfg, h, scan_random), scan_opts);
  }
  if (seven->parsed()) {
    if (!apply_format(seven_opts, false, &fmt_err)) return (std::cerr << fmt_err << "\n", 2);
    std::optional<std::string> w =
        seven_weights.empty() ? std::nullopt : std::optional(seven_weights);
    return finish(grassgeo::cmd_seven(seven_opts.cfg, w, seven_auto), seven_opts);
  }
  if (dia->parsed()) {
    if (!apply_format(dia_opts, true, &fmt_err)) return (std::cerr << fmt_err << "\n", 2);
    return finish(grassgeo::cmd_diastasis_sweep(dia_opts.cfg), dia_opts);
  }
  if (cut->parsed()) {
    if (!apply_format(cut_opts, false, &fmt_err)) return (std::cerr << fmt_err << "\n", 2);
    return finish(grassgeo::cmd_cut_test(cut_opts.cfg), cut_opts);
  }
  return 2;
}
