// Command-line front end over the dentropy C API.
//
//   dentropy-cli sample <dist> --n N [--seed S] [--out FILE]
//   dentropy-cli curve  (--sample FILE... | --dist D --n N --replicates R) [estimator flags] [--out FILE]
//   dentropy-cli select (--curve FILE | generation flags as for curve)
//   dentropy-cli reproduce <table1|table2|fig4|fig5> [--min-n N] [--max-n N] [--full-scale]
//
// Exit codes: 0 ok, 1 usage or bad input, 2 derivative minimum on the grid
// boundary, 3 I/O.

#include <CLI11.hpp>

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "dentropy/dentropy.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitBoundary = 2;
constexpr int kExitIo = 3;

struct Failure {
  dent_status status;
  std::string message;
};

void check(dent_status s) {
  if (s != DENT_OK) throw Failure{s, dent_last_error()};
}

int exit_code(dent_status s) {
  switch (s) {
    case DENT_OK:
      return kExitOk;
    case DENT_ERR_BOUNDARY_MINIMUM:
      return kExitBoundary;
    case DENT_ERR_IO:
      return kExitIo;
    default:
      return kExitUsage;
  }
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Sizes may be written as 100000 or 1e5.
std::uint64_t to_count(double v, const char* flag) {
  if (!(v >= 0.0) || v != std::floor(v) || v > 1.8e19)
    throw Failure{DENT_ERR_INVALID_ARGUMENT, std::string(flag) + " must be a non-negative integer"};
  return static_cast<std::uint64_t>(v);
}

struct SampleDeleter {
  void operator()(dent_sample* s) const { dent_sample_free(s); }
};
struct CurveDeleter {
  void operator()(dent_curve* c) const { dent_curve_free(c); }
};
using SamplePtr = std::unique_ptr<dent_sample, SampleDeleter>;
using CurvePtr = std::unique_ptr<dent_curve, CurveDeleter>;

struct Globals {
  std::uint64_t seed = 1;
  unsigned threads = 0;
  std::string out_dir = ".";
};

struct CurveArgs {
  std::vector<std::string> sample_files;
  std::string dist;
  double n = 0;
  std::size_t replicates = 1;
  std::string estimator = "histogram";
  std::string kernel = "epanechnikov";
  std::string method = "quadrature";
  std::string geometry = "auto";
  std::size_t grid_points = 60;
  std::vector<double> grid;
  double node_budget = 0;
};

void add_curve_flags(CLI::App* cmd, CurveArgs& a) {
  cmd->add_option("--sample", a.sample_files, "Sample file(s), one per replicate")->check(CLI::ExistingFile);
  cmd->add_option("--dist", a.dist, "Distribution to draw from: normal1d, powerlaw1d, normal3d");
  cmd->add_option("--n", a.n, "Sample size per replicate");
  cmd->add_option("--replicates", a.replicates, "Replicates (seeds seed, seed+1, ...)")->check(CLI::PositiveNumber);
  cmd->add_option("--estimator", a.estimator, "histogram or kde")->check(CLI::IsMember({"histogram", "kde"}));
  cmd->add_option("--kernel", a.kernel, "epanechnikov, uniform or gaussian")
      ->check(CLI::IsMember({"epanechnikov", "uniform", "gaussian"}));
  cmd->add_option("--method", a.method, "quadrature or resubstitution")
      ->check(CLI::IsMember({"quadrature", "resubstitution"}));
  cmd->add_option("--geometry", a.geometry, "auto, full or radial (d > 1)")
      ->check(CLI::IsMember({"auto", "full", "radial"}));
  cmd->add_option("--grid-points", a.grid_points, "Points of the default log grid");
  cmd->add_option("--grid", a.grid, "Explicit log-uniform grid values")->delimiter(',');
  cmd->add_option("--node-budget", a.node_budget, "Quadrature node budget for d > 1 kernel estimates");
}

CurvePtr compute_curve(const CurveArgs& a, const Globals& g) {
  dent_estimator est;
  dent_estimator_default(&est);
  est.kind = a.estimator == "kde" ? DENT_KDE : DENT_HISTOGRAM;
  check(dent_kernel_parse(a.kernel.c_str(), &est.kernel));
  est.method = a.method == "resubstitution" ? DENT_METHOD_RESUBSTITUTION : DENT_METHOD_QUADRATURE;
  est.geometry = a.geometry == "full"     ? DENT_GEOMETRY_FULL
                 : a.geometry == "radial" ? DENT_GEOMETRY_RADIAL
                                          : DENT_GEOMETRY_AUTO;
  est.node_budget = to_count(a.node_budget, "--node-budget");
  dent_curve* curve = nullptr;
  if (!a.sample_files.empty()) {
    if (!a.dist.empty())
      throw Failure{DENT_ERR_INVALID_ARGUMENT, "--sample and --dist are mutually exclusive"};
    std::vector<SamplePtr> owned;
    std::vector<const dent_sample*> raw;
    for (const std::string& path : a.sample_files) {
      dent_sample* s = nullptr;
      check(dent_sample_read(path.c_str(), &s));
      owned.emplace_back(s);
      raw.push_back(s);
    }
    check(dent_curve_compute(raw.data(), raw.size(), a.grid.data(), a.grid.size(), a.grid_points,
                             &est, g.threads, &curve));
  } else {
    if (a.dist.empty())
      throw Failure{DENT_ERR_INVALID_ARGUMENT, "give --sample FILE or --dist with --n"};
    dent_distribution dist;
    check(dent_distribution_parse(a.dist.c_str(), &dist));
    check(dent_curve_generate(dist, to_count(a.n, "--n"), a.replicates, g.seed, a.grid.data(),
                              a.grid.size(), a.grid_points, &est, g.threads, &curve));
  }
  return CurvePtr(curve);
}

std::string selection_json(const dent_selection& s) {
  return std::string("{\"param_dm\": ") + num(s.param_dm) + ", \"entropy_dm\": " +
         num(s.entropy_dm) + ", \"derivative_min\": " + num(s.derivative_min) +
         ", \"index\": " + std::to_string(s.index) +
         ", \"boundary_flag\": " + (s.boundary_flag || s.boundary_side >= 0 ? "true" : "false") +
         (s.boundary_side >= 0 ? std::string(", \"boundary_side\": \"") +
                                     (s.boundary_side == 0 ? "lower" : "upper") + "\""
                               : std::string()) +
         "}";
}

dent_status select_on(const dent_curve* curve, dent_selection& sel) {
  std::size_t window[2];
  check(dent_curve_default_window(curve, &window[0], &window[1]));
  const dent_status s = dent_find_derivative_minimum(curve, window, &sel);
  if (s != DENT_OK && s != DENT_ERR_BOUNDARY_MINIMUM) check(s);
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Differential entropy of samples via histogram and kernel density estimates"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--seed", g.seed, "Base seed (replicate r uses seed + r)");
  app.add_option("--threads", g.threads, "Worker threads (0 = all cores)");
  app.add_option("--out-dir", g.out_dir, "Directory for reproduce output");

  auto* sample_cmd = app.add_subcommand("sample", "Draw a seeded sample and write it as text");
  std::string sample_dist, sample_out;
  double sample_n = 0;
  sample_cmd->add_option("distribution", sample_dist, "normal1d, powerlaw1d or normal3d")->required();
  sample_cmd->add_option("--n", sample_n, "Sample size")->required();
  sample_cmd->add_option("--out", sample_out, "Output file (default: standard output)");

  auto* curve_cmd = app.add_subcommand("curve", "Tabulate entropy against the smoothing parameter");
  CurveArgs curve_args;
  std::string curve_out;
  add_curve_flags(curve_cmd, curve_args);
  curve_cmd->add_option("--out", curve_out, "Output CSV (default: standard output)");

  auto* select_cmd = app.add_subcommand("select", "Locate the derivative minimum; JSON on standard output");
  CurveArgs select_args;
  std::string select_curve;
  add_curve_flags(select_cmd, select_args);
  select_cmd->add_option("--curve", select_curve, "Curve CSV written by the curve subcommand");

  auto* repro_cmd = app.add_subcommand("reproduce", "Run a reproduction profile");
  std::string profile;
  double min_n = 1e3, max_n = 1e6;
  std::size_t repro_reps = 0;
  bool full_scale = false;
  repro_cmd->add_option("profile", profile, "table1, table2, fig4 or fig5")->required();
  repro_cmd->add_option("--min-n", min_n, "Smallest sample size (power of ten)");
  repro_cmd->add_option("--max-n", max_n, "Largest sample size (power of ten)");
  repro_cmd->add_option("--replicates", repro_reps, "Replicates per size (default 20, or 50 with --full-scale)");
  repro_cmd->add_flag("--full-scale", full_scale, "Use 50 replicates");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*sample_cmd) {
      dent_distribution dist;
      if (dent_distribution_parse(sample_dist.c_str(), &dist) != DENT_OK)
        throw Failure{DENT_ERR_INVALID_ARGUMENT, dent_last_error()};
      dent_sample* raw = nullptr;
      check(dent_sample_draw(dist, to_count(sample_n, "--n"), g.seed, &raw));
      SamplePtr s(raw);
      check(dent_sample_write(s.get(), sample_out.empty() ? "/dev/stdout" : sample_out.c_str()));
      return kExitOk;
    }
    if (*curve_cmd) {
      CurvePtr curve = compute_curve(curve_args, g);
      std::string meta = "estimator=" + curve_args.estimator;
      if (curve_args.estimator == "kde") meta += "-" + curve_args.kernel;
      if (!curve_args.dist.empty())
        meta += " dist=" + curve_args.dist + " n=" + std::to_string(to_count(curve_args.n, "--n")) +
                " base_seed=" + std::to_string(g.seed);
      check(dent_curve_write(curve.get(), curve_out.empty() ? "/dev/stdout" : curve_out.c_str(),
                             meta.c_str()));
      dent_selection sel;
      if (select_on(curve.get(), sel) == DENT_ERR_BOUNDARY_MINIMUM)
        std::cerr << "warning: " << dent_last_error() << "\n";
      else if (sel.boundary_flag)
        std::cerr << "warning: derivative minimum on the edge of the search window (index "
                  << sel.index << ")\n";
      return kExitOk;
    }
    if (*select_cmd) {
      CurvePtr curve;
      if (!select_curve.empty()) {
        dent_curve* raw = nullptr;
        check(dent_curve_read(select_curve.c_str(), &raw));
        curve.reset(raw);
      } else {
        curve = compute_curve(select_args, g);
      }
      dent_selection sel;
      const dent_status s = select_on(curve.get(), sel);
      std::cout << selection_json(sel) << "\n";
      if (s == DENT_ERR_BOUNDARY_MINIMUM) {
        std::cerr << "error: " << dent_last_error() << "\n";
        return kExitBoundary;
      }
      return kExitOk;
    }
    if (*repro_cmd) {
      dent_reproduce_options o{};
      o.profile = profile.c_str();
      o.min_n = to_count(min_n, "--min-n");
      o.max_n = to_count(max_n, "--max-n");
      o.replicates = repro_reps;
      o.full_scale = full_scale ? 1 : 0;
      o.base_seed = g.seed;
      o.threads = g.threads;
      char* summary = nullptr;
      check(dent_reproduce(&o, g.out_dir.c_str(), &summary));
      std::cout << summary;
      dent_string_free(summary);
      return kExitOk;
    }
  } catch (const Failure& f) {
    std::cerr << "error: " << f.message << "\n";
    return exit_code(f.status);
  }
  return kExitUsage;
}
