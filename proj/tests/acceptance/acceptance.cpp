// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits non-zero if any fails. `acceptance --only 1,7` runs a subset (the
// timing criterion is then reported for the subset only).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "core/distributions.hpp"
#include "core/error.hpp"
#include "core/experiment.hpp"
#include "core/histogram.hpp"
#include "core/kde.hpp"
#include "core/sample_io.hpp"
#include "core/selector.hpp"

using namespace dentropy;
using Clock = std::chrono::steady_clock;

namespace {

// Tolerances and targets.
constexpr double kExactTol = 1e-12;
constexpr std::size_t kCiReps = 20;
constexpr std::size_t kTableReps = 50;
constexpr double kNormalPublished = 1.419;
constexpr double kDerivRelTol = 1e-3;
constexpr double kMassDerivTol = 1e-8;
constexpr double kSecondRelTol = 5e-3;
constexpr double kKdeMassTol = 1e-10;
constexpr double kBruteTol = 1e-12;
constexpr double kMonotoneEps = 1e-6;
constexpr double kSuiteBudgetSeconds = 600.0;
const std::vector<std::uint64_t> kSizes{1000, 10000, 100000, 1000000};

struct Outcome {
  bool pass = true;
  std::string detail;
};

void note(Outcome& o, bool ok, const std::string& what) {
  if (!ok) o.pass = false;
  if (!o.detail.empty()) o.detail += "; ";
  o.detail += (ok ? "" : "FAILED ") + what;
}

std::string f(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Runs shared between criteria: one report per (estimator, distribution),
// all four sample sizes, CI replicate count. Boundary minima are kept as
// errors rather than aborting the suite.
struct SharedRun {
  std::optional<RunReport> report;
  std::string error;
  double seconds = 0.0;
};

class Runs {
 public:
  const SharedRun& get(EstimatorKind kind, DistributionId dist) {
    auto key = std::make_pair(kind, dist);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    RunConfig c;
    c.distribution = dist;
    c.estimator.kind = kind;
    c.sample_sizes = kSizes;
    c.replicates = kCiReps;
    c.base_seed = 1;
    SharedRun r;
    const auto t0 = Clock::now();
    try {
      r.report = run_experiment(c);
    } catch (const std::exception& e) {
      r.error = e.what();
    }
    r.seconds = seconds_since(t0);
    std::fprintf(stderr, "  [run] %s %s: %.1f s%s\n", std::string(to_string(kind)).c_str(),
                 std::string(to_string(dist)).c_str(), r.seconds,
                 r.error.empty() ? "" : (" error: " + r.error).c_str());
    return cache_.emplace(key, std::move(r)).first->second;
  }

 private:
  std::map<std::pair<EstimatorKind, DistributionId>, SharedRun> cache_;
};

const RunRow* row_for(const SharedRun& run, std::uint64_t n) {
  if (!run.report) return nullptr;
  for (const RunRow& r : run.report->rows)
    if (r.n == n) return &r;
  return nullptr;
}

// ---------------------------------------------------------------------------

Outcome exact_oracle() {
  Outcome o;
  HistogramEstimate fine;
  fine.bin_width = 1.0;
  fine.origin = {0.0};
  fine.cells = {0, 1};
  fine.counts = {2, 1};
  fine.n = 3;
  HistogramEstimate single;
  single.bin_width = 2.0;
  single.origin = {0.0};
  single.cells = {0};
  single.counts = {3};
  single.n = 3;
  const double s1 = histogram_entropy(fine);
  const double s2 = histogram_entropy(single);
  const double s2c = histogram_entropy(coarsen(fine, 2));
  note(o, std::abs(s1 - (std::log(3.0) - 2.0 / 3.0 * std::log(2.0))) <= kExactTol, "S1=" + f("%.15f", s1));
  note(o, std::abs(s2 - std::log(2.0)) <= kExactTol, "S2=" + f("%.15f", s2));
  note(o, std::abs(s2c - std::log(2.0)) <= kExactTol, "S(coarsen)=" + f("%.15f", s2c));
  note(o, s2 > s1, "S2>S1");
  return o;
}

Outcome histogram_table_row() {
  Outcome o;
  RunConfig c;
  c.distribution = DistributionId::Normal1D;
  c.estimator.kind = EstimatorKind::Histogram;
  c.sample_sizes = {100000};
  c.replicates = kTableReps;
  const auto t0 = Clock::now();
  RunReport r = run_experiment(c);
  const double secs = seconds_since(t0);
  const RunRow& row = r.rows.front();
  const double s = row.selection.entropy_dm;
  const double dv = row.selection.param_dm;
  note(o, s >= 1.409 && s <= 1.429, "S_dm=" + f("%.4f", s) + " in [1.409,1.429]");
  note(o, row.sigma_dm < 1e-2, "sigma=" + f("%.3e", row.sigma_dm) + " < 1e-2");
  note(o, dv >= 5.051e-2 / 2 && dv <= 5.051e-2 * 2, "dv_dm=" + f("%.4e", dv) + " within x2 of 5.051e-2");
  note(o, secs < 60.0, "runtime " + f("%.1f", secs) + " s < 60 s");
  return o;
}

Outcome kde_table_row(Runs& runs) {
  Outcome o;
  const SharedRun& run = runs.get(EstimatorKind::Kde, DistributionId::Normal1D);
  const RunRow* row = row_for(run, 100000);
  if (!row) {
    note(o, false, "run failed: " + run.error);
    return o;
  }
  const double s = row->selection.entropy_dm;
  const double h = row->selection.param_dm;
  note(o, s >= 1.408 && s <= 1.428, "S_dm=" + f("%.4f", s) + " in [1.408,1.428]");
  note(o, h >= 3.531e-2 / 2 && h <= 3.531e-2 * 2, "h_dm=" + f("%.4e", h) + " within x2 of 3.531e-2");
  note(o, run.seconds < 300.0, "run (all N) " + f("%.1f", run.seconds) + " s < 300 s");
  return o;
}

Outcome powerlaw_and_3d_rows(Runs& runs) {
  Outcome o;
  struct Target {
    EstimatorKind kind;
    DistributionId dist;
    double value;
    double tol;
  };
  const Target targets[] = {
      {EstimatorKind::Histogram, DistributionId::PowerLaw1D, 0.2797, 0.01},
      {EstimatorKind::Kde, DistributionId::PowerLaw1D, 0.2796, 0.01},
      {EstimatorKind::Histogram, DistributionId::Normal3D, 4.257, 0.05},
      {EstimatorKind::Kde, DistributionId::Normal3D, 4.257, 0.05},
  };
  for (const Target& t : targets) {
    const SharedRun& run = runs.get(t.kind, t.dist);
    const RunRow* row = row_for(run, 100000);
    const std::string label = std::string(to_string(t.kind)) + "/" + std::string(to_string(t.dist));
    if (!row) {
      note(o, false, label + " run failed: " + run.error);
      continue;
    }
    const double s = row->selection.entropy_dm;
    note(o, std::abs(s - t.value) <= t.tol, label + " S_dm=" + f("%.4f", s));
  }
  return o;
}

Outcome scaling_law(Runs& runs) {
  Outcome o;
  for (DistributionId dist : all_distributions()) {
    const SharedRun& run = runs.get(EstimatorKind::Kde, dist);
    if (!run.report || !run.report->has_scaling) {
      note(o, false, std::string(to_string(dist)) + " run failed: " + run.error);
      continue;
    }
    const double e = run.report->scaling.exponent;
    const double ea = run.report->reference_scaling.exponent;
    note(o, e >= -0.40 && e <= -0.27, std::string(to_string(dist)) + " h_dm exponent " + f("%.4f", e));
    note(o, std::abs(ea + 0.2) <= 1e-12, std::string(to_string(dist)) + " h_AMISE exponent " + f("%.15f", ea));
  }
  return o;
}

Outcome selector_comparison(Runs& runs) {
  Outcome o;
  const SharedRun& run = runs.get(EstimatorKind::Kde, DistributionId::Normal1D);
  if (!run.report) {
    note(o, false, "run failed: " + run.error);
    return o;
  }
  std::map<std::uint64_t, double> gap;
  for (std::uint64_t n : {10000u, 100000u, 1000000u}) {
    const RunRow* row = row_for(run, n);
    const double e_dm = std::abs(row->selection.entropy_dm - kNormalPublished);
    const double e_ref = std::abs(row->reference_entropy - kNormalPublished);
    gap[n] = e_dm;
    note(o, e_dm < e_ref, "N=" + std::to_string(n) + " |dm|=" + f("%.2e", e_dm) + " < |amise|=" + f("%.2e", e_ref));
  }
  note(o, gap[1000000] < gap[10000], "dm error at 1e6 " + f("%.2e", gap[1000000]) + " < at 1e4 " + f("%.2e", gap[10000]));
  return o;
}

Outcome derivative_identities() {
  Outcome o;
  Sample s = AnalyticDistribution(DistributionId::Normal1D).sample(10000, 1);
  auto pts = KdePoints::from(s);
  const Kernel k{KernelId::Epanechnikov};
  auto entropy = [&](double h) { return kde_entropy(KdeEstimate(pts, k, h), EntropyMethod::Quadrature); };

  SmoothingGrid grid = default_grid(s, GridKind::Bandwidth, 20);
  double worst_d1 = 0.0, worst_mass = 0.0, worst_d2 = 0.0;
  for (double h : grid.values) {
    KdeEstimate e(pts, k, h);
    const double d = 1e-4 * h;
    const double fd = (entropy(h + d) - entropy(h - d)) / (2 * d);
    worst_d1 = std::max(worst_d1, std::abs(kde_entropy_derivative(e) - fd) / std::abs(fd));
    worst_mass = std::max(worst_mass, std::abs(kde_mass_derivative(e)));
    const double d2 = 1e-2 * h;
    const double fd2 = (entropy(h + d2) - 2 * entropy(h) + entropy(h - d2)) / (d2 * d2);
    const double rel = std::abs(-kde_second_derivative_residual(e) - fd2) / std::abs(fd2);
    worst_d2 = std::max(worst_d2, rel);
  }
  note(o, worst_d1 <= kDerivRelTol, "dS/dh rel err " + f("%.2e", worst_d1));
  note(o, worst_mass <= kMassDerivTol, "|d mass/dh| " + f("%.2e", worst_mass));
  note(o, worst_d2 <= kSecondRelTol, "d2S/dh2 rel err " + f("%.2e", worst_d2));

  // Sign change across the detected minimum of this sample's curve.
  std::vector<Sample> one{s};
  EntropyCurve curve = entropy_curve(one, default_grid(s, GridKind::Bandwidth), EstimatorSpec{EstimatorKind::Kde}, 0);
  SelectorResult sel = find_derivative_minimum(curve);
  const double lo = curve.grid.values[sel.index - 1], hi = curve.grid.values[sel.index + 1];
  // d/dlnh (h dS/dh) = h S' + h^2 S''.
  auto log_curvature = [&](double h) {
    KdeEstimate e(pts, k, h);
    return h * kde_entropy_derivative(e) - h * h * kde_second_derivative_residual(e);
  };
  const double c_lo = log_curvature(lo), c_hi = log_curvature(hi);
  note(o, c_lo < 0.0 && c_hi > 0.0, "curvature sign change across h_dm=" + f("%.4e", sel.param_dm));
  return o;
}

Outcome property_suites(Runs& runs) {
  Outcome o;
  // Normalisation.
  {
    double worst_hist = 0.0, worst_kde = 0.0;
    for (DistributionId dist : all_distributions()) {
      Sample s = AnalyticDistribution(dist).sample(20000, 3);
      for (double dv : {0.01, 0.1, 0.5}) {
        HistogramEstimate h = build_histogram(s, dv);
        double mass = 0.0;
        for (std::size_t c = 0; c < h.occupied(); ++c) mass += h.density(c) * std::pow(dv, h.dim);
        worst_hist = std::max(worst_hist, std::abs(mass - 1.0));
      }
      if (s.dim == 1) {
        for (KernelId id : {KernelId::Epanechnikov, KernelId::Uniform, KernelId::Gaussian})
          for (double h : {0.005, 0.05, 0.5})
            worst_kde = std::max(worst_kde, std::abs(kde_mass(KdeEstimate(s, Kernel{id}, h)) - 1.0));
      }
    }
    note(o, worst_hist <= kExactTol, "histogram mass err " + f("%.1e", worst_hist));
    note(o, worst_kde <= kKdeMassTol, "kde mass err " + f("%.1e", worst_kde));
  }
  // Monotonicity of the mean entropy on the default grids (searched window for histograms).
  {
    std::size_t checked = 0, violations = 0;
    std::string where;
    for (EstimatorKind kind : {EstimatorKind::Histogram, EstimatorKind::Kde})
      for (DistributionId dist : all_distributions()) {
        const SharedRun& run = runs.get(kind, dist);
        if (!run.report) continue;
        for (const RunRow& r : run.report->rows) {
          const auto window = default_window(r.curve.grid, r.curve.grid.values.back());
          for (std::size_t k = window.first + 1; k <= window.second; ++k, ++checked) {
            const double step = r.curve.mean_entropy[k] - r.curve.mean_entropy[k - 1];
            if (step >= -kMonotoneEps) continue;
            ++violations;
            where += std::string(" [") + std::string(to_string(kind)) + "/" +
                     std::string(to_string(dist)) + " N=" + f("%.0e", static_cast<double>(r.n)) +
                     " at " + f("%.4g", r.curve.grid.values[k]) + ": " + f("%.2e", step) + "]";
          }
        }
      }
    note(o, checked > 0 && violations == 0,
         "monotone " + std::to_string(checked - violations) + "/" + std::to_string(checked) + " steps" +
             where);
  }
  // Coarse-graining on randomised histograms.
  {
    std::mt19937_64 rng(77);
    std::uniform_int_distribution<int> pick_dist(0, 2), pick_factor(2, 6), pick_n(10, 5000);
    std::uniform_real_distribution<double> pick_log_dv(std::log(0.005), std::log(1.0));
    int bad = 0;
    for (int t = 0; t < 200; ++t) {
      Sample s = AnalyticDistribution(all_distributions()[pick_dist(rng)]).sample(pick_n(rng), rng());
      HistogramEstimate h = build_histogram(s, std::exp(pick_log_dv(rng)));
      if (histogram_entropy(coarsen(h, pick_factor(rng))) < histogram_entropy(h) - kExactTol) ++bad;
    }
    note(o, bad == 0, "coarsening monotone on 200 instances (" + std::to_string(bad) + " violations)");
  }
  // Accelerated against brute-force sums.
  {
    std::mt19937_64 rng(78);
    std::normal_distribution<double> nd(0.0, 1.0);
    double worst = 0.0;
    for (DistributionId dist : all_distributions()) {
      Sample s = AnalyticDistribution(dist).sample(5000, 5);
      for (KernelId id : {KernelId::Epanechnikov, KernelId::Uniform, KernelId::Gaussian})
        for (double h : {0.01, 0.1, 0.6}) {
          KdeEstimate e(s, Kernel{id}, h);
          for (int t = 0; t < 40; ++t) {
            std::vector<double> x(static_cast<std::size_t>(s.dim));
            for (double& v : x) v = 0.7 * nd(rng);
            worst = std::max(worst, std::abs(e.density(x) - e.density_bruteforce(x)));
          }
        }
    }
    note(o, worst <= kBruteTol, "fast vs brute-force max diff " + f("%.1e", worst));
  }
  // Byte-identical reruns.
  {
    auto render = [] {
      std::ostringstream out;
      write_sample(out, AnalyticDistribution(DistributionId::Normal3D).sample(2000, 9));
      RunConfig c;
      c.distribution = DistributionId::PowerLaw1D;
      c.estimator.kind = EstimatorKind::Kde;
      c.sample_sizes = {1000, 3000};
      c.replicates = 3;
      c.base_seed = 9;
      RunReport r = run_experiment(c);
      out << report_to_json(r);
      for (const RunRow& row : r.rows) write_curve_csv(out, row.curve);
      return out.str();
    };
    note(o, render() == render(), "seeded sample, report and curves byte-identical on rerun");
  }
  return o;
}

Outcome minimum_existence(Runs& runs) {
  Outcome o;
  for (EstimatorKind kind : {EstimatorKind::Histogram, EstimatorKind::Kde})
    for (DistributionId dist : all_distributions()) {
      const SharedRun& run = runs.get(kind, dist);
      const std::string label = std::string(to_string(kind)) + "/" + std::string(to_string(dist));
      if (!run.report) {
        note(o, false, label + ": " + run.error);
        continue;
      }
      bool interior = true;
      for (const RunRow& r : run.report->rows) interior = interior && !r.selection.boundary_flag;
      const double d3 = row_for(run, 1000)->selection.derivative_min;
      const double d6 = row_for(run, 1000000)->selection.derivative_min;
      note(o, interior && d6 < d3,
           label + (interior ? " interior" : " boundary flag") + ", dmin " + f("%.2e", d3) + " -> " + f("%.2e", d6));
    }
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> only;
  for (int i = 1; i + 1 < argc; ++i)
    if (std::string(argv[i]) == "--only") {
      std::stringstream ss(argv[i + 1]);
      for (std::string tok; std::getline(ss, tok, ',');) only.insert(std::stoi(tok));
    }
  auto selected = [&](int c) { return only.empty() || only.count(c); };

  Runs runs;
  const auto suite_start = Clock::now();
  struct Criterion {
    int id;
    const char* title;
    std::function<Outcome()> body;
  };
  const std::vector<Criterion> criteria = {
      {1, "coarse-graining exact oracle", exact_oracle},
      {2, "histogram row, normal1d, N=1e5, 50 replicates", histogram_table_row},
      {3, "kernel row, normal1d, N=1e5", [&] { return kde_table_row(runs); }},
      {4, "power-law and 3D rows at N=1e5", [&] { return powerlaw_and_3d_rows(runs); }},
      {5, "h_dm scaling exponent over N=1e3..1e6", [&] { return scaling_law(runs); }},
      {6, "derivative minimum vs AMISE entropy error", [&] { return selector_comparison(runs); }},
      {7, "derivative identities, N=1e4 normal1d", derivative_identities},
      {8, "property suites", [&] { return property_suites(runs); }},
      {9, "interior derivative minimum for every case", [&] { return minimum_existence(runs); }},
  };

  bool all_pass = true;
  std::vector<std::string> lines;
  for (const Criterion& c : criteria) {
    if (!selected(c.id)) continue;
    const auto t0 = Clock::now();
    Outcome o;
    try {
      o = c.body();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    char head[160];
    std::snprintf(head, sizeof head, "[%s] criterion %d: %s (%.1f s): ", o.pass ? "PASS" : "FAIL", c.id, c.title,
                  seconds_since(t0));
    std::printf("%s%s\n", head, o.detail.c_str());
    std::fflush(stdout);
    all_pass = all_pass && o.pass;
  }
  if (selected(10)) {
    const double total = seconds_since(suite_start);
    const bool ok = total < kSuiteBudgetSeconds;
    std::printf("[%s] criterion 10: suite wall time %.1f s < %.0f s on %u hardware threads\n", ok ? "PASS" : "FAIL",
                total, kSuiteBudgetSeconds, std::thread::hardware_concurrency());
    all_pass = all_pass && ok;
  }
  return all_pass ? EXIT_SUCCESS : EXIT_FAILURE;
}
