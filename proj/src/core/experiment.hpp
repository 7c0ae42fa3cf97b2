#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "core/distributions.hpp"
#include "core/estimator.hpp"
#include "core/selector.hpp"

namespace dentropy {

enum class SelectionMode {
  MeanCurve,     // select on the replicate-mean curve
  PerReplicate,  // select on each replicate's own curve, then average
};

std::string_view to_string(SelectionMode m);
SelectionMode parse_selection_mode(std::string_view name);

struct RunConfig {
  DistributionId distribution = DistributionId::Normal1D;
  EstimatorSpec estimator;
  std::vector<std::uint64_t> sample_sizes;
  std::size_t replicates = 50;
  std::uint64_t base_seed = 1;
  /// Explicit grid values; empty means the default grid of replicate 0.
  std::vector<double> grid_values;
  std::size_t grid_points = kDefaultGridPoints;
  SelectionMode selection = SelectionMode::MeanCurve;
  unsigned threads = 0;

  /// Throws InvalidArgument when replicates < 1 or any size < 10.
  void validate() const;
};

/// Flat "key = value" file; '#' starts a comment. Keys: distribution,
/// estimator, kernel, entropy_method, geometry, sample_sizes (comma list,
/// "1e5" allowed), replicates, base_seed, grid_spec ("auto" or comma list),
/// grid_points, selection, threads, node_budget. Unknown keys are rejected.
RunConfig parse_run_config(std::istream& in);
RunConfig read_run_config_file(const std::string& path);
std::string format_run_config(const RunConfig& config);

struct RunRow {
  std::uint64_t n = 0;
  SelectorResult selection;
  /// Standard deviation over replicates of the entropy at param_dm.
  double sigma_dm = 0.0;
  double exact_entropy = 0.0;
  /// Scott bin width or AMISE bandwidth for this N, and the replicate mean
  /// and standard deviation of the entropy there.
  double reference_param = 0.0;
  double reference_entropy = 0.0;
  double reference_sigma = 0.0;
  /// Smallest grid value whose mean entropy reaches the exact entropy
  /// (linear interpolation in ln param); absent if the curve never crosses.
  std::optional<double> cross_param;
  EntropyCurve curve;
  std::string curve_file;  // file name the curve is written under
};

struct RunReport {
  RunConfig config;
  std::vector<RunRow> rows;
  ScalingFit scaling;            // param_dm vs N; zero when fewer than 3 sizes
  ScalingFit reference_scaling;  // reference selector vs N
  bool has_scaling = false;
};

/// Scott for histograms, AMISE for kernels (on the reduced radial law in 3D).
double reference_parameter(const RunConfig& config, std::uint64_t n);

/// Runs the full protocol for every sample size. Deterministic given config.
/// BoundaryMinimumError is rethrown with the offending N attached.
RunReport run_experiment(const RunConfig& config);

struct SelectorComparisonRow {
  std::uint64_t n = 0;
  double h_dm = 0.0;
  double entropy_dm = 0.0;
  double h_reference = 0.0;
  double entropy_reference = 0.0;
  double error_dm = 0.0;         // |entropy_dm - exact|
  double error_reference = 0.0;  // |entropy_reference - exact|
};

std::vector<SelectorComparisonRow> compare_selectors(const RunReport& report);
/// Requires a kernel estimator.
std::vector<SelectorComparisonRow> compare_selectors(const RunConfig& config);

/// JSON text of the report (curves referenced by file name, not inlined).
std::string report_to_json(const RunReport& report);

/// Writes report.json and one CSV per curve ({distribution}_{estimator}_{N}.csv)
/// into dir, creating it if needed.
void write_report(const RunReport& report, const std::string& dir);

}  // namespace dentropy
