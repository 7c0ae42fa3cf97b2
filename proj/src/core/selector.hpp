#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "core/distributions.hpp"
#include "core/estimator.hpp"
#include "core/kde.hpp"
#include "core/sample.hpp"

namespace dentropy {

enum class GridKind { BinWidth, Bandwidth };

struct SmoothingGrid {
  std::vector<double> values;  // strictly increasing, log-uniform
  GridKind kind = GridKind::BinWidth;

  std::size_t size() const noexcept { return values.size(); }

  /// count >= 8 log-uniform values from lo to hi inclusive.
  static SmoothingGrid log_spaced(double lo, double hi, std::size_t count, GridKind kind);
  /// Accepts caller-supplied values after checking they are positive,
  /// increasing, log-uniform to 1e-12 and at least 8 long.
  static SmoothingGrid from_values(std::vector<double> values, GridKind kind);
};

inline constexpr std::size_t kDefaultGridPoints = 60;

/// count log-spaced values from range/(4 N^(1/d)) to range, where range is
/// the largest per-dimension extent of the sample.
SmoothingGrid default_grid(const Sample& sample, GridKind kind,
                           std::size_t count = kDefaultGridPoints);

GridKind grid_kind_for(EstimatorKind kind);

/// Index window [first, last] (inclusive) that find_derivative_minimum
/// searches by default: the whole grid for bandwidths, and for bin widths
/// only values up to range/4, since histograms with a handful of bins give
/// derivatives dominated by where the bin edges fall.
std::pair<std::size_t, std::size_t> default_window(const SmoothingGrid& grid, double range);

struct EntropyCurve {
  SmoothingGrid grid;
  std::vector<double> mean_entropy;
  std::vector<double> std_entropy;
  std::vector<double> derivative;  // d mean_entropy / d ln(param)
  std::size_t replicates = 0;
  /// replicate_entropy[r][k]: entropy of replicate r at grid value k.
  std::vector<std::vector<double>> replicate_entropy;
};

/// Evaluates every replicate at every grid value and aggregates.
/// `threads` = 0 picks the hardware default.
EntropyCurve entropy_curve(const std::vector<Sample>& samples, const SmoothingGrid& grid,
                           const EstimatorSpec& spec, unsigned threads = 0);

/// Same, with replicates produced on demand so only one is held in memory
/// at a time. `extra_params` are evaluated on each replicate as well and
/// returned through `extra_out` (one row per replicate).
EntropyCurve entropy_curve(std::size_t replicates, const std::function<Sample(std::size_t)>& make,
                           const SmoothingGrid& grid, const EstimatorSpec& spec, unsigned threads,
                           const std::vector<double>& extra_params = {},
                           std::vector<std::vector<double>>* extra_out = nullptr);

/// Central differences in ln(param), one-sided at both ends.
std::vector<double> derivative_curve(const std::vector<double>& params,
                                     const std::vector<double>& mean_entropy);

/// Same differences taken in param itself (dS/dparam).
std::vector<double> linear_derivative_curve(const std::vector<double>& params,
                                            const std::vector<double>& mean_entropy);

struct SelectorResult {
  double param_dm = 0.0;
  double entropy_dm = 0.0;
  double derivative_min = 0.0;
  std::size_t index = 0;
  /// The minimum sits on an edge of the searched window that is not a grid end.
  bool boundary_flag = false;
  /// Number of strict local minima of the derivative inside the window.
  std::size_t local_minima = 0;
};

/// Global minimum of the derivative over window (whole grid by default);
/// ties go to the smaller parameter. A minimum on the first or last grid
/// point raises BoundaryMinimumError.
SelectorResult find_derivative_minimum(const EntropyCurve& curve,
                                       std::optional<std::pair<std::size_t, std::size_t>> window =
                                           std::nullopt);

/// Index of the smallest value of an arbitrary array (ties to the smaller
/// index), for comparing derivative forms.
std::size_t argmin(const std::vector<double>& values, std::size_t first, std::size_t last);

/// (6 / R(f'))^(1/3) N^(-1/3).
double scott_bin_width(const AnalyticDistribution& dist, std::size_t n);

/// [R(K) / (R(f'') mu2(K)^2)]^(1/5) N^(-1/5).
double amise_bandwidth(const AnalyticDistribution& dist, const Kernel& kernel, std::size_t n);

struct ScalingFit {
  double exponent = 0.0;
  double intercept = 0.0;  // ln(param) at N = 1
};

/// Least-squares line through (ln N, ln param).
ScalingFit fit_scaling_exponent(const std::vector<double>& ns, const std::vector<double>& params);

inline constexpr const char* kCurveSchema = "dentropy.curve.v1";

/// "# schema=dentropy.curve.v1 <meta>" then
/// "param,mean_entropy,std_entropy,derivative" and one row per grid value.
void write_curve_csv(std::ostream& out, const EntropyCurve& curve, const std::string& meta = {});
void write_curve_csv_file(const std::string& path, const EntropyCurve& curve,
                          const std::string& meta = {});

/// Reads the CSV above (comment lines skipped), taking every column as
/// written. Fewer than three rows raise InvalidArgument.
EntropyCurve read_curve_csv(std::istream& in);
EntropyCurve read_curve_csv_file(const std::string& path);

}  // namespace dentropy
