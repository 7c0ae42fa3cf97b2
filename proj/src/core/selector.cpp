#include "core/selector.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <memory>
#include <sstream>
#include <string_view>

#include "core/error.hpp"
#include "core/numerics.hpp"
#include "core/sample_io.hpp"

namespace dentropy {

namespace {

constexpr std::size_t kMinGridPoints = 8;

void aggregate(EntropyCurve& curve) {
  const std::size_t m = curve.grid.size();
  curve.mean_entropy.assign(m, 0.0);
  curve.std_entropy.assign(m, 0.0);
  std::vector<double> column(curve.replicates);
  for (std::size_t k = 0; k < m; ++k) {
    for (std::size_t r = 0; r < curve.replicates; ++r) column[r] = curve.replicate_entropy[r][k];
    curve.mean_entropy[k] = mean(column);
    curve.std_entropy[k] = standard_deviation(column);
  }
  curve.derivative = derivative_curve(curve.grid.values, curve.mean_entropy);
}

std::vector<double> differences(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t m = x.size();
  if (m != y.size()) throw InvalidArgument("parameter and entropy arrays differ in length");
  if (m < 3) throw InvalidArgument("a derivative curve needs at least 3 grid points");
  std::vector<double> d(m);
  d[0] = (y[1] - y[0]) / (x[1] - x[0]);
  for (std::size_t k = 1; k + 1 < m; ++k) d[k] = (y[k + 1] - y[k - 1]) / (x[k + 1] - x[k - 1]);
  d[m - 1] = (y[m - 1] - y[m - 2]) / (x[m - 1] - x[m - 2]);
  return d;
}

std::vector<std::string_view> split_csv(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  for (;;) {
    const std::size_t j = s.find(',', i);
    std::string_view f = s.substr(i, j == std::string_view::npos ? std::string_view::npos : j - i);
    while (!f.empty() && (f.front() == ' ' || f.front() == '\t')) f.remove_prefix(1);
    while (!f.empty() && (f.back() == ' ' || f.back() == '\t' || f.back() == '\r')) f.remove_suffix(1);
    out.push_back(f);
    if (j == std::string_view::npos) break;
    i = j + 1;
  }
  return out;
}

}  // namespace

SmoothingGrid SmoothingGrid::log_spaced(double lo, double hi, std::size_t count, GridKind kind) {
  if (!(lo > 0.0) || !(hi > lo) || !std::isfinite(hi))
    throw InvalidArgument("grid bounds must satisfy 0 < lo < hi < inf");
  if (count < kMinGridPoints) throw InvalidArgument("a smoothing grid needs at least 8 values");
  return SmoothingGrid{log_space(lo, hi, count), kind};
}

SmoothingGrid SmoothingGrid::from_values(std::vector<double> values, GridKind kind) {
  if (values.size() < kMinGridPoints) throw InvalidArgument("a smoothing grid needs at least 8 values");
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (!(values[k] > 0.0) || !std::isfinite(values[k]))
      throw InvalidArgument("grid values must be positive and finite");
    if (k > 0 && !(values[k] > values[k - 1]))
      throw InvalidArgument("grid values must be strictly increasing");
  }
  const double step = std::log(values[1] / values[0]);
  for (std::size_t k = 2; k < values.size(); ++k)
    if (std::fabs(std::log(values[k] / values[k - 1]) - step) > 1e-12 * std::max(1.0, step) + 1e-12)
      throw InvalidArgument("grid values must be log-uniform");
  return SmoothingGrid{std::move(values), kind};
}

SmoothingGrid default_grid(const Sample& sample, GridKind kind, std::size_t count) {
  const double range = extent(sample).max_range();
  if (!(range > 0.0)) throw InvalidArgument("sample has zero extent; no default grid");
  const double lo = range / (4.0 * std::pow(static_cast<double>(sample.n), 1.0 / sample.dim));
  return SmoothingGrid::log_spaced(lo, range, count, kind);
}

GridKind grid_kind_for(EstimatorKind kind) {
  return kind == EstimatorKind::Histogram ? GridKind::BinWidth : GridKind::Bandwidth;
}

std::pair<std::size_t, std::size_t> default_window(const SmoothingGrid& grid, double range) {
  std::size_t last = grid.size() - 1;
  if (grid.kind == GridKind::BinWidth) {
    const double cap = range / 4.0 * (1.0 + 1e-12);
    while (last > 0 && grid.values[last] > cap) --last;
  }
  return {0, last};
}

EntropyCurve entropy_curve(const std::vector<Sample>& samples, const SmoothingGrid& grid,
                           const EstimatorSpec& spec, unsigned threads) {
  if (samples.empty()) throw InvalidArgument("entropy_curve needs at least one replicate");
  for (const Sample& s : samples)
    if (s.dim != samples.front().dim)
      throw InvalidArgument("replicates have inconsistent dimensions");
  std::vector<std::unique_ptr<PreparedSample>> prepared(samples.size());
  parallel_for(samples.size(), threads,
               [&](std::size_t r) { prepared[r] = std::make_unique<PreparedSample>(samples[r], spec); });
  EntropyCurve curve;
  curve.grid = grid;
  curve.replicates = samples.size();
  curve.replicate_entropy.assign(samples.size(), std::vector<double>(grid.size()));
  const std::size_t m = grid.size();
  parallel_for(samples.size() * m, threads, [&](std::size_t task) {
    const std::size_t r = task / m, k = task % m;
    curve.replicate_entropy[r][k] = prepared[r]->entropy_at(grid.values[k]);
  });
  aggregate(curve);
  return curve;
}

EntropyCurve entropy_curve(std::size_t replicates, const std::function<Sample(std::size_t)>& make,
                           const SmoothingGrid& grid, const EstimatorSpec& spec, unsigned threads,
                           const std::vector<double>& extra_params,
                           std::vector<std::vector<double>>* extra_out) {
  if (replicates == 0) throw InvalidArgument("entropy_curve needs at least one replicate");
  EntropyCurve curve;
  curve.grid = grid;
  curve.replicates = replicates;
  curve.replicate_entropy.assign(replicates, std::vector<double>(grid.size()));
  if (extra_out) extra_out->assign(replicates, std::vector<double>(extra_params.size()));
  const std::size_t m = grid.size();
  int dim = 0;
  for (std::size_t r = 0; r < replicates; ++r) {
    const Sample sample = make(r);
    if (r == 0) dim = sample.dim;
    if (sample.dim != dim) throw InvalidArgument("replicates have inconsistent dimensions");
    const PreparedSample prepared(sample, spec);
    const std::size_t tasks = m + (extra_out ? extra_params.size() : 0);
    parallel_for(tasks, threads, [&](std::size_t k) {
      if (k < m)
        curve.replicate_entropy[r][k] = prepared.entropy_at(grid.values[k]);
      else
        (*extra_out)[r][k - m] = prepared.entropy_at(extra_params[k - m]);
    });
  }
  aggregate(curve);
  return curve;
}

std::vector<double> derivative_curve(const std::vector<double>& params,
                                     const std::vector<double>& mean_entropy) {
  std::vector<double> logs(params.size());
  for (std::size_t k = 0; k < params.size(); ++k) {
    if (!(params[k] > 0.0)) throw InvalidArgument("parameters must be positive");
    logs[k] = std::log(params[k]);
  }
  return differences(logs, mean_entropy);
}

std::vector<double> linear_derivative_curve(const std::vector<double>& params,
                                            const std::vector<double>& mean_entropy) {
  return differences(params, mean_entropy);
}

std::size_t argmin(const std::vector<double>& values, std::size_t first, std::size_t last) {
  if (first > last || last >= values.size()) throw InvalidArgument("argmin: bad index range");
  std::size_t best = first;
  for (std::size_t k = first + 1; k <= last; ++k)
    if (values[k] < values[best]) best = k;
  return best;
}

SelectorResult find_derivative_minimum(const EntropyCurve& curve,
                                       std::optional<std::pair<std::size_t, std::size_t>> window) {
  const auto& d = curve.derivative;
  const std::size_t m = d.size();
  if (m < 5 || curve.grid.size() != m || curve.mean_entropy.size() != m)
    throw InvalidArgument("curve needs at least 3 interior points with matching arrays");
  const auto [first, last] = window.value_or(std::pair<std::size_t, std::size_t>{0, m - 1});
  if (first > last || last >= m || last - first < 2)
    throw InvalidArgument("derivative search window must cover at least 3 grid points");

  const std::size_t k = argmin(d, first, last);
  if (k == 0) throw BoundaryMinimumError(BoundarySide::Lower, k);
  if (k == m - 1) throw BoundaryMinimumError(BoundarySide::Upper, k);

  SelectorResult res;
  res.index = k;
  res.param_dm = curve.grid.values[k];
  res.entropy_dm = curve.mean_entropy[k];
  res.derivative_min = d[k];
  res.boundary_flag = (k == first) || (k == last);
  for (std::size_t j = std::max<std::size_t>(first, 1); j < last && j + 1 < m; ++j)
    if (d[j] < d[j - 1] && d[j] < d[j + 1]) ++res.local_minima;
  return res;
}

double scott_bin_width(const AnalyticDistribution& dist, std::size_t n) {
  if (n == 0) throw InvalidArgument("sample size must be at least 1");
  return std::cbrt(6.0 / dist.roughness_fprime()) * std::pow(static_cast<double>(n), -1.0 / 3.0);
}

double amise_bandwidth(const AnalyticDistribution& dist, const Kernel& kernel, std::size_t n) {
  if (n == 0) throw InvalidArgument("sample size must be at least 1");
  const double mu2 = kernel.second_moment();
  return std::pow(kernel.roughness() / (dist.roughness_fsecond() * mu2 * mu2), 0.2) *
         std::pow(static_cast<double>(n), -0.2);
}

ScalingFit fit_scaling_exponent(const std::vector<double>& ns, const std::vector<double>& params) {
  if (ns.size() != params.size()) throw InvalidArgument("sizes and parameters differ in length");
  if (ns.size() < 3) throw InvalidArgument("a scaling fit needs at least 3 points");
  std::vector<double> x(ns.size()), y(ns.size());
  for (std::size_t i = 0; i < ns.size(); ++i) {
    if (!(ns[i] > 0.0) || !(params[i] > 0.0))
      throw InvalidArgument("scaling fit needs positive sizes and parameters");
    x[i] = std::log(ns[i]);
    y[i] = std::log(params[i]);
  }
  const double mx = mean(x), my = mean(y);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw InvalidArgument("scaling fit needs at least two distinct sizes");
  ScalingFit fit;
  fit.exponent = sxy / sxx;
  fit.intercept = my - fit.exponent * mx;
  return fit;
}

void write_curve_csv(std::ostream& out, const EntropyCurve& curve, const std::string& meta) {
  out << "# schema=" << kCurveSchema << " replicates=" << curve.replicates
      << " kind=" << (curve.grid.kind == GridKind::BinWidth ? "bin_width" : "bandwidth");
  if (!meta.empty()) out << ' ' << meta;
  out << "\nparam,mean_entropy,std_entropy,derivative\n";
  for (std::size_t k = 0; k < curve.grid.size(); ++k)
    out << format_double(curve.grid.values[k]) << ',' << format_double(curve.mean_entropy[k]) << ','
        << format_double(curve.std_entropy[k]) << ',' << format_double(curve.derivative[k]) << '\n';
}

void write_curve_csv_file(const std::string& path, const EntropyCurve& curve,
                          const std::string& meta) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing", path);
  write_curve_csv(out, curve, meta);
  out.flush();
  if (!out) throw IoError("write failed for '" + path + "'", path);
}

EntropyCurve read_curve_csv(std::istream& in) {
  EntropyCurve curve;
  curve.grid.kind = GridKind::Bandwidth;
  std::string raw;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.remove_suffix(1);
    if (line.empty()) continue;
    if (line.front() == '#') {
      if (line.find("kind=bin_width") != std::string_view::npos) curve.grid.kind = GridKind::BinWidth;
      if (const auto p = line.find("replicates="); p != std::string_view::npos)
        std::from_chars(line.data() + p + 11, line.data() + line.size(), curve.replicates);
      continue;
    }
    const auto cols = split_csv(line);
    if (!header_seen) {
      header_seen = true;
      if (cols.size() != 4 || cols[0] != "param" || cols[1] != "mean_entropy" ||
          cols[2] != "std_entropy" || cols[3] != "derivative")
        throw ParseError("line " + std::to_string(line_no) +
                             ": expected header param,mean_entropy,std_entropy,derivative",
                         line_no);
      continue;
    }
    if (cols.size() != 4)
      throw ParseError("line " + std::to_string(line_no) + ": expected 4 columns, found " +
                           std::to_string(cols.size()),
                       line_no);
    double v[4];
    for (int c = 0; c < 4; ++c) {
      const auto [ptr, ec] = std::from_chars(cols[c].data(), cols[c].data() + cols[c].size(), v[c]);
      if (ec != std::errc() || ptr != cols[c].data() + cols[c].size() || !std::isfinite(v[c]))
        throw ParseError("line " + std::to_string(line_no) + ": not a finite number: '" +
                             std::string(cols[c]) + "'",
                         line_no);
    }
    if (!(v[0] > 0.0) || (!curve.grid.values.empty() && !(v[0] > curve.grid.values.back())))
      throw ParseError("line " + std::to_string(line_no) +
                           ": params must be positive and strictly increasing",
                       line_no);
    curve.grid.values.push_back(v[0]);
    curve.mean_entropy.push_back(v[1]);
    curve.std_entropy.push_back(v[2]);
    curve.derivative.push_back(v[3]);
  }
  if (curve.grid.size() < 3)
    throw InvalidArgument("curve has " + std::to_string(curve.grid.size()) +
                          " rows; at least 3 are needed");
  if (curve.replicates == 0) curve.replicates = 1;
  return curve;
}

EntropyCurve read_curve_csv_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading", path);
  try {
    return read_curve_csv(in);
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what(), e.line());
  }
}

}  // namespace dentropy
