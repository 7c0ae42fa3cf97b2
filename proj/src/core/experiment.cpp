#include "core/experiment.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

#include "core/error.hpp"
#include "core/numerics.hpp"
#include "core/rng.hpp"
#include "core/sample_io.hpp"

namespace dentropy {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_list(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  for (;;) {
    const std::size_t j = s.find(',', i);
    const std::string_view f = trim(s.substr(i, j == std::string_view::npos ? s.npos : j - i));
    if (!f.empty()) out.push_back(f);
    if (j == std::string_view::npos) break;
    i = j + 1;
  }
  return out;
}

double to_double(std::string_view s, const std::string& key) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v))
    throw InvalidArgument("config key '" + key + "': not a number: '" + std::string(s) + "'");
  return v;
}

// Accepts integers written as "100000" or "1e5".
std::uint64_t to_count(std::string_view s, const std::string& key) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec == std::errc() && ptr == s.data() + s.size()) return v;
  const double d = to_double(s, key);
  if (!(d >= 0.0) || d != std::floor(d) || d > 1.8e19)
    throw InvalidArgument("config key '" + key + "': not a non-negative integer: '" +
                          std::string(s) + "'");
  return static_cast<std::uint64_t>(d);
}

std::string curve_file_name(const RunConfig& c, std::uint64_t n) {
  return std::string(to_string(c.distribution)) + "_" + c.estimator.label() + "_" +
         std::to_string(n) + ".csv";
}

// First crossing of the exact entropy by the mean curve, interpolated in ln param.
std::optional<double> cross_point(const EntropyCurve& curve, double exact) {
  const auto& s = curve.mean_entropy;
  for (std::size_t k = 1; k < s.size(); ++k) {
    if (s[k - 1] < exact && s[k] >= exact) {
      const double a = std::log(curve.grid.values[k - 1]);
      const double b = std::log(curve.grid.values[k]);
      const double t = (exact - s[k - 1]) / (s[k] - s[k - 1]);
      return std::exp(a + t * (b - a));
    }
  }
  return std::nullopt;
}

void select_per_replicate(RunRow& row, std::pair<std::size_t, std::size_t> window) {
  const EntropyCurve& curve = row.curve;
  const std::size_t m = curve.grid.size();
  std::vector<double> params, entropies, mins;
  bool flagged = false;
  for (const auto& rep : curve.replicate_entropy) {
    const std::vector<double> d = derivative_curve(curve.grid.values, rep);
    const std::size_t k = argmin(d, window.first, window.second);
    if (k == 0) throw BoundaryMinimumError(BoundarySide::Lower, k, row.n);
    if (k == m - 1) throw BoundaryMinimumError(BoundarySide::Upper, k, row.n);
    flagged = flagged || k == window.first || k == window.second;
    params.push_back(curve.grid.values[k]);
    entropies.push_back(rep[k]);
    mins.push_back(d[k]);
  }
  SelectorResult& res = row.selection;
  res.param_dm = mean(params);
  res.entropy_dm = mean(entropies);
  res.derivative_min = mean(mins);
  res.boundary_flag = flagged;
  std::size_t nearest = 0;
  for (std::size_t k = 1; k < m; ++k)
    if (std::fabs(std::log(curve.grid.values[k] / res.param_dm)) <
        std::fabs(std::log(curve.grid.values[nearest] / res.param_dm)))
      nearest = k;
  res.index = nearest;
  row.sigma_dm = standard_deviation(entropies);
}

nlohmann::ordered_json fit_json(const ScalingFit& f) {
  return {{"exponent", f.exponent}, {"intercept", f.intercept}};
}

}  // namespace

std::string_view to_string(SelectionMode m) {
  return m == SelectionMode::MeanCurve ? "mean_curve" : "per_replicate";
}

SelectionMode parse_selection_mode(std::string_view name) {
  if (name == "mean_curve") return SelectionMode::MeanCurve;
  if (name == "per_replicate") return SelectionMode::PerReplicate;
  throw InvalidArgument("unknown selection mode '" + std::string(name) +
                        "' (valid: mean_curve, per_replicate)");
}

void RunConfig::validate() const {
  if (replicates < 1) throw InvalidArgument("replicates must be at least 1");
  if (sample_sizes.empty()) throw InvalidArgument("sample_sizes must not be empty");
  for (std::uint64_t n : sample_sizes)
    if (n < 10) throw InvalidArgument("every sample size must be at least 10");
  if (!grid_values.empty()) SmoothingGrid::from_values(grid_values, grid_kind_for(estimator.kind));
  else if (grid_points < 8) throw InvalidArgument("grid_points must be at least 8");
}

RunConfig parse_run_config(std::istream& in) {
  RunConfig c;
  c.sample_sizes.clear();
  std::string raw;
  std::size_t line_no = 0;
  std::map<std::string, std::size_t> seen;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ParseError("line " + std::to_string(line_no) + ": expected key = value", line_no);
    const std::string key(trim(line.substr(0, eq)));
    const std::string_view value = trim(line.substr(eq + 1));
    if (!seen.emplace(key, line_no).second)
      throw ParseError("line " + std::to_string(line_no) + ": duplicate key '" + key + "'", line_no);
    try {
      if (key == "distribution") {
        c.distribution = parse_distribution(value);
      } else if (key == "estimator") {
        // "kde(uniform)" is accepted as shorthand for estimator + kernel.
        const auto paren = value.find('(');
        if (paren != std::string_view::npos && value.back() == ')') {
          c.estimator.kind = parse_estimator_kind(trim(value.substr(0, paren)));
          c.estimator.kernel = parse_kernel(trim(value.substr(paren + 1, value.size() - paren - 2)));
        } else {
          c.estimator.kind = parse_estimator_kind(value);
        }
      } else if (key == "kernel") {
        c.estimator.kernel = parse_kernel(value);
      } else if (key == "entropy_method") {
        c.estimator.method = parse_entropy_method(value);
      } else if (key == "geometry") {
        c.estimator.geometry = parse_geometry(value);
      } else if (key == "sample_sizes") {
        for (std::string_view f : split_list(value)) c.sample_sizes.push_back(to_count(f, key));
      } else if (key == "replicates") {
        c.replicates = to_count(value, key);
      } else if (key == "base_seed") {
        c.base_seed = to_count(value, key);
      } else if (key == "grid_spec") {
        c.grid_values.clear();
        if (value != "auto")
          for (std::string_view f : split_list(value)) c.grid_values.push_back(to_double(f, key));
      } else if (key == "grid_points") {
        c.grid_points = to_count(value, key);
      } else if (key == "selection") {
        c.selection = parse_selection_mode(value);
      } else if (key == "threads") {
        c.threads = static_cast<unsigned>(to_count(value, key));
      } else if (key == "node_budget") {
        c.estimator.kde_options.node_budget = to_count(value, key);
      } else {
        throw InvalidArgument("unknown config key '" + key + "'");
      }
    } catch (const InvalidArgument& e) {
      throw ParseError("line " + std::to_string(line_no) + ": " + e.what(), line_no);
    }
  }
  c.validate();
  return c;
}

RunConfig read_run_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "' for reading", path);
  try {
    return parse_run_config(in);
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what(), e.line());
  }
}

std::string format_run_config(const RunConfig& c) {
  std::ostringstream out;
  out << "distribution = " << to_string(c.distribution) << '\n'
      << "estimator = " << to_string(c.estimator.kind) << '\n'
      << "kernel = " << to_string(c.estimator.kernel) << '\n'
      << "entropy_method = " << to_string(c.estimator.method) << '\n'
      << "geometry = " << to_string(c.estimator.geometry) << '\n'
      << "sample_sizes = ";
  for (std::size_t i = 0; i < c.sample_sizes.size(); ++i)
    out << (i ? "," : "") << c.sample_sizes[i];
  out << "\nreplicates = " << c.replicates << '\n'
      << "base_seed = " << c.base_seed << '\n'
      << "grid_spec = ";
  if (c.grid_values.empty()) out << "auto";
  for (std::size_t i = 0; i < c.grid_values.size(); ++i)
    out << (i ? "," : "") << format_double(c.grid_values[i]);
  out << "\ngrid_points = " << c.grid_points << '\n'
      << "selection = " << to_string(c.selection) << '\n'
      << "node_budget = " << c.estimator.kde_options.node_budget << '\n';
  return out.str();
}

double reference_parameter(const RunConfig& config, std::uint64_t n) {
  const AnalyticDistribution dist(config.distribution);
  if (config.estimator.kind == EstimatorKind::Histogram) return scott_bin_width(dist, n);
  return amise_bandwidth(dist, Kernel{config.estimator.kernel}, n);
}

RunReport run_experiment(const RunConfig& config) {
  config.validate();
  const AnalyticDistribution dist(config.distribution);
  RunReport report;
  report.config = config;
  for (std::uint64_t n : config.sample_sizes) {
    auto make = [&](std::size_t r) { return dist.sample(n, replicate_seed(config.base_seed, r)); };
    const PreparedSample first(make(0), config.estimator);
    const double range = extent(first.working()).max_range();
    const GridKind kind = grid_kind_for(config.estimator.kind);
    const SmoothingGrid grid = config.grid_values.empty()
                                   ? default_grid(first.working(), kind, config.grid_points)
                                   : SmoothingGrid::from_values(config.grid_values, kind);

    RunRow row;
    row.n = n;
    row.exact_entropy = dist.exact_entropy();
    row.reference_param = reference_parameter(config, n);
    std::vector<std::vector<double>> extra;
    row.curve = entropy_curve(config.replicates, make, grid, config.estimator, config.threads,
                              {row.reference_param}, &extra);
    std::vector<double> ref(extra.size());
    for (std::size_t r = 0; r < extra.size(); ++r) ref[r] = extra[r][0];
    row.reference_entropy = mean(ref);
    row.reference_sigma = standard_deviation(ref);
    row.cross_param = cross_point(row.curve, row.exact_entropy);
    row.curve_file = curve_file_name(config, n);

    const auto window = default_window(grid, range);
    try {
      if (config.selection == SelectionMode::MeanCurve) {
        row.selection = find_derivative_minimum(row.curve, window);
        std::vector<double> at_dm(config.replicates);
        for (std::size_t r = 0; r < config.replicates; ++r)
          at_dm[r] = row.curve.replicate_entropy[r][row.selection.index];
        row.sigma_dm = standard_deviation(at_dm);
      } else {
        select_per_replicate(row, window);
      }
    } catch (const BoundaryMinimumError& e) {
      throw e.with_sample_size(n);
    }
    report.rows.push_back(std::move(row));
  }

  std::vector<double> ns, dm, refs;
  for (const RunRow& r : report.rows) {
    ns.push_back(static_cast<double>(r.n));
    dm.push_back(r.selection.param_dm);
    refs.push_back(r.reference_param);
  }
  std::vector<double> distinct = ns;
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  if (distinct.size() >= 3) {
    report.scaling = fit_scaling_exponent(ns, dm);
    report.reference_scaling = fit_scaling_exponent(ns, refs);
    report.has_scaling = true;
  }
  return report;
}

std::vector<SelectorComparisonRow> compare_selectors(const RunReport& report) {
  std::vector<SelectorComparisonRow> out;
  for (const RunRow& r : report.rows) {
    SelectorComparisonRow c;
    c.n = r.n;
    c.h_dm = r.selection.param_dm;
    c.entropy_dm = r.selection.entropy_dm;
    c.h_reference = r.reference_param;
    c.entropy_reference = r.reference_entropy;
    c.error_dm = std::fabs(c.entropy_dm - r.exact_entropy);
    c.error_reference = std::fabs(c.entropy_reference - r.exact_entropy);
    out.push_back(c);
  }
  return out;
}

std::vector<SelectorComparisonRow> compare_selectors(const RunConfig& config) {
  if (config.estimator.kind != EstimatorKind::Kde)
    throw InvalidArgument("selector comparison needs a kernel estimator");
  return compare_selectors(run_experiment(config));
}

std::string report_to_json(const RunReport& report) {
  using nlohmann::ordered_json;
  const RunConfig& c = report.config;
  ordered_json cfg = {
      {"distribution", to_string(c.distribution)},
      {"estimator", to_string(c.estimator.kind)},
      {"kernel", to_string(c.estimator.kernel)},
      {"entropy_method", to_string(c.estimator.method)},
      {"geometry", to_string(c.estimator.resolved_geometry(AnalyticDistribution(c.distribution).dim()))},
      {"sample_sizes", c.sample_sizes},
      {"replicates", c.replicates},
      {"base_seed", c.base_seed},
      {"grid_spec", c.grid_values.empty() ? ordered_json("auto") : ordered_json(c.grid_values)},
      {"grid_points", c.grid_points},
      {"selection", to_string(c.selection)},
  };
  ordered_json rows = ordered_json::array();
  for (const RunRow& r : report.rows) {
    ordered_json row = {
        {"n", r.n},
        {"param_dm", r.selection.param_dm},
        {"entropy_dm", r.selection.entropy_dm},
        {"sigma_dm", r.sigma_dm},
        {"derivative_min", r.selection.derivative_min},
        {"index", r.selection.index},
        {"boundary_flag", r.selection.boundary_flag},
        {"local_minima", r.selection.local_minima},
        {"exact_entropy", r.exact_entropy},
        {"reference_param", r.reference_param},
        {"reference_entropy", r.reference_entropy},
        {"reference_sigma", r.reference_sigma},
        {"cross_param", r.cross_param ? ordered_json(*r.cross_param) : ordered_json(nullptr)},
        {"curve", r.curve_file},
    };
    rows.push_back(std::move(row));
  }
  ordered_json doc = {{"schema", "dentropy.report.v1"}, {"config", cfg}, {"rows", rows}};
  if (report.has_scaling) {
    doc["scaling"] = fit_json(report.scaling);
    doc["reference_scaling"] = fit_json(report.reference_scaling);
  } else {
    doc["scaling"] = nullptr;
    doc["reference_scaling"] = nullptr;
  }
  return doc.dump(2) + "\n";
}

void write_report(const RunReport& report, const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory '" + dir + "': " + ec.message(), dir);
  const RunConfig& c = report.config;
  for (const RunRow& r : report.rows) {
    const std::string meta = "dist=" + std::string(to_string(c.distribution)) +
                             " estimator=" + c.estimator.label() + " n=" + std::to_string(r.n) +
                             " base_seed=" + std::to_string(c.base_seed);
    write_curve_csv_file((std::filesystem::path(dir) / r.curve_file).string(), r.curve, meta);
  }
  const std::string path = (std::filesystem::path(dir) / "report.json").string();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing", path);
  out << report_to_json(report);
  if (!out) throw IoError("write failed for '" + path + "'", path);
}

}  // namespace dentropy
