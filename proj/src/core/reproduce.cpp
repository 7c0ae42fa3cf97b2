#include "core/reproduce.hpp"

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "core/error.hpp"
#include "core/sample_io.hpp"

namespace dentropy {

namespace {

// Rows for N = 10^3 .. 10^8, columns normal1d, powerlaw1d, normal3d.
using PublishedTable = std::array<std::array<PublishedRow, 3>, 6>;

constexpr PublishedTable kHistogramTable{{
    {{{2.174e-1, 1.411, 2.099e-2}, {6.250e-2, 0.2756, 9.919e-3}, {1.170e-1, 4.226, 4.003e-2}}},
    {{{1.190e-1, 1.418, 6.643e-3}, {2.419e-2, 0.2790, 3.121e-3}, {6.511e-2, 4.254, 1.083e-2}}},
    {{{5.051e-2, 1.419, 2.115e-3}, {8.721e-3, 0.2797, 4.941e-4}, {3.669e-2, 4.256, 3.697e-3}}},
    {{{2.119e-2, 1.419, 8.134e-4}, {3.178e-3, 0.2812, 2.464e-5}, {1.546e-2, 4.256, 1.295e-3}}},
    {{{1.190e-2, 1.419, 2.045e-4}, {1.786e-3, 0.2805, 1.326e-5}, {8.695e-3, 4.257, 4.184e-4}}},
    {{{5.020e-3, 1.419, 8.081e-5}, {1.004e-3, 0.2804, 6.098e-7}, {1.151e-3, 4.257, 1.049e-4}}},
}};

constexpr PublishedTable kKernelTable{{
    {{{1.846e-1, 1.410, 2.128e-2}, {4.213e-2, 0.2722, 1.040e-2}, {1.539e-1, 4.259, 3.562e-2}}},
    {{{8.090e-2, 1.417, 6.634e-3}, {1.693e-2, 0.2781, 3.273e-3}, {6.741e-2, 4.255, 1.122e-2}}},
    {{{3.531e-2, 1.418, 2.131e-3}, {6.804e-3, 0.2796, 4.976e-4}, {3.531e-2, 4.257, 3.990e-3}}},
    {{{1.855e-2, 1.419, 8.126e-4}, {3.281e-3, 0.2812, 2.454e-5}, {1.546e-2, 4.256, 1.216e-3}}},
    {{{8.128e-3, 1.419, 2.040e-4}, {1.319e-3, 0.2805, 1.327e-5}, {5.644e-3, 4.257, 3.844e-4}}},
    {{{4.274e-3, 1.419, 8.082e-5}, {7.631e-4, 0.2804, 5.985e-7}, {2.473e-3, 4.257, 1.240e-4}}},
}};

std::vector<std::uint64_t> decades(std::uint64_t lo, std::uint64_t hi) {
  std::vector<std::uint64_t> out;
  std::uint64_t n = 1;
  while (n < lo) n *= 10;
  for (; n <= hi; n *= 10) out.push_back(n);
  if (out.empty()) throw InvalidArgument("no power of ten between --min-n and --max-n");
  return out;
}

std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

std::string opt_fmt(const char* spec, const std::optional<PublishedRow>& row, double PublishedRow::*field) {
  return row ? fmt(spec, (*row).*field) : "--";
}

void table_markdown(std::ostringstream& md, const RunReport& rep) {
  const RunConfig& c = rep.config;
  const bool hist = c.estimator.kind == EstimatorKind::Histogram;
  const char* pname = hist ? "dv" : "h";
  md << "### " << to_string(c.distribution) << " (" << c.estimator.label() << ", "
     << c.replicates << " replicates)\n\n";
  md << "| N | " << pname << "_dm | published " << pname << "_dm | S_dm | published S_dm | sigma(S_dm) "
     << "| published sigma | reference " << pname << " | S at reference |\n";
  md << "|---|---|---|---|---|---|---|---|---|\n";
  for (const RunRow& r : rep.rows) {
    const auto pub = published_row(c.estimator.kind, c.distribution, r.n);
    md << "| " << r.n << " | " << fmt("%.4e", r.selection.param_dm) << " | "
       << opt_fmt("%.4e", pub, &PublishedRow::param) << " | " << fmt("%.4f", r.selection.entropy_dm)
       << " | " << opt_fmt("%.4f", pub, &PublishedRow::entropy) << " | " << fmt("%.3e", r.sigma_dm)
       << " | " << opt_fmt("%.3e", pub, &PublishedRow::sigma) << " | "
       << fmt("%.4e", r.reference_param) << " | " << fmt("%.4f", r.reference_entropy) << " |\n";
  }
  md << "\nExact entropy: " << fmt("%.6f", AnalyticDistribution(c.distribution).exact_entropy())
     << " (published " << fmt("%.4g", AnalyticDistribution(c.distribution).published_entropy())
     << ")\n";
  if (rep.has_scaling)
    md << "Fitted exponent of " << pname << "_dm vs N: " << fmt("%.4f", rep.scaling.exponent)
       << "; reference selector: " << fmt("%.4f", rep.reference_scaling.exponent) << "\n";
  md << "\n";
}

}  // namespace

std::string_view to_string(Profile p) {
  switch (p) {
    case Profile::Table1:
      return "table1";
    case Profile::Table2:
      return "table2";
    case Profile::Fig4:
      return "fig4";
    case Profile::Fig5:
      return "fig5";
  }
  return "table1";
}

Profile parse_profile(std::string_view name) {
  for (Profile p : {Profile::Table1, Profile::Table2, Profile::Fig4, Profile::Fig5})
    if (to_string(p) == name) return p;
  throw InvalidArgument("unknown profile '" + std::string(name) +
                        "' (valid: table1, table2, fig4, fig5)");
}

std::optional<PublishedRow> published_row(EstimatorKind kind, DistributionId dist, std::uint64_t n) {
  std::uint64_t p = 1000;
  for (std::size_t row = 0; row < 6; ++row, p *= 10) {
    if (p != n) continue;
    const PublishedTable& t = kind == EstimatorKind::Histogram ? kHistogramTable : kKernelTable;
    return t[row][static_cast<std::size_t>(dist)];
  }
  return std::nullopt;
}

RunConfig profile_config(const ReproduceOptions& options, DistributionId dist) {
  RunConfig c;
  c.distribution = dist;
  c.estimator.kind =
      options.profile == Profile::Table1 ? EstimatorKind::Histogram : EstimatorKind::Kde;
  c.estimator.kernel = KernelId::Epanechnikov;
  c.sample_sizes = decades(options.min_n, options.max_n);
  c.replicates = options.replicates
                     ? options.replicates
                     : (options.full_scale ? kPaperReplicates : kCiReplicates);
  c.base_seed = options.base_seed;
  c.threads = options.threads;
  return c;
}

ReproduceResult reproduce(const ReproduceOptions& options) {
  ReproduceResult result;
  std::ostringstream md, csv;
  md << "# Reproduction: " << to_string(options.profile) << "\n\n";
  if (options.profile == Profile::Fig4)
    csv << "# schema=dentropy.fig4.v1\ndistribution,n,h_dm,h_amise\n";
  if (options.profile == Profile::Fig5)
    csv << "# schema=dentropy.fig5.v1\ndistribution,n,entropy_dm,sigma_dm,entropy_amise,sigma_amise,"
           "exact_entropy\n";
  for (DistributionId dist : options.distributions) {
    RunReport rep = run_experiment(profile_config(options, dist));
    table_markdown(md, rep);
    for (const RunRow& r : rep.rows) {
      if (options.profile == Profile::Fig4)
        csv << to_string(dist) << ',' << r.n << ',' << format_double(r.selection.param_dm) << ','
            << format_double(r.reference_param) << '\n';
      if (options.profile == Profile::Fig5)
        csv << to_string(dist) << ',' << r.n << ',' << format_double(r.selection.entropy_dm) << ','
            << format_double(r.sigma_dm) << ',' << format_double(r.reference_entropy) << ','
            << format_double(r.reference_sigma) << ',' << format_double(r.exact_entropy) << '\n';
    }
    if (options.profile == Profile::Fig4 && rep.has_scaling)
      csv << "# fit " << to_string(dist) << " h_dm_exponent=" << format_double(rep.scaling.exponent)
          << " h_amise_exponent=" << format_double(rep.reference_scaling.exponent) << '\n';
    result.reports.push_back(std::move(rep));
  }
  result.markdown = md.str();
  result.csv = csv.str();
  return result;
}

void write_reproduction(const ReproduceResult& result, const ReproduceOptions& options,
                        const std::string& dir) {
  namespace fs = std::filesystem;
  for (const RunReport& rep : result.reports)
    write_report(rep, (fs::path(dir) / std::string(to_string(rep.config.distribution))).string());
  auto write_text = [&](const std::string& name, const std::string& text) {
    const std::string path = (fs::path(dir) / name).string();
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path + "' for writing", path);
    out << text;
    if (!out) throw IoError("write failed for '" + path + "'", path);
  };
  write_text("summary.md", result.markdown);
  if (!result.csv.empty()) write_text(std::string(to_string(options.profile)) + ".csv", result.csv);
}

}  // namespace dentropy
