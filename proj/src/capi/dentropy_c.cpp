#include "dentropy/dentropy.h"

#include <cstdlib>
#include <cstring>
#include <memory>
#include <new>
#include <sstream>
#include <string>

#include "core/distributions.hpp"
#include "core/error.hpp"
#include "core/estimator.hpp"
#include "core/experiment.hpp"
#include "core/histogram.hpp"
#include "core/kde.hpp"
#include "core/reproduce.hpp"
#include "core/sample_io.hpp"
#include "core/selector.hpp"

using namespace dentropy;

struct dent_sample {
  Sample sample;
};

struct dent_histogram {
  HistogramEstimate hist;
};

struct dent_kde {
  KdeEstimate est;
  KdeOptions options;
};

struct dent_curve {
  EntropyCurve curve;
};

struct dent_report {
  RunReport report;
};

namespace {

thread_local std::string g_last_error;

dent_status fail(dent_status status, const std::string& message) {
  g_last_error = message;
  return status;
}

dent_status status_of(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument:
      return DENT_ERR_INVALID_ARGUMENT;
    case ErrorCode::BoundaryMinimum:
      return DENT_ERR_BOUNDARY_MINIMUM;
    case ErrorCode::ResourceBudget:
      return DENT_ERR_RESOURCE_BUDGET;
    case ErrorCode::Io:
      return DENT_ERR_IO;
    case ErrorCode::Parse:
      return DENT_ERR_PARSE;
  }
  return DENT_ERR_INTERNAL;
}

// Maps the exception being handled to a status and records its message.
dent_status translate_current() {
  try {
    throw;
  } catch (const Error& e) {
    return fail(status_of(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(DENT_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(DENT_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(DENT_ERR_INTERNAL, "unknown error");
  }
}

template <typename Body>
dent_status guard(Body&& body) {
  try {
    body();
    return DENT_OK;
  } catch (...) {
    return translate_current();
  }
}

void require(const void* p, const char* what) {
  if (p == nullptr) throw InvalidArgument(std::string(what) + " must not be NULL");
}

DistributionId to_id(dent_distribution d) {
  if (d < DENT_NORMAL1D || d > DENT_NORMAL3D) throw InvalidArgument("unknown distribution code");
  return static_cast<DistributionId>(d);
}

KernelId to_kernel(dent_kernel k) {
  if (k < DENT_KERNEL_EPANECHNIKOV || k > DENT_KERNEL_GAUSSIAN) throw InvalidArgument("unknown kernel code");
  return static_cast<KernelId>(k);
}

EstimatorSpec to_spec(const dent_estimator* e) {
  EstimatorSpec spec;
  if (e == nullptr) return spec;
  if (e->kind != DENT_HISTOGRAM && e->kind != DENT_KDE) throw InvalidArgument("unknown estimator kind");
  spec.kind = e->kind == DENT_HISTOGRAM ? EstimatorKind::Histogram : EstimatorKind::Kde;
  spec.kernel = to_kernel(e->kernel);
  if (e->method != DENT_METHOD_QUADRATURE && e->method != DENT_METHOD_RESUBSTITUTION)
    throw InvalidArgument("unknown entropy method");
  spec.method = static_cast<EntropyMethod>(e->method);
  if (e->geometry < DENT_GEOMETRY_AUTO || e->geometry > DENT_GEOMETRY_RADIAL)
    throw InvalidArgument("unknown geometry");
  spec.geometry = static_cast<Geometry>(e->geometry);
  if (e->node_budget != 0) spec.kde_options.node_budget = e->node_budget;
  return spec;
}

SmoothingGrid make_grid(const Sample& first, const EstimatorSpec& spec, const double* grid,
                        std::size_t grid_len, std::size_t grid_points) {
  const GridKind kind = grid_kind_for(spec.kind);
  if (grid_len > 0) {
    require(grid, "grid");
    return SmoothingGrid::from_values(std::vector<double>(grid, grid + grid_len), kind);
  }
  const PreparedSample prepared(first, spec);
  return default_grid(prepared.working(), kind, grid_points ? grid_points : kDefaultGridPoints);
}

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

}  // namespace

extern "C" {

const char* dent_last_error(void) { return g_last_error.c_str(); }

const char* dent_status_name(dent_status status) {
  switch (status) {
    case DENT_OK:
      return "ok";
    case DENT_ERR_INVALID_ARGUMENT:
      return "invalid argument";
    case DENT_ERR_BOUNDARY_MINIMUM:
      return "boundary minimum";
    case DENT_ERR_RESOURCE_BUDGET:
      return "resource budget exceeded";
    case DENT_ERR_IO:
      return "i/o error";
    case DENT_ERR_PARSE:
      return "parse error";
    case DENT_ERR_INTERNAL:
      return "internal error";
  }
  return "unknown status";
}

const char* dent_version(void) { return "1.0.0"; }

void dent_string_free(char* s) { std::free(s); }

// ---- distributions -------------------------------------------------------

dent_status dent_distribution_parse(const char* name, dent_distribution* out) {
  return guard([&] {
    require(name, "name");
    require(out, "out");
    *out = static_cast<dent_distribution>(parse_distribution(name));
  });
}

const char* dent_distribution_name(dent_distribution dist) {
  switch (dist) {
    case DENT_NORMAL1D:
      return "normal1d";
    case DENT_POWERLAW1D:
      return "powerlaw1d";
    case DENT_NORMAL3D:
      return "normal3d";
  }
  return nullptr;
}

int dent_distribution_dim(dent_distribution dist) {
  if (dist < DENT_NORMAL1D || dist > DENT_NORMAL3D) return 0;
  return AnalyticDistribution(static_cast<DistributionId>(dist)).dim();
}

dent_status dent_pdf(dent_distribution dist, const double* v, size_t dim, double* out) {
  return guard([&] {
    require(v, "v");
    require(out, "out");
    *out = AnalyticDistribution(to_id(dist)).pdf({v, dim});
  });
}

dent_status dent_exact_entropy(dent_distribution dist, double* out) {
  return guard([&] {
    require(out, "out");
    *out = AnalyticDistribution(to_id(dist)).exact_entropy();
  });
}

dent_status dent_published_entropy(dent_distribution dist, double* out) {
  return guard([&] {
    require(out, "out");
    *out = AnalyticDistribution(to_id(dist)).published_entropy();
  });
}

dent_status dent_roughness(dent_distribution dist, int order, double* out) {
  return guard([&] {
    require(out, "out");
    const AnalyticDistribution d(to_id(dist));
    if (order == 1)
      *out = d.roughness_fprime();
    else if (order == 2)
      *out = d.roughness_fsecond();
    else
      throw InvalidArgument("roughness order must be 1 or 2");
  });
}

// ---- samples -------------------------------------------------------------

dent_status dent_sample_draw(dent_distribution dist, uint64_t n, uint64_t seed, dent_sample** out) {
  return guard([&] {
    require(out, "out");
    *out = new dent_sample{AnalyticDistribution(to_id(dist)).sample(n, seed)};
  });
}

dent_status dent_sample_from_data(const double* data, size_t n, int dim, dent_sample** out) {
  return guard([&] {
    require(data, "data");
    require(out, "out");
    if (n == 0) throw InvalidArgument("sample must have at least one row");
    if (dim < 1) throw InvalidArgument("dimension must be positive");
    Sample s;
    s.n = n;
    s.dim = dim;
    s.data.assign(data, data + n * static_cast<std::size_t>(dim));
    for (double x : s.data)
      if (!std::isfinite(x)) throw InvalidArgument("sample values must be finite");
    *out = new dent_sample{std::move(s)};
  });
}

dent_status dent_sample_read(const char* path, dent_sample** out) {
  return guard([&] {
    require(path, "path");
    require(out, "out");
    *out = new dent_sample{read_sample_file(path)};
  });
}

dent_status dent_sample_write(const dent_sample* sample, const char* path) {
  return guard([&] {
    require(sample, "sample");
    require(path, "path");
    write_sample_file(path, sample->sample);
  });
}

size_t dent_sample_size(const dent_sample* sample) { return sample ? sample->sample.n : 0; }
int dent_sample_dim(const dent_sample* sample) { return sample ? sample->sample.dim : 0; }
const double* dent_sample_data(const dent_sample* sample) {
  return sample ? sample->sample.data.data() : nullptr;
}
void dent_sample_free(dent_sample* sample) { delete sample; }

// ---- histograms ----------------------------------------------------------

dent_status dent_histogram_build(const dent_sample* sample, double bin_width, dent_histogram** out) {
  return guard([&] {
    require(sample, "sample");
    require(out, "out");
    *out = new dent_histogram{build_histogram(sample->sample, bin_width)};
  });
}

dent_status dent_histogram_from_counts(int dim, double bin_width, const int64_t* cells,
                                       const uint64_t* counts, size_t occupied,
                                       dent_histogram** out) {
  return guard([&] {
    require(cells, "cells");
    require(counts, "counts");
    require(out, "out");
    if (dim < 1) throw InvalidArgument("dimension must be positive");
    if (!(bin_width > 0.0) || !std::isfinite(bin_width))
      throw InvalidArgument("bin width must be positive and finite");
    if (occupied == 0) throw InvalidArgument("histogram needs at least one occupied cell");
    HistogramEstimate h;
    h.dim = dim;
    h.bin_width = bin_width;
    h.origin.assign(static_cast<std::size_t>(dim), 0.0);
    h.cells.assign(cells, cells + occupied * static_cast<std::size_t>(dim));
    h.counts.assign(counts, counts + occupied);
    for (std::uint64_t c : h.counts) {
      if (c == 0) throw InvalidArgument("occupied cells need a positive count");
      h.n += c;
    }
    *out = new dent_histogram{std::move(h)};
  });
}

dent_status dent_histogram_entropy(const dent_histogram* h, double* out) {
  return guard([&] {
    require(h, "histogram");
    require(out, "out");
    *out = histogram_entropy(h->hist);
  });
}

dent_status dent_histogram_coarsen(const dent_histogram* h, int factor, dent_histogram** out) {
  return guard([&] {
    require(h, "histogram");
    require(out, "out");
    *out = new dent_histogram{coarsen(h->hist, factor)};
  });
}

size_t dent_histogram_occupied(const dent_histogram* h) { return h ? h->hist.occupied() : 0; }
uint64_t dent_histogram_total(const dent_histogram* h) { return h ? h->hist.n : 0; }
double dent_histogram_bin_width(const dent_histogram* h) { return h ? h->hist.bin_width : 0.0; }

dent_status dent_histogram_cell(const dent_histogram* h, size_t c, int64_t* index_out,
                                uint64_t* count_out) {
  return guard([&] {
    require(h, "histogram");
    if (c >= h->hist.occupied()) throw InvalidArgument("cell index out of range");
    if (index_out) {
      const auto idx = h->hist.cell(c);
      std::copy(idx.begin(), idx.end(), index_out);
    }
    if (count_out) *count_out = h->hist.counts[c];
  });
}

void dent_histogram_free(dent_histogram* h) { delete h; }

// ---- kernel density estimates -------------------------------------------

dent_status dent_kernel_parse(const char* name, dent_kernel* out) {
  return guard([&] {
    require(name, "name");
    require(out, "out");
    *out = static_cast<dent_kernel>(parse_kernel(name));
  });
}

const char* dent_kernel_name(dent_kernel kernel) {
  switch (kernel) {
    case DENT_KERNEL_EPANECHNIKOV:
      return "epanechnikov";
    case DENT_KERNEL_UNIFORM:
      return "uniform";
    case DENT_KERNEL_GAUSSIAN:
      return "gaussian";
  }
  return nullptr;
}

dent_status dent_kernel_eval(dent_kernel kernel, double u, double* out) {
  return guard([&] {
    require(out, "out");
    *out = Kernel{to_kernel(kernel)}(u);
  });
}

dent_status dent_kde_create(const dent_sample* sample, dent_kernel kernel, double bandwidth,
                            const dent_kde_options* options, dent_kde** out) {
  return guard([&] {
    require(sample, "sample");
    require(out, "out");
    KdeOptions opt;
    if (options) {
      if (options->node_budget != 0) opt.node_budget = options->node_budget;
      opt.leave_one_out = options->leave_one_out != 0;
    }
    *out = new dent_kde{KdeEstimate(sample->sample, Kernel{to_kernel(kernel)}, bandwidth), opt};
  });
}

dent_status dent_kde_density(const dent_kde* kde, const double* x, size_t dim, double* out) {
  return guard([&] {
    require(kde, "kde");
    require(x, "x");
    require(out, "out");
    if (dim != static_cast<std::size_t>(kde->est.dim()))
      throw InvalidArgument("query point has the wrong dimension");
    *out = kde->est.density({x, dim});
  });
}

dent_status dent_kde_density_bruteforce(const dent_kde* kde, const double* x, size_t dim,
                                        double* out) {
  return guard([&] {
    require(kde, "kde");
    require(x, "x");
    require(out, "out");
    if (dim != static_cast<std::size_t>(kde->est.dim()))
      throw InvalidArgument("query point has the wrong dimension");
    *out = kde->est.density_bruteforce({x, dim});
  });
}

dent_status dent_kde_entropy(const dent_kde* kde, dent_entropy_method method, double* out) {
  return guard([&] {
    require(kde, "kde");
    require(out, "out");
    if (method != DENT_METHOD_QUADRATURE && method != DENT_METHOD_RESUBSTITUTION)
      throw InvalidArgument("unknown entropy method");
    *out = kde_entropy(kde->est, static_cast<EntropyMethod>(method), kde->options);
  });
}

dent_status dent_kde_entropy_derivative(const dent_kde* kde, double* out) {
  return guard([&] {
    require(kde, "kde");
    require(out, "out");
    *out = kde_entropy_derivative(kde->est, kde->options);
  });
}

dent_status dent_kde_mass(const dent_kde* kde, double* out) {
  return guard([&] {
    require(kde, "kde");
    require(out, "out");
    *out = kde_mass(kde->est, kde->options);
  });
}

dent_status dent_kde_mass_derivative(const dent_kde* kde, double* out) {
  return guard([&] {
    require(kde, "kde");
    require(out, "out");
    *out = kde_mass_derivative(kde->est, kde->options);
  });
}

dent_status dent_kde_second_derivative_residual(const dent_kde* kde, double* out) {
  return guard([&] {
    require(kde, "kde");
    require(out, "out");
    *out = kde_second_derivative_residual(kde->est, kde->options);
  });
}

void dent_kde_free(dent_kde* kde) { delete kde; }

// ---- curves and selection ------------------------------------------------

void dent_estimator_default(dent_estimator* out) {
  if (out == nullptr) return;
  out->kind = DENT_HISTOGRAM;
  out->kernel = DENT_KERNEL_EPANECHNIKOV;
  out->method = DENT_METHOD_QUADRATURE;
  out->geometry = DENT_GEOMETRY_AUTO;
  out->node_budget = 0;
}

dent_status dent_curve_compute(const dent_sample* const* samples, size_t count, const double* grid,
                               size_t grid_len, size_t grid_points, const dent_estimator* estimator,
                               unsigned threads, dent_curve** out) {
  return guard([&] {
    require(samples, "samples");
    require(out, "out");
    if (count == 0) throw InvalidArgument("at least one replicate is required");
    std::vector<Sample> reps;
    reps.reserve(count);
    for (size_t i = 0; i < count; ++i) {
      require(samples[i], "sample");
      reps.push_back(samples[i]->sample);
    }
    const EstimatorSpec spec = to_spec(estimator);
    const SmoothingGrid g = make_grid(reps.front(), spec, grid, grid_len, grid_points);
    *out = new dent_curve{entropy_curve(reps, g, spec, threads)};
  });
}

dent_status dent_curve_generate(dent_distribution dist, uint64_t n, size_t replicates,
                                uint64_t base_seed, const double* grid, size_t grid_len,
                                size_t grid_points, const dent_estimator* estimator,
                                unsigned threads, dent_curve** out) {
  return guard([&] {
    require(out, "out");
    const AnalyticDistribution d(to_id(dist));
    const EstimatorSpec spec = to_spec(estimator);
    auto make = [&](std::size_t r) { return d.sample(n, base_seed + r); };
    const SmoothingGrid g = make_grid(make(0), spec, grid, grid_len, grid_points);
    *out = new dent_curve{entropy_curve(replicates, make, g, spec, threads)};
  });
}

dent_status dent_curve_from_arrays(const double* params, const double* mean, const double* std_dev,
                                   const double* derivative, size_t len, int bin_width_grid,
                                   dent_curve** out) {
  return guard([&] {
    require(params, "params");
    require(mean, "mean");
    require(out, "out");
    if (len < 3) throw InvalidArgument("a curve needs at least 3 points");
    EntropyCurve c;
    c.grid.kind = bin_width_grid ? GridKind::BinWidth : GridKind::Bandwidth;
    c.grid.values.assign(params, params + len);
    for (size_t k = 0; k < len; ++k)
      if (!(params[k] > 0.0) || (k > 0 && !(params[k] > params[k - 1])))
        throw InvalidArgument("params must be positive and strictly increasing");
    c.mean_entropy.assign(mean, mean + len);
    c.std_entropy = std_dev ? std::vector<double>(std_dev, std_dev + len) : std::vector<double>(len, 0.0);
    c.derivative = derivative ? std::vector<double>(derivative, derivative + len)
                              : derivative_curve(c.grid.values, c.mean_entropy);
    c.replicates = 1;
    *out = new dent_curve{std::move(c)};
  });
}

dent_status dent_curve_read(const char* path, dent_curve** out) {
  return guard([&] {
    require(path, "path");
    require(out, "out");
    *out = new dent_curve{read_curve_csv_file(path)};
  });
}

dent_status dent_curve_write(const dent_curve* curve, const char* path, const char* meta) {
  return guard([&] {
    require(curve, "curve");
    require(path, "path");
    write_curve_csv_file(path, curve->curve, meta ? meta : "");
  });
}

size_t dent_curve_size(const dent_curve* curve) { return curve ? curve->curve.grid.size() : 0; }
size_t dent_curve_replicates(const dent_curve* curve) { return curve ? curve->curve.replicates : 0; }

dent_status dent_curve_point(const dent_curve* curve, size_t k, double* param, double* mean,
                             double* std_dev, double* derivative) {
  return guard([&] {
    require(curve, "curve");
    const EntropyCurve& c = curve->curve;
    if (k >= c.grid.size()) throw InvalidArgument("curve index out of range");
    if (param) *param = c.grid.values[k];
    if (mean) *mean = c.mean_entropy[k];
    if (std_dev) *std_dev = c.std_entropy[k];
    if (derivative) *derivative = c.derivative[k];
  });
}

dent_status dent_curve_default_window(const dent_curve* curve, size_t* first, size_t* last) {
  return guard([&] {
    require(curve, "curve");
    require(first, "first");
    require(last, "last");
    const SmoothingGrid& g = curve->curve.grid;
    if (g.size() == 0) throw InvalidArgument("curve is empty");
    const auto w = default_window(g, g.values.back());
    *first = w.first;
    *last = w.second;
  });
}

void dent_curve_free(dent_curve* curve) { delete curve; }

dent_status dent_find_derivative_minimum(const dent_curve* curve, const size_t* window,
                                         dent_selection* out) {
  if (curve == nullptr || out == nullptr)
    return fail(DENT_ERR_INVALID_ARGUMENT, "curve and out must not be NULL");
  *out = dent_selection{};
  out->boundary_side = -1;
  try {
    std::optional<std::pair<std::size_t, std::size_t>> w;
    if (window) w = std::pair<std::size_t, std::size_t>{window[0], window[1]};
    const SelectorResult r = find_derivative_minimum(curve->curve, w);
    out->param_dm = r.param_dm;
    out->entropy_dm = r.entropy_dm;
    out->derivative_min = r.derivative_min;
    out->index = r.index;
    out->boundary_flag = r.boundary_flag ? 1 : 0;
    out->local_minima = r.local_minima;
    return DENT_OK;
  } catch (const BoundaryMinimumError& e) {
    out->boundary_side = e.side() == BoundarySide::Lower ? 0 : 1;
    out->index = e.index();
    const EntropyCurve& c = curve->curve;
    out->param_dm = c.grid.values[e.index()];
    out->entropy_dm = c.mean_entropy[e.index()];
    out->derivative_min = c.derivative[e.index()];
    return fail(DENT_ERR_BOUNDARY_MINIMUM, e.what());
  } catch (...) {
    return translate_current();
  }
}

dent_status dent_derivative_curve(const double* params, const double* mean, size_t len,
                                  int log_form, double* out) {
  return guard([&] {
    require(params, "params");
    require(mean, "mean");
    require(out, "out");
    const std::vector<double> p(params, params + len), m(mean, mean + len);
    const std::vector<double> d = log_form ? derivative_curve(p, m) : linear_derivative_curve(p, m);
    std::copy(d.begin(), d.end(), out);
  });
}

dent_status dent_scott_bin_width(dent_distribution dist, uint64_t n, double* out) {
  return guard([&] {
    require(out, "out");
    *out = scott_bin_width(AnalyticDistribution(to_id(dist)), n);
  });
}

dent_status dent_amise_bandwidth(dent_distribution dist, dent_kernel kernel, uint64_t n,
                                 double* out) {
  return guard([&] {
    require(out, "out");
    *out = amise_bandwidth(AnalyticDistribution(to_id(dist)), Kernel{to_kernel(kernel)}, n);
  });
}

dent_status dent_fit_scaling_exponent(const double* ns, const double* params, size_t len,
                                      double* exponent, double* intercept) {
  return guard([&] {
    require(ns, "ns");
    require(params, "params");
    const ScalingFit f = fit_scaling_exponent(std::vector<double>(ns, ns + len),
                                              std::vector<double>(params, params + len));
    if (exponent) *exponent = f.exponent;
    if (intercept) *intercept = f.intercept;
  });
}

// ---- experiments ---------------------------------------------------------

dent_status dent_experiment_run(const char* config_text, dent_report** out) {
  return guard([&] {
    require(config_text, "config_text");
    require(out, "out");
    std::istringstream in(config_text);
    *out = new dent_report{run_experiment(parse_run_config(in))};
  });
}

dent_status dent_experiment_run_file(const char* path, dent_report** out) {
  return guard([&] {
    require(path, "path");
    require(out, "out");
    *out = new dent_report{run_experiment(read_run_config_file(path))};
  });
}

size_t dent_report_rows(const dent_report* report) { return report ? report->report.rows.size() : 0; }

dent_status dent_report_row_get(const dent_report* report, size_t i, dent_report_row* out) {
  return guard([&] {
    require(report, "report");
    require(out, "out");
    if (i >= report->report.rows.size()) throw InvalidArgument("row index out of range");
    const RunRow& r = report->report.rows[i];
    out->n = r.n;
    out->param_dm = r.selection.param_dm;
    out->entropy_dm = r.selection.entropy_dm;
    out->sigma_dm = r.sigma_dm;
    out->derivative_min = r.selection.derivative_min;
    out->index = r.selection.index;
    out->boundary_flag = r.selection.boundary_flag ? 1 : 0;
    out->exact_entropy = r.exact_entropy;
    out->reference_param = r.reference_param;
    out->reference_entropy = r.reference_entropy;
    out->reference_sigma = r.reference_sigma;
  });
}

dent_status dent_report_scaling(const dent_report* report, double* exponent,
                                double* reference_exponent) {
  return guard([&] {
    require(report, "report");
    if (!report->report.has_scaling)
      throw InvalidArgument("scaling needs at least three distinct sample sizes");
    if (exponent) *exponent = report->report.scaling.exponent;
    if (reference_exponent) *reference_exponent = report->report.reference_scaling.exponent;
  });
}

dent_status dent_report_json(const dent_report* report, char** out) {
  return guard([&] {
    require(report, "report");
    require(out, "out");
    *out = copy_string(report_to_json(report->report));
  });
}

dent_status dent_report_write(const dent_report* report, const char* dir) {
  return guard([&] {
    require(report, "report");
    require(dir, "dir");
    write_report(report->report, dir);
  });
}

void dent_report_free(dent_report* report) { delete report; }

dent_status dent_reproduce(const dent_reproduce_options* options, const char* out_dir,
                           char** summary) {
  return guard([&] {
    require(options, "options");
    require(options->profile, "profile");
    require(out_dir, "out_dir");
    ReproduceOptions o;
    o.profile = parse_profile(options->profile);
    if (options->min_n) o.min_n = options->min_n;
    if (options->max_n) o.max_n = options->max_n;
    if (o.min_n > o.max_n) throw InvalidArgument("min_n exceeds max_n");
    o.replicates = options->replicates;
    o.full_scale = options->full_scale != 0;
    o.base_seed = options->base_seed;
    o.threads = options->threads;
    const ReproduceResult result = reproduce(o);
    write_reproduction(result, o, out_dir);
    if (summary) *summary = copy_string(result.markdown);
  });
}

}  // extern "C"
