/*
 * dentropy: differential entropy of samples from histogram and kernel
 * density estimates, with the derivative-minimum smoothing selector.
 *
 * Every function that can fail returns a dent_status. On failure the
 * message is available from dent_last_error() on the same thread until the
 * next failing call. Objects are opaque handles released with their
 * matching *_free function; passing NULL to a free function is a no-op.
 */
#ifndef DENTROPY_DENTROPY_H
#define DENTROPY_DENTROPY_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define DENT_API __declspec(dllexport)
#else
#define DENT_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum dent_status {
  DENT_OK = 0,
  DENT_ERR_INVALID_ARGUMENT = 1,
  DENT_ERR_BOUNDARY_MINIMUM = 2,
  DENT_ERR_RESOURCE_BUDGET = 3,
  DENT_ERR_IO = 4,
  DENT_ERR_PARSE = 5,
  DENT_ERR_INTERNAL = 6
} dent_status;

DENT_API const char* dent_last_error(void);
DENT_API const char* dent_status_name(dent_status status);
DENT_API const char* dent_version(void);
/* Releases strings returned through char** out-parameters. */
DENT_API void dent_string_free(char* s);

/* ---- distributions ---------------------------------------------------- */

typedef enum dent_distribution {
  DENT_NORMAL1D = 0,
  DENT_POWERLAW1D = 1,
  DENT_NORMAL3D = 2
} dent_distribution;

/* "normal1d", "powerlaw1d", "normal3d". */
DENT_API dent_status dent_distribution_parse(const char* name, dent_distribution* out);
DENT_API const char* dent_distribution_name(dent_distribution dist);
DENT_API int dent_distribution_dim(dent_distribution dist);
DENT_API dent_status dent_pdf(dent_distribution dist, const double* v, size_t dim, double* out);
/* Exact entropy in nats, and the four-digit published reference value. */
DENT_API dent_status dent_exact_entropy(dent_distribution dist, double* out);
DENT_API dent_status dent_published_entropy(dent_distribution dist, double* out);
/* R(f') for order 1, R(f'') for order 2 (radial law for normal3d). */
DENT_API dent_status dent_roughness(dent_distribution dist, int order, double* out);

/* ---- samples ---------------------------------------------------------- */

typedef struct dent_sample dent_sample;

DENT_API dent_status dent_sample_draw(dent_distribution dist, uint64_t n, uint64_t seed,
                                      dent_sample** out);
/* Copies n rows of dim values (row-major). */
DENT_API dent_status dent_sample_from_data(const double* data, size_t n, int dim,
                                           dent_sample** out);
DENT_API dent_status dent_sample_read(const char* path, dent_sample** out);
DENT_API dent_status dent_sample_write(const dent_sample* sample, const char* path);
DENT_API size_t dent_sample_size(const dent_sample* sample);
DENT_API int dent_sample_dim(const dent_sample* sample);
/* Row-major view, valid while the sample lives. */
DENT_API const double* dent_sample_data(const dent_sample* sample);
DENT_API void dent_sample_free(dent_sample* sample);

/* ---- histograms ------------------------------------------------------- */

typedef struct dent_histogram dent_histogram;

DENT_API dent_status dent_histogram_build(const dent_sample* sample, double bin_width,
                                          dent_histogram** out);
/* Histogram from explicit occupied cells: cells holds dim indices per cell. */
DENT_API dent_status dent_histogram_from_counts(int dim, double bin_width, const int64_t* cells,
                                                const uint64_t* counts, size_t occupied,
                                                dent_histogram** out);
DENT_API dent_status dent_histogram_entropy(const dent_histogram* h, double* out);
DENT_API dent_status dent_histogram_coarsen(const dent_histogram* h, int factor,
                                            dent_histogram** out);
DENT_API size_t dent_histogram_occupied(const dent_histogram* h);
DENT_API uint64_t dent_histogram_total(const dent_histogram* h);
DENT_API double dent_histogram_bin_width(const dent_histogram* h);
/* index_out receives dim values. */
DENT_API dent_status dent_histogram_cell(const dent_histogram* h, size_t c, int64_t* index_out,
                                         uint64_t* count_out);
DENT_API void dent_histogram_free(dent_histogram* h);

/* ---- kernel density estimates ---------------------------------------- */

typedef enum dent_kernel {
  DENT_KERNEL_EPANECHNIKOV = 0,
  DENT_KERNEL_UNIFORM = 1,
  DENT_KERNEL_GAUSSIAN = 2
} dent_kernel;

typedef enum dent_entropy_method {
  DENT_METHOD_QUADRATURE = 0,
  DENT_METHOD_RESUBSTITUTION = 1
} dent_entropy_method;

typedef struct dent_kde_options {
  uint64_t node_budget; /* 0 keeps the default of 2^24 */
  int leave_one_out;
} dent_kde_options;

/* "epanechnikov", "uniform", "gaussian". */
DENT_API dent_status dent_kernel_parse(const char* name, dent_kernel* out);
DENT_API const char* dent_kernel_name(dent_kernel kernel);
DENT_API dent_status dent_kernel_eval(dent_kernel kernel, double u, double* out);

typedef struct dent_kde dent_kde;

/* options may be NULL. */
DENT_API dent_status dent_kde_create(const dent_sample* sample, dent_kernel kernel,
                                     double bandwidth, const dent_kde_options* options,
                                     dent_kde** out);
DENT_API dent_status dent_kde_density(const dent_kde* kde, const double* x, size_t dim,
                                      double* out);
DENT_API dent_status dent_kde_density_bruteforce(const dent_kde* kde, const double* x,
                                                 size_t dim, double* out);
DENT_API dent_status dent_kde_entropy(const dent_kde* kde, dent_entropy_method method,
                                      double* out);
/* One-dimensional estimates only. */
DENT_API dent_status dent_kde_entropy_derivative(const dent_kde* kde, double* out);
DENT_API dent_status dent_kde_mass(const dent_kde* kde, double* out);
DENT_API dent_status dent_kde_mass_derivative(const dent_kde* kde, double* out);
DENT_API dent_status dent_kde_second_derivative_residual(const dent_kde* kde, double* out);
DENT_API void dent_kde_free(dent_kde* kde);

/* ---- entropy curves and selection ------------------------------------ */

typedef enum dent_estimator_kind { DENT_HISTOGRAM = 0, DENT_KDE = 1 } dent_estimator_kind;
typedef enum dent_geometry { DENT_GEOMETRY_AUTO = 0, DENT_GEOMETRY_FULL = 1, DENT_GEOMETRY_RADIAL = 2 } dent_geometry;

typedef struct dent_estimator {
  dent_estimator_kind kind;
  dent_kernel kernel;
  dent_entropy_method method;
  dent_geometry geometry;
  uint64_t node_budget; /* 0 keeps the default */
} dent_estimator;

/* Histogram, Epanechnikov, quadrature, automatic geometry. */
DENT_API void dent_estimator_default(dent_estimator* out);

typedef struct dent_curve dent_curve;

/* grid may be NULL (grid_len 0) for the default grid of grid_points values
 * (0 means 60) built from the first replicate. threads 0 = all cores. */
DENT_API dent_status dent_curve_compute(const dent_sample* const* samples, size_t count,
                                        const double* grid, size_t grid_len, size_t grid_points,
                                        const dent_estimator* estimator, unsigned threads,
                                        dent_curve** out);
/* Replicate r is drawn with seed base_seed + r. */
DENT_API dent_status dent_curve_generate(dent_distribution dist, uint64_t n, size_t replicates,
                                         uint64_t base_seed, const double* grid, size_t grid_len,
                                         size_t grid_points, const dent_estimator* estimator,
                                         unsigned threads, dent_curve** out);
/* derivative may be NULL to compute it from params and mean. */
DENT_API dent_status dent_curve_from_arrays(const double* params, const double* mean,
                                            const double* std_dev, const double* derivative,
                                            size_t len, int bin_width_grid, dent_curve** out);
DENT_API dent_status dent_curve_read(const char* path, dent_curve** out);
/* meta is appended to the CSV comment header; may be NULL. */
DENT_API dent_status dent_curve_write(const dent_curve* curve, const char* path, const char* meta);
DENT_API size_t dent_curve_size(const dent_curve* curve);
DENT_API size_t dent_curve_replicates(const dent_curve* curve);
DENT_API dent_status dent_curve_point(const dent_curve* curve, size_t k, double* param,
                                      double* mean, double* std_dev, double* derivative);
/* Search window used by default: the whole grid, or bin widths up to a
 * quarter of the largest grid value. */
DENT_API dent_status dent_curve_default_window(const dent_curve* curve, size_t* first,
                                               size_t* last);
DENT_API void dent_curve_free(dent_curve* curve);

typedef struct dent_selection {
  double param_dm;
  double entropy_dm;
  double derivative_min;
  size_t index;
  int boundary_flag;    /* minimum on an inner window edge */
  size_t local_minima;  /* strict local minima inside the window */
  int boundary_side;    /* on DENT_ERR_BOUNDARY_MINIMUM: 0 lower, 1 upper; else -1 */
} dent_selection;

/* window may be NULL (whole grid) or point to {first, last}. */
DENT_API dent_status dent_find_derivative_minimum(const dent_curve* curve, const size_t* window,
                                                  dent_selection* out);
/* Central differences of mean over ln(param) (log_form != 0) or param. */
DENT_API dent_status dent_derivative_curve(const double* params, const double* mean, size_t len,
                                           int log_form, double* out);
DENT_API dent_status dent_scott_bin_width(dent_distribution dist, uint64_t n, double* out);
DENT_API dent_status dent_amise_bandwidth(dent_distribution dist, dent_kernel kernel, uint64_t n,
                                          double* out);
DENT_API dent_status dent_fit_scaling_exponent(const double* ns, const double* params, size_t len,
                                               double* exponent, double* intercept);

/* ---- experiments ------------------------------------------------------ */

typedef struct dent_report dent_report;

typedef struct dent_report_row {
  uint64_t n;
  double param_dm;
  double entropy_dm;
  double sigma_dm;
  double derivative_min;
  size_t index;
  int boundary_flag;
  double exact_entropy;
  double reference_param;
  double reference_entropy;
  double reference_sigma;
} dent_report_row;

/* Flat "key = value" configuration text or file. */
DENT_API dent_status dent_experiment_run(const char* config_text, dent_report** out);
DENT_API dent_status dent_experiment_run_file(const char* path, dent_report** out);
DENT_API size_t dent_report_rows(const dent_report* report);
DENT_API dent_status dent_report_row_get(const dent_report* report, size_t i, dent_report_row* out);
/* DENT_ERR_INVALID_ARGUMENT when fewer than three sample sizes were run. */
DENT_API dent_status dent_report_scaling(const dent_report* report, double* exponent,
                                         double* reference_exponent);
DENT_API dent_status dent_report_json(const dent_report* report, char** out);
/* report.json plus one curve CSV per sample size. */
DENT_API dent_status dent_report_write(const dent_report* report, const char* dir);
DENT_API void dent_report_free(dent_report* report);

typedef struct dent_reproduce_options {
  const char* profile; /* "table1", "table2", "fig4", "fig5" */
  uint64_t min_n;      /* 0 = 1000 */
  uint64_t max_n;      /* 0 = 1000000 */
  size_t replicates;   /* 0 = 20, or 50 with full_scale */
  int full_scale;
  uint64_t base_seed;
  unsigned threads;
} dent_reproduce_options;

/* Runs a profile and writes its reports, summary.md and figure CSV into
 * out_dir. summary may be NULL; otherwise it receives the markdown. */
DENT_API dent_status dent_reproduce(const dent_reproduce_options* options, const char* out_dir,
                                    char** summary);

#ifdef __cplusplus
}
#endif

#endif /* DENTROPY_DENTROPY_H */
