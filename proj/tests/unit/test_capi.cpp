#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "dentropy/dentropy.h"

namespace {

std::string temp_path(const char* name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

}  // namespace

TEST(CApi, StatusNamesAndVersion) {
  EXPECT_STREQ(dent_status_name(DENT_OK), "ok");
  EXPECT_STREQ(dent_status_name(DENT_ERR_BOUNDARY_MINIMUM), "boundary minimum");
  EXPECT_NE(std::strlen(dent_version()), 0u);
}

TEST(CApi, InvalidArgumentsSetLastError) {
  dent_distribution d;
  EXPECT_EQ(dent_distribution_parse("cauchy", &d), DENT_ERR_INVALID_ARGUMENT);
  EXPECT_NE(std::string(dent_last_error()).find("cauchy"), std::string::npos);
  EXPECT_EQ(dent_distribution_parse(nullptr, &d), DENT_ERR_INVALID_ARGUMENT);
  dent_sample* s = nullptr;
  EXPECT_EQ(dent_sample_draw(DENT_NORMAL1D, 100, 1, nullptr), DENT_ERR_INVALID_ARGUMENT);
  ASSERT_EQ(dent_sample_draw(DENT_NORMAL1D, 100, 1, &s), DENT_OK);
  dent_histogram* h = nullptr;
  EXPECT_EQ(dent_histogram_build(s, -1.0, &h), DENT_ERR_INVALID_ARGUMENT);
  EXPECT_EQ(h, nullptr);
  dent_sample_free(s);
  dent_sample_free(nullptr);
}

TEST(CApi, CoarseGrainingExample) {
  const int64_t cells[] = {0, 1};
  const uint64_t counts[] = {2, 1};
  dent_histogram* h = nullptr;
  ASSERT_EQ(dent_histogram_from_counts(1, 1.0, cells, counts, 2, &h), DENT_OK);
  double s1 = 0.0, s2 = 0.0;
  ASSERT_EQ(dent_histogram_entropy(h, &s1), DENT_OK);
  EXPECT_NEAR(s1, std::log(3.0) - 2.0 / 3.0 * std::log(2.0), 1e-12);
  dent_histogram* c = nullptr;
  ASSERT_EQ(dent_histogram_coarsen(h, 2, &c), DENT_OK);
  ASSERT_EQ(dent_histogram_entropy(c, &s2), DENT_OK);
  EXPECT_NEAR(s2, std::log(2.0), 1e-12);
  EXPECT_EQ(dent_histogram_occupied(c), 1u);
  EXPECT_EQ(dent_histogram_total(c), 3u);
  EXPECT_DOUBLE_EQ(dent_histogram_bin_width(c), 2.0);
  EXPECT_EQ(dent_histogram_coarsen(h, 1, &c), DENT_ERR_INVALID_ARGUMENT);
  dent_histogram_free(c);
  dent_histogram_free(h);
}

TEST(CApi, KdeEntropyAndDerivatives) {
  dent_sample* s = nullptr;
  ASSERT_EQ(dent_sample_draw(DENT_NORMAL1D, 2000, 3, &s), DENT_OK);
  dent_kde* k = nullptr;
  ASSERT_EQ(dent_kde_create(s, DENT_KERNEL_EPANECHNIKOV, 0.2, nullptr, &k), DENT_OK);
  double e = 0, mass = 0, dmass = 1, d = 0;
  ASSERT_EQ(dent_kde_entropy(k, DENT_METHOD_QUADRATURE, &e), DENT_OK);
  EXPECT_NEAR(e, 1.42, 0.05);
  ASSERT_EQ(dent_kde_mass(k, &mass), DENT_OK);
  EXPECT_NEAR(mass, 1.0, 1e-10);
  ASSERT_EQ(dent_kde_mass_derivative(k, &dmass), DENT_OK);
  EXPECT_NEAR(dmass, 0.0, 1e-8);
  ASSERT_EQ(dent_kde_entropy_derivative(k, &d), DENT_OK);
  EXPECT_GT(d, 0.0);
  const double x = 0.1;
  double fast = 0, slow = 0;
  ASSERT_EQ(dent_kde_density(k, &x, 1, &fast), DENT_OK);
  ASSERT_EQ(dent_kde_density_bruteforce(k, &x, 1, &slow), DENT_OK);
  EXPECT_NEAR(fast, slow, 1e-12);
  EXPECT_EQ(dent_kde_density(k, &x, 3, &fast), DENT_ERR_INVALID_ARGUMENT);
  dent_kde_free(k);
  dent_sample_free(s);
}

TEST(CApi, NodeBudgetMapsToResourceStatus) {
  dent_sample* s = nullptr;
  ASSERT_EQ(dent_sample_draw(DENT_NORMAL3D, 1000, 3, &s), DENT_OK);
  dent_kde_options o{1000, 0};
  dent_kde* k = nullptr;
  ASSERT_EQ(dent_kde_create(s, DENT_KERNEL_EPANECHNIKOV, 0.01, &o, &k), DENT_OK);
  double e = 0;
  EXPECT_EQ(dent_kde_entropy(k, DENT_METHOD_QUADRATURE, &e), DENT_ERR_RESOURCE_BUDGET);
  dent_kde_free(k);
  dent_sample_free(s);
}

TEST(CApi, SampleFileRoundTripAndParseErrors) {
  dent_sample* s = nullptr;
  ASSERT_EQ(dent_sample_draw(DENT_POWERLAW1D, 50, 9, &s), DENT_OK);
  const std::string path = temp_path("dentropy_capi_sample.txt");
  ASSERT_EQ(dent_sample_write(s, path.c_str()), DENT_OK);
  dent_sample* back = nullptr;
  ASSERT_EQ(dent_sample_read(path.c_str(), &back), DENT_OK);
  ASSERT_EQ(dent_sample_size(back), 50u);
  EXPECT_EQ(std::memcmp(dent_sample_data(back), dent_sample_data(s), 50 * sizeof(double)), 0);
  dent_sample_free(back);
  dent_sample_free(s);

  std::ofstream(path) << "0.1\n0.2\nzero\n";
  EXPECT_EQ(dent_sample_read(path.c_str(), &back), DENT_ERR_PARSE);
  EXPECT_NE(std::string(dent_last_error()).find("line 3"), std::string::npos);
  EXPECT_EQ(dent_sample_read("/nonexistent/x.txt", &back), DENT_ERR_IO);
  std::remove(path.c_str());
}

TEST(CApi, CurveSelectionAndBoundary) {
  dent_estimator est;
  dent_estimator_default(&est);
  dent_curve* c = nullptr;
  ASSERT_EQ(dent_curve_generate(DENT_NORMAL1D, 5000, 3, 1, nullptr, 0, 0, &est, 1, &c), DENT_OK);
  EXPECT_EQ(dent_curve_size(c), 60u);
  EXPECT_EQ(dent_curve_replicates(c), 3u);
  size_t w[2];
  ASSERT_EQ(dent_curve_default_window(c, &w[0], &w[1]), DENT_OK);
  dent_selection sel;
  ASSERT_EQ(dent_find_derivative_minimum(c, w, &sel), DENT_OK);
  EXPECT_EQ(sel.boundary_side, -1);
  EXPECT_GT(sel.index, 0u);
  EXPECT_NEAR(sel.entropy_dm, 1.419, 0.05);
  dent_curve_free(c);

  // Strictly increasing derivative: minimum at the lower end.
  std::vector<double> p, m;
  for (int k = 0; k < 12; ++k) {
    p.push_back(std::pow(2.0, k));
    m.push_back(std::exp(0.1 * k * k));
  }
  ASSERT_EQ(dent_curve_from_arrays(p.data(), m.data(), nullptr, nullptr, p.size(), 0, &c), DENT_OK);
  EXPECT_EQ(dent_find_derivative_minimum(c, nullptr, &sel), DENT_ERR_BOUNDARY_MINIMUM);
  EXPECT_EQ(sel.boundary_side, 0);
  EXPECT_EQ(sel.index, 0u);
  dent_curve_free(c);
}

TEST(CApi, ReferenceFormulas) {
  double v = 0;
  ASSERT_EQ(dent_scott_bin_width(DENT_NORMAL1D, 100000, &v), DENT_OK);
  EXPECT_NEAR(v, 0.07520765706283298, 1e-14);
  ASSERT_EQ(dent_amise_bandwidth(DENT_NORMAL1D, DENT_KERNEL_EPANECHNIKOV, 100000, &v), DENT_OK);
  EXPECT_NEAR(v, 0.2344914356323711, 1e-13);
  EXPECT_EQ(dent_scott_bin_width(DENT_NORMAL1D, 0, &v), DENT_ERR_INVALID_ARGUMENT);
}

TEST(CApi, ExperimentFromText) {
  dent_report* r = nullptr;
  ASSERT_EQ(dent_experiment_run("distribution = normal1d\nsample_sizes = 1000\nreplicates = 2\nthreads = 1\n", &r),
            DENT_OK);
  ASSERT_EQ(dent_report_rows(r), 1u);
  dent_report_row row;
  ASSERT_EQ(dent_report_row_get(r, 0, &row), DENT_OK);
  EXPECT_EQ(row.n, 1000u);
  double e1, e2;
  EXPECT_EQ(dent_report_scaling(r, &e1, &e2), DENT_ERR_INVALID_ARGUMENT);
  char* json = nullptr;
  ASSERT_EQ(dent_report_json(r, &json), DENT_OK);
  EXPECT_NE(std::string(json).find("dentropy.report.v1"), std::string::npos);
  dent_string_free(json);
  dent_report_free(r);
  EXPECT_EQ(dent_experiment_run("distribution = normal1d\nwhatever = 1\n", &r), DENT_ERR_PARSE);
  EXPECT_NE(std::string(dent_last_error()).find("line 2"), std::string::npos);
}
