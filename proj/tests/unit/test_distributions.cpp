#include <gtest/gtest.h>

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <numbers>

#include "core/distributions.hpp"
#include "core/error.hpp"
#include "core/numerics.hpp"
#include "core/rng.hpp"
#include "core/sample.hpp"

using namespace dentropy;

namespace {

// Reference values frozen from closed forms evaluated independently
// (mpmath, 30 digits, rounded to double).
constexpr double kNormal1dEntropy = 1.4189385332046727;   // (1 + ln 2pi) / 2
constexpr double kNormal3dEntropy = 4.256815599614018;    // 3 (1 + ln 2pi) / 2
constexpr double kPowerLawEntropy = 0.28037230554677605;  // 5/3 - ln 4
constexpr double kRadialEntropy = 0.9961541981062056;     // entropy of |v| for the 3D normal
constexpr double kPowerLawVariance = 0.1125;

double tanh_sinh(auto f, double a, double b) {
  boost::math::quadrature::tanh_sinh<double> q;
  return q.integrate(f, a, b);
}

}  // namespace

TEST(Distributions, NamesRoundTrip) {
  for (DistributionId id : all_distributions()) EXPECT_EQ(parse_distribution(to_string(id)), id);
  EXPECT_THROW(parse_distribution("cauchy"), InvalidArgument);
}

TEST(Distributions, ExactEntropiesMatchClosedForms) {
  EXPECT_NEAR(AnalyticDistribution(DistributionId::Normal1D).exact_entropy(), kNormal1dEntropy, 1e-14);
  EXPECT_NEAR(AnalyticDistribution(DistributionId::Normal3D).exact_entropy(), kNormal3dEntropy, 1e-13);
  EXPECT_NEAR(AnalyticDistribution(DistributionId::PowerLaw1D).exact_entropy(), kPowerLawEntropy, 1e-14);
  EXPECT_NEAR(AnalyticDistribution(DistributionId::Normal3D).reduced_entropy(), kRadialEntropy, 1e-12);
}

TEST(Distributions, PublishedEntropiesAgreeToFourDigits) {
  for (DistributionId id : all_distributions()) {
    AnalyticDistribution d(id);
    EXPECT_NEAR(d.published_entropy(), d.exact_entropy(), 6e-4) << to_string(id);
  }
}

TEST(Distributions, EntropyMatchesQuadratureOfDensity) {
  AnalyticDistribution normal(DistributionId::Normal1D);
  AnalyticDistribution power(DistributionId::PowerLaw1D);
  auto minus_f_ln_f = [](const AnalyticDistribution& d) {
    return [&d](double v) {
      const double f = d.pdf(std::span<const double>(&v, 1));
      return f > 0.0 ? -f * std::log(f) : 0.0;
    };
  };
  EXPECT_NEAR(tanh_sinh(minus_f_ln_f(normal), -40.0, 40.0), kNormal1dEntropy, 1e-10);
  EXPECT_NEAR(tanh_sinh(minus_f_ln_f(power), -0.75, 0.75), kPowerLawEntropy, 1e-10);
}

TEST(Distributions, DensitiesIntegrateToOne) {
  AnalyticDistribution power(DistributionId::PowerLaw1D);
  AnalyticDistribution radial(DistributionId::Normal3D);
  EXPECT_NEAR(tanh_sinh([&](double v) { return power.pdf(std::span<const double>(&v, 1)); }, -0.75, 0.75),
              1.0, 1e-12);
  EXPECT_NEAR(tanh_sinh([&](double r) { return radial.reduced_pdf(r); }, 0.0, 40.0), 1.0, 1e-12);
}

TEST(Distributions, PowerLawVanishesOutsideSupport) {
  AnalyticDistribution power(DistributionId::PowerLaw1D);
  for (double v : {-0.75, 0.75, -1.0, 2.0}) EXPECT_EQ(power.pdf(std::span<const double>(&v, 1)), 0.0);
  const double zero = 0.0;
  EXPECT_DOUBLE_EQ(power.pdf(std::span<const double>(&zero, 1)), 1.0);
}

TEST(Distributions, RoughnessOracles) {
  AnalyticDistribution normal(DistributionId::Normal1D);
  AnalyticDistribution power(DistributionId::PowerLaw1D);
  AnalyticDistribution radial(DistributionId::Normal3D);
  EXPECT_NEAR(normal.roughness_fprime(), 0.14104739588693907, 1e-14);  // 1 / (4 sqrt pi)
  EXPECT_NEAR(normal.roughness_fsecond(), 0.2115710938304086, 1e-12);   // 3 / (8 sqrt pi)
  EXPECT_NEAR(power.roughness_fprime(), 3.5555555555555556, 1e-13);    // 32/9
  EXPECT_NEAR(power.roughness_fsecond(), 18.962962962962963, 1e-10);    // 512/27, interior only
  EXPECT_NEAR(radial.roughness_fprime(), 0.49366588560428675, 1e-10);
  EXPECT_NEAR(radial.roughness_fsecond(), 2.0099253913888818, 1e-9);
}

TEST(Distributions, SampleMomentsMatchLaw) {
  constexpr std::size_t n = 200000;
  {
    Sample s = AnalyticDistribution(DistributionId::Normal1D).sample(n, 11);
    EXPECT_NEAR(mean(s.data), 0.0, 5.0 / std::sqrt(double(n)));
    EXPECT_NEAR(standard_deviation(s.data), 1.0, 0.01);
  }
  {
    Sample s = AnalyticDistribution(DistributionId::PowerLaw1D).sample(n, 12);
    double sq = 0.0, lo = 1.0, hi = -1.0;
    for (double v : s.data) {
      sq += v * v;
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    EXPECT_NEAR(sq / n, kPowerLawVariance, 2e-3);
    EXPECT_GT(lo, -0.75);
    EXPECT_LT(hi, 0.75);
  }
  {
    Sample s = AnalyticDistribution(DistributionId::Normal3D).sample(n, 13);
    ASSERT_EQ(s.dim, 3);
    ASSERT_EQ(s.data.size(), 3 * n);
    Sample r = radial_reduce(s);
    // E[ln 4 pi r^2] for the 3D standard normal.
    EXPECT_NEAR(mean_log_shell_area(r, 3), 3.2606614015078126, 0.01);
  }
}

TEST(Distributions, SamplerIsDeterministicPerSeed) {
  AnalyticDistribution d(DistributionId::PowerLaw1D);
  EXPECT_EQ(d.sample(1000, 5).data, d.sample(1000, 5).data);
  EXPECT_NE(d.sample(1000, 5).data, d.sample(1000, 6).data);
  Sample s = d.sample(10, 5);
  EXPECT_EQ(s.seed, 5u);
  EXPECT_EQ(s.distribution, DistributionId::PowerLaw1D);
}

TEST(Distributions, CdfIsMonotoneAndNormalised) {
  AnalyticDistribution power(DistributionId::PowerLaw1D);
  EXPECT_DOUBLE_EQ(power.cdf(-0.75), 0.0);
  EXPECT_DOUBLE_EQ(power.cdf(0.75), 1.0);
  EXPECT_NEAR(power.cdf(0.0), 0.5, 1e-15);
  double prev = 0.0;
  for (double v = -0.75; v <= 0.75; v += 0.01) {
    const double c = power.cdf(v);
    EXPECT_GE(c, prev);
    prev = c;
  }
}
