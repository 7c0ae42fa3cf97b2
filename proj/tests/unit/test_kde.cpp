#include <gtest/gtest.h>

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <numbers>
#include <random>

#include "core/distributions.hpp"
#include "core/error.hpp"
#include "core/kde.hpp"
#include "core/numerics.hpp"
#include "core/sample.hpp"

using namespace dentropy;

namespace {

const KernelId kAllKernels[] = {KernelId::Epanechnikov, KernelId::Uniform, KernelId::Gaussian};

double integrate_kernel(const Kernel& k, auto g) {
  boost::math::quadrature::tanh_sinh<double> q;
  const double r = k.compact() ? 1.0 : 12.0;
  return q.integrate([&](double u) { return g(u); }, -r, r);
}

double entropy_at(const std::shared_ptr<const KdePoints>& pts, KernelId k, double h) {
  return kde_entropy(KdeEstimate(pts, Kernel{k}, h), EntropyMethod::Quadrature);
}

}  // namespace

TEST(Kernel, NamesRoundTrip) {
  for (KernelId k : kAllKernels) EXPECT_EQ(parse_kernel(to_string(k)), k);
  EXPECT_THROW(parse_kernel("triweight"), InvalidArgument);
}

TEST(Kernel, UnitMassAndTabulatedConstants) {
  for (KernelId id : kAllKernels) {
    Kernel k{id};
    EXPECT_NEAR(integrate_kernel(k, [&](double u) { return k(u); }), 1.0, 1e-12) << to_string(id);
    EXPECT_NEAR(integrate_kernel(k, [&](double u) { return k(u) * k(u); }), k.roughness(), 1e-12);
    EXPECT_NEAR(integrate_kernel(k, [&](double u) { return u * u * k(u); }), k.second_moment(), 1e-12);
    EXPECT_DOUBLE_EQ(k(0.3), k(-0.3));
  }
  EXPECT_DOUBLE_EQ(Kernel{KernelId::Epanechnikov}.roughness(), 0.6);
  EXPECT_DOUBLE_EQ(Kernel{KernelId::Epanechnikov}.second_moment(), 0.2);
  EXPECT_DOUBLE_EQ(Kernel{KernelId::Epanechnikov}(1.0), 0.0);
  EXPECT_DOUBLE_EQ(Kernel{KernelId::Epanechnikov}(0.0), 0.75);
}

TEST(Kernel, CdfMatchesIntegral) {
  for (KernelId id : {KernelId::Epanechnikov, KernelId::Uniform}) {
    Kernel k{id};
    EXPECT_DOUBLE_EQ(k.cdf(-1.0), 0.0);
    EXPECT_DOUBLE_EQ(k.cdf(1.0), 1.0);
    EXPECT_NEAR(k.cdf(0.4), 0.5 + integrate([&](double u) { return k(u); }, 0.0, 0.4), 1e-13);
  }
}

TEST(Kde, SinglePointEntropyIsKernelEntropy) {
  Sample s;
  s.n = 1;
  s.data = {0.3};
  for (double h : {0.01, 0.5, 3.0}) {
    EXPECT_NEAR(kde_entropy(KdeEstimate(s, Kernel{KernelId::Epanechnikov}, h), EntropyMethod::Quadrature),
                std::log(h) + 5.0 / 3.0 - std::log(3.0), 1e-12);
    EXPECT_NEAR(kde_entropy(KdeEstimate(s, Kernel{KernelId::Uniform}, h), EntropyMethod::Quadrature),
                std::log(2.0 * h), 1e-12);
    EXPECT_NEAR(kde_entropy(KdeEstimate(s, Kernel{KernelId::Gaussian}, h), EntropyMethod::Quadrature),
                std::log(h) + 0.5 * std::log(2.0 * std::numbers::pi * std::numbers::e), 1e-8);
  }
}

TEST(Kde, EntropyMatchesIndependentQuadrature) {
  Sample s = AnalyticDistribution(DistributionId::Normal1D).sample(200, 17);
  boost::math::quadrature::tanh_sinh<double> q;
  for (KernelId id : kAllKernels) {
    KdeEstimate e(s, Kernel{id}, 0.3);
    auto integrand = [&](double x) {
      const double f = e.density_bruteforce(std::span<const double>(&x, 1));
      return f > 0.0 ? -f * std::log(f) : 0.0;
    };
    // Break at every support edge for compact kernels so tanh-sinh sees smooth pieces.
    std::vector<double> cuts;
    for (double x : s.data) {
      cuts.push_back(x - 0.3);
      cuts.push_back(x + 0.3);
    }
    std::sort(cuts.begin(), cuts.end());
    double ref = 0.0;
    if (id == KernelId::Gaussian) {
      ref = q.integrate(integrand, cuts.front() - 10.0, cuts.back() + 10.0);
    } else {
      for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
        if (cuts[i + 1] > cuts[i]) ref += q.integrate(integrand, cuts[i], cuts[i + 1]);
    }
    EXPECT_NEAR(kde_entropy(e, EntropyMethod::Quadrature), ref, 1e-8) << to_string(id);
  }
}

TEST(Kde, MassIsOneAndStationary) {
  for (KernelId id : kAllKernels) {
    Sample s = AnalyticDistribution(DistributionId::PowerLaw1D).sample(3000, 2);
    for (double h : {0.005, 0.05, 0.4}) {
      KdeEstimate e(s, Kernel{id}, h);
      EXPECT_NEAR(kde_mass(e), 1.0, 1e-10) << to_string(id) << " h=" << h;
      EXPECT_NEAR(kde_mass_derivative(e), 0.0, 1e-8) << to_string(id) << " h=" << h;
    }
  }
}

TEST(Kde, AcceleratedSumEqualsBruteForce) {
  std::mt19937_64 rng(5);
  for (DistributionId dist : all_distributions()) {
    Sample s = AnalyticDistribution(dist).sample(4000, 31);
    for (KernelId id : kAllKernels) {
      for (double h : {0.02, 0.3}) {
        KdeEstimate e(s, Kernel{id}, h);
        std::normal_distribution<double> nd(0.0, 1.0);
        for (int t = 0; t < 50; ++t) {
          std::vector<double> x(static_cast<std::size_t>(s.dim));
          for (double& v : x) v = 0.6 * nd(rng);
          const double fast = e.density(x);
          const double slow = e.density_bruteforce(x);
          EXPECT_NEAR(fast, slow, 1e-12 * std::max(1.0, slow));
        }
      }
    }
  }
}

TEST(Kde, DensityIntegratesToOneIn3D) {
  Sample s = AnalyticDistribution(DistributionId::Normal3D).sample(300, 4);
  KdeEstimate e(s, Kernel{KernelId::Epanechnikov}, 0.5);
  // Midpoint rule on a box that covers every kernel support.
  Extent ext = extent(s);
  const double step = 0.05;
  double mass = 0.0;
  std::vector<double> x(3);
  for (double a = ext.lo[0] - 0.5; a < ext.hi[0] + 0.5; a += step)
    for (double b = ext.lo[1] - 0.5; b < ext.hi[1] + 0.5; b += step)
      for (double c = ext.lo[2] - 0.5; c < ext.hi[2] + 0.5; c += step) {
        x = {a + step / 2, b + step / 2, c + step / 2};
        mass += e.density(x);
      }
  EXPECT_NEAR(mass * step * step * step, 1.0, 2e-3);
}

TEST(Kde, ScalingCovariance) {
  Sample s = AnalyticDistribution(DistributionId::Normal1D).sample(2000, 8);
  Sample t = s;
  for (double& v : t.data) v *= 3.0;
  for (KernelId id : kAllKernels) {
    const double a = kde_entropy(KdeEstimate(s, Kernel{id}, 0.1), EntropyMethod::Quadrature);
    const double b = kde_entropy(KdeEstimate(t, Kernel{id}, 0.3), EntropyMethod::Quadrature);
    EXPECT_NEAR(b - a, std::log(3.0), 1e-9) << to_string(id);
  }
}

TEST(Kde, ResubstitutionTracksQuadrature) {
  Sample s = AnalyticDistribution(DistributionId::Normal1D).sample(20000, 9);
  KdeEstimate e(s, Kernel{KernelId::Epanechnikov}, 0.2);
  const double quad = kde_entropy(e, EntropyMethod::Quadrature);
  const double resub = kde_entropy(e, EntropyMethod::Resubstitution);
  KdeOptions loo;
  loo.leave_one_out = true;
  const double resub_loo = kde_entropy(e, EntropyMethod::Resubstitution, loo);
  EXPECT_NEAR(resub, quad, 0.02);
  EXPECT_NEAR(resub_loo, 1.4189385332046727, 0.03);
  EXPECT_GT(resub_loo, resub);
}

TEST(Kde, EntropyDerivativeMatchesFiniteDifferences) {
  Sample s = AnalyticDistribution(DistributionId::Normal1D).sample(5000, 3);
  auto pts = KdePoints::from(s);
  for (KernelId id : {KernelId::Epanechnikov, KernelId::Gaussian}) {
    for (double h : {0.01, 0.05, 0.2, 0.8}) {
      const double d = 1e-4 * h;
      const double fd = (entropy_at(pts, id, h + d) - entropy_at(pts, id, h - d)) / (2 * d);
      const double an = kde_entropy_derivative(KdeEstimate(pts, Kernel{id}, h));
      EXPECT_NEAR(an, fd, 1e-3 * std::abs(fd)) << to_string(id) << " h=" << h;
    }
  }
}

TEST(Kde, UniformDerivativeIncludesJumpTerms) {
  // Away from h where two support edges coincide, S(h) is smooth.
  Sample s;
  s.n = 3;
  s.data = {0.0, 1.0, 3.0};
  auto pts = KdePoints::from(s);
  const double h = 0.7;
  const double d = 1e-6;
  const double fd = (entropy_at(pts, KernelId::Uniform, h + d) - entropy_at(pts, KernelId::Uniform, h - d)) / (2 * d);
  EXPECT_NEAR(kde_entropy_derivative(KdeEstimate(pts, Kernel{KernelId::Uniform}, h)), fd, 1e-6);
}

TEST(Kde, SecondDerivativeResidualMatchesFiniteDifferences) {
  Sample s = AnalyticDistribution(DistributionId::Normal1D).sample(5000, 3);
  auto pts = KdePoints::from(s);
  for (KernelId id : {KernelId::Epanechnikov, KernelId::Gaussian}) {
    for (double h : {0.05, 0.2, 0.8}) {
      const double d = 1e-2 * h;
      const double fd2 = (entropy_at(pts, id, h + d) - 2 * entropy_at(pts, id, h) + entropy_at(pts, id, h - d)) / (d * d);
      const double r = kde_second_derivative_residual(KdeEstimate(pts, Kernel{id}, h));
      EXPECT_NEAR(-r, fd2, 5e-3 * std::abs(fd2)) << to_string(id) << " h=" << h;
    }
  }
}

TEST(Kde, GaussianSecondDerivativeFormsAgree) {
  Sample s = AnalyticDistribution(DistributionId::Normal1D).sample(2000, 6);
  KdeEstimate e(s, Kernel{KernelId::Gaussian}, 0.2);
  SecondDerivativeForms f = kde_second_derivative_forms(e);
  EXPECT_NEAR(f.product_form, f.log_form, 1e-6 * std::abs(f.log_form));
}

TEST(Kde, OneDimensionalOnlyOperationsRejectHigherDimensions) {
  Sample s = AnalyticDistribution(DistributionId::Normal3D).sample(100, 6);
  KdeEstimate e(s, Kernel{KernelId::Epanechnikov}, 0.5);
  EXPECT_THROW(kde_entropy_derivative(e), InvalidArgument);
  EXPECT_THROW(kde_second_derivative_residual(e), InvalidArgument);
}

TEST(Kde, NodeBudgetIsEnforced) {
  Sample s = AnalyticDistribution(DistributionId::Normal3D).sample(1000, 6);
  KdeEstimate e(s, Kernel{KernelId::Epanechnikov}, 0.01);
  KdeOptions tight;
  tight.node_budget = 1000;
  EXPECT_THROW(kde_entropy(e, EntropyMethod::Quadrature, tight), ResourceBudgetError);
  EXPECT_NO_THROW(kde_entropy(e, EntropyMethod::Resubstitution, tight));
}

TEST(Kde, RejectsBadBandwidth) {
  Sample s = AnalyticDistribution(DistributionId::Normal1D).sample(10, 6);
  EXPECT_THROW(KdeEstimate(s, Kernel{}, 0.0), InvalidArgument);
  EXPECT_THROW(KdeEstimate(s, Kernel{}, -1.0), InvalidArgument);
  EXPECT_THROW(KdeEstimate(s, Kernel{}, std::nan("")), InvalidArgument);
}
