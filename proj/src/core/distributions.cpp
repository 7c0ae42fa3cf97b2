#include "core/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "core/error.hpp"
#include "core/numerics.hpp"
#include "core/rng.hpp"
#include "core/sample.hpp"

namespace dentropy {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPowerLawEdge = 0.75;
constexpr double kPowerLawCurvature = 16.0 / 9.0;

const double kInvSqrt2Pi = 1.0 / std::sqrt(2.0 * std::numbers::pi);

double normal_pdf(double v) { return kInvSqrt2Pi * std::exp(-0.5 * v * v); }

double power_law_pdf(double v) {
  if (!(v > -kPowerLawEdge && v < kPowerLawEdge)) return 0.0;
  return 1.0 - kPowerLawCurvature * v * v;
}

double radial_normal_pdf(double r) {
  if (!(r > 0.0)) return 0.0;
  return std::sqrt(2.0 / std::numbers::pi) * r * r * std::exp(-0.5 * r * r);
}

// The power law is the Epanechnikov kernel stretched by 3/4, whose entropy
// is 5/3 - ln 3.
double power_law_entropy() { return 5.0 / 3.0 - std::log(4.0); }

double radial_normal_entropy() {
  static const double value = [] {
    return -integrate(
        [](double r) {
          const double f = radial_normal_pdf(r);
          return f > 0.0 ? f * std::log(f) : 0.0;
        },
        0.0, kInf, 1e-14);
  }();
  return value;
}

}  // namespace

std::string_view to_string(DistributionId id) {
  switch (id) {
    case DistributionId::Normal1D:
      return "normal1d";
    case DistributionId::PowerLaw1D:
      return "powerlaw1d";
    case DistributionId::Normal3D:
      return "normal3d";
  }
  return "unknown";
}

const std::vector<DistributionId>& all_distributions() {
  static const std::vector<DistributionId> ids{DistributionId::Normal1D, DistributionId::PowerLaw1D,
                                               DistributionId::Normal3D};
  return ids;
}

DistributionId parse_distribution(std::string_view name) {
  for (DistributionId id : all_distributions())
    if (to_string(id) == name) return id;
  throw InvalidArgument("unknown distribution '" + std::string(name) +
                        "' (valid: normal1d, powerlaw1d, normal3d)");
}

std::vector<Interval> AnalyticDistribution::support() const {
  switch (id_) {
    case DistributionId::Normal1D:
      return {{-kInf, kInf}};
    case DistributionId::PowerLaw1D:
      return {{-kPowerLawEdge, kPowerLawEdge}};
    case DistributionId::Normal3D:
      return {{-kInf, kInf}, {-kInf, kInf}, {-kInf, kInf}};
  }
  return {};
}

Interval AnalyticDistribution::reduced_support() const {
  switch (id_) {
    case DistributionId::Normal1D:
      return {-kInf, kInf};
    case DistributionId::PowerLaw1D:
      return {-kPowerLawEdge, kPowerLawEdge};
    case DistributionId::Normal3D:
      return {0.0, kInf};
  }
  return {-kInf, kInf};
}

double AnalyticDistribution::pdf(std::span<const double> v) const {
  if (v.size() != static_cast<std::size_t>(dim()))
    throw InvalidArgument("pdf: point has " + std::to_string(v.size()) + " coordinates, expected " +
                          std::to_string(dim()));
  switch (id_) {
    case DistributionId::Normal1D:
      return normal_pdf(v[0]);
    case DistributionId::PowerLaw1D:
      return power_law_pdf(v[0]);
    case DistributionId::Normal3D: {
      const double r2 = v[0] * v[0] + v[1] * v[1] + v[2] * v[2];
      return std::pow(2.0 * std::numbers::pi, -1.5) * std::exp(-0.5 * r2);
    }
  }
  return 0.0;
}

double AnalyticDistribution::reduced_pdf(double v) const {
  switch (id_) {
    case DistributionId::Normal1D:
      return normal_pdf(v);
    case DistributionId::PowerLaw1D:
      return power_law_pdf(v);
    case DistributionId::Normal3D:
      return radial_normal_pdf(v);
  }
  return 0.0;
}

double AnalyticDistribution::cdf(double v) const {
  switch (id_) {
    case DistributionId::Normal1D:
      return 0.5 * std::erfc(-v / std::numbers::sqrt2);
    case DistributionId::PowerLaw1D: {
      if (v <= -kPowerLawEdge) return 0.0;
      if (v >= kPowerLawEdge) return 1.0;
      return (v + kPowerLawEdge) - (kPowerLawCurvature / 3.0) * (v * v * v + 27.0 / 64.0);
    }
    case DistributionId::Normal3D: {
      if (v <= 0.0) return 0.0;
      return std::erf(v / std::numbers::sqrt2) -
             std::sqrt(2.0 / std::numbers::pi) * v * std::exp(-0.5 * v * v);
    }
  }
  return 0.0;
}

double AnalyticDistribution::exact_entropy() const {
  const double normal = 0.5 * std::log(2.0 * std::numbers::pi * std::numbers::e);
  switch (id_) {
    case DistributionId::Normal1D:
      return normal;
    case DistributionId::PowerLaw1D:
      return power_law_entropy();
    case DistributionId::Normal3D:
      return 3.0 * normal;
  }
  return 0.0;
}

double AnalyticDistribution::published_entropy() const {
  switch (id_) {
    case DistributionId::Normal1D:
      return 1.419;
    case DistributionId::PowerLaw1D:
      return 0.2804;
    case DistributionId::Normal3D:
      return 4.257;
  }
  return 0.0;
}

double AnalyticDistribution::reduced_entropy() const {
  return id_ == DistributionId::Normal3D ? radial_normal_entropy() : exact_entropy();
}

Sample AnalyticDistribution::sample(std::size_t n, std::uint64_t seed) const {
  if (n == 0) throw InvalidArgument("sample size must be at least 1");
  Sample s;
  s.n = n;
  s.dim = dim();
  s.distribution = id_;
  s.seed = seed;
  s.data.resize(n * static_cast<std::size_t>(s.dim));
  Rng rng(seed);
  switch (id_) {
    case DistributionId::Normal1D:
    case DistributionId::Normal3D:
      for (double& x : s.data) x = rng.normal();
      break;
    case DistributionId::PowerLaw1D:
      // Uniform envelope of height 1 over the support; acceptance rate 2/3.
      for (double& x : s.data) {
        for (;;) {
          const double v = rng.uniform(-kPowerLawEdge, kPowerLawEdge);
          if (rng.uniform() < power_law_pdf(v)) {
            x = v;
            break;
          }
        }
      }
      break;
  }
  return s;
}

double AnalyticDistribution::roughness(int order) const {
  const Interval sup = reduced_support();
  auto f = [this](double v) { return reduced_pdf(v); };
  auto integrand = [&](double v) {
    // Keep the stencil inside the support so edge kinks never enter it.
    double step = 0.05;
    if (std::isfinite(sup.lo)) step = std::min(step, 0.5 * (v - sup.lo));
    if (std::isfinite(sup.hi)) step = std::min(step, 0.5 * (sup.hi - v));
    if (!(step > 0.0)) return 0.0;
    const double d = order == 1 ? derivative(f, v, step) : second_derivative(f, v, step);
    return d * d;
  };
  return integrate(integrand, sup.lo, sup.hi, 1e-11);
}

double AnalyticDistribution::roughness_fprime() const {
  static thread_local double cache[3] = {-1.0, -1.0, -1.0};
  double& slot = cache[static_cast<int>(id_)];
  if (slot < 0.0) slot = roughness(1);
  return slot;
}

double AnalyticDistribution::roughness_fsecond() const {
  static thread_local double cache[3] = {-1.0, -1.0, -1.0};
  double& slot = cache[static_cast<int>(id_)];
  if (slot < 0.0) slot = roughness(2);
  return slot;
}

// --- Sample helpers -------------------------------------------------------

double Extent::max_range() const {
  double r = 0.0;
  for (std::size_t j = 0; j < lo.size(); ++j) r = std::max(r, hi[j] - lo[j]);
  return r;
}

Extent extent(const Sample& sample) {
  if (sample.empty()) throw InvalidArgument("sample is empty");
  Extent e;
  e.lo.assign(sample.dim, kInf);
  e.hi.assign(sample.dim, -kInf);
  for (std::size_t i = 0; i < sample.n; ++i)
    for (int j = 0; j < sample.dim; ++j) {
      const double x = sample.at(i, j);
      e.lo[j] = std::min(e.lo[j], x);
      e.hi[j] = std::max(e.hi[j], x);
    }
  return e;
}

Sample radial_reduce(const Sample& sample) {
  Sample r;
  r.n = sample.n;
  r.dim = 1;
  r.distribution = sample.distribution;
  r.seed = sample.seed;
  r.data.resize(sample.n);
  for (std::size_t i = 0; i < sample.n; ++i) {
    double s = 0.0;
    for (double x : sample.row(i)) s += x * x;
    r.data[i] = std::sqrt(s);
  }
  return r;
}

double mean_log_shell_area(const Sample& radii, int dim) {
  if (radii.dim != 1) throw InvalidArgument("mean_log_shell_area expects radii (dim 1)");
  if (dim < 1) throw InvalidArgument("dimension must be positive");
  const double half = 0.5 * dim;
  const double log_area = std::log(2.0) + half * std::log(std::numbers::pi) - std::lgamma(half);
  CompensatedSum s;
  for (double r : radii.data) s += std::log(r);
  return log_area + (dim - 1) * s.value() / static_cast<double>(radii.n);
}

}  // namespace dentropy
