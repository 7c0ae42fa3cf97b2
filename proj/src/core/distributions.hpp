#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace dentropy {

struct Sample;

enum class DistributionId { Normal1D, PowerLaw1D, Normal3D };

/// "normal1d", "powerlaw1d", "normal3d".
std::string_view to_string(DistributionId id);

/// Inverse of to_string; unknown names raise InvalidArgument listing the valid ids.
DistributionId parse_distribution(std::string_view name);

const std::vector<DistributionId>& all_distributions();

struct Interval {
  double lo;
  double hi;
  bool contains(double v) const { return v > lo && v < hi; }
};

/// Known density with closed-form or quadrature entropy and an exact sampler.
///
///   normal1d    F(v) = exp(-v^2/2)/sqrt(2 pi)
///   powerlaw1d  F(v) = 1 - 16 v^2/9 on (-3/4, 3/4)
///   normal3d    F(v) = exp(-|v|^2/2)/(2 pi)^(3/2)
///
/// The three-dimensional normal also has a reduced one-dimensional form in
/// r = |v|, F(r) = sqrt(2/pi) r^2 exp(-r^2/2) on (0, inf), which is what the
/// one-dimensional operations (reduced_pdf, cdf, roughness) act on.
class AnalyticDistribution {
 public:
  explicit AnalyticDistribution(DistributionId id) : id_(id) {}

  DistributionId id() const noexcept { return id_; }
  int dim() const noexcept { return id_ == DistributionId::Normal3D ? 3 : 1; }

  /// Per-dimension support (open intervals, possibly unbounded).
  std::vector<Interval> support() const;

  /// Density at v (length dim()); zero outside the support.
  double pdf(std::span<const double> v) const;

  /// One-dimensional density: pdf for the 1D laws, the radial form for normal3d.
  double reduced_pdf(double v) const;
  Interval reduced_support() const;

  /// CDF of the one-dimensional (or reduced radial) law.
  double cdf(double v) const;

  /// -int F ln F in nats, to double precision.
  double exact_entropy() const;

  /// The four-digit reference values the experiments are compared against.
  double published_entropy() const;

  /// Entropy of the reduced radial law (equals exact_entropy for 1D laws).
  double reduced_entropy() const;

  /// n i.i.d. draws; identical (n, seed) give bit-identical data.
  Sample sample(std::size_t n, std::uint64_t seed) const;

  /// R(f') and R(f'') of the one-dimensional (or reduced radial) density,
  /// from Richardson-extrapolated differences of reduced_pdf and adaptive
  /// quadrature over the interior of the support. Derivatives are taken
  /// almost everywhere, so kinks at the support edges add no point masses.
  double roughness_fprime() const;
  double roughness_fsecond() const;

 private:
  double roughness(int order) const;

  DistributionId id_;
};

}  // namespace dentropy
