#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "core/distributions.hpp"

namespace dentropy {

/// N x d block of draws, row-major, plus where the draws came from.
struct Sample {
  std::vector<double> data;
  std::size_t n = 0;
  int dim = 1;
  std::optional<DistributionId> distribution;
  std::uint64_t seed = 0;

  std::span<const double> row(std::size_t i) const {
    return {data.data() + i * static_cast<std::size_t>(dim), static_cast<std::size_t>(dim)};
  }
  double at(std::size_t i, int j) const { return data[i * static_cast<std::size_t>(dim) + j]; }
  bool empty() const noexcept { return n == 0; }
};

/// Componentwise minimum and maximum of the sample.
struct Extent {
  std::vector<double> lo;
  std::vector<double> hi;
  /// Largest per-dimension range.
  double max_range() const;
};

Extent extent(const Sample& sample);

/// Radial reduction |x| of each row; the result is one-dimensional.
Sample radial_reduce(const Sample& sample);

/// (1/N) * sum ln(A_d r_i^(d-1)), with A_d the unit-sphere surface area in d
/// dimensions. Adding it to the entropy of a radial density estimate gives the
/// entropy of the matching isotropic density in d dimensions.
double mean_log_shell_area(const Sample& radii, int dim);

}  // namespace dentropy
