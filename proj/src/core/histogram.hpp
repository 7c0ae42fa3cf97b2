#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "core/sample.hpp"

namespace dentropy {

/// Uniform-cell histogram with the same bin width in every dimension.
/// Only occupied cells are stored, sorted lexicographically by index.
struct HistogramEstimate {
  double bin_width = 0.0;
  std::vector<double> origin;
  std::size_t n = 0;
  int dim = 1;
  std::vector<std::int64_t> cells;    // occupied cell indices, dim entries per cell
  std::vector<std::uint64_t> counts;  // one per occupied cell

  std::size_t occupied() const noexcept { return counts.size(); }
  std::span<const std::int64_t> cell(std::size_t c) const {
    return {cells.data() + c * static_cast<std::size_t>(dim), static_cast<std::size_t>(dim)};
  }
  /// Density of occupied cell c: n_c / (N dv^d).
  double density(std::size_t c) const;
};

/// Bins the sample on the lattice anchored at its componentwise minimum.
HistogramEstimate build_histogram(const Sample& sample, double bin_width);

/// -sum_c (n_c/N) ln(n_c/(N dv^d)); empty cells contribute nothing.
double histogram_entropy(const HistogramEstimate& h);

/// Merges factor^d neighbouring cells; origin kept, bin width multiplied.
HistogramEstimate coarsen(const HistogramEstimate& h, int factor);

/// Entropy of the histogram at bin_width without materialising the cells.
/// `sorted` must hold the one-dimensional sample in ascending order.
double histogram_entropy_sorted_1d(std::span<const double> sorted, double bin_width);

/// Same for any dimension; uses dense counting when the lattice is small
/// and sorted cell keys otherwise.
double histogram_entropy_fast(const Sample& sample, double bin_width);

}  // namespace dentropy
