#include "core/histogram.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "core/error.hpp"
#include "core/numerics.hpp"

namespace dentropy {

namespace {

void check_bin_width(double bin_width) {
  if (!(bin_width > 0.0) || !std::isfinite(bin_width))
    throw InvalidArgument("bin width must be positive and finite");
}

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

std::int64_t cell_index(double x, double origin, double bin_width) {
  return static_cast<std::int64_t>(std::floor((x - origin) / bin_width));
}

// ln(N dv^d) - (1/N) sum n ln n, given the occupied counts.
template <typename Counts>
double entropy_from_counts(const Counts& counts, std::size_t n, int dim, double bin_width) {
  CompensatedSum s;
  for (auto c : counts) {
    if (c > 1) {
      const double cd = static_cast<double>(c);
      s += cd * std::log(cd);
    }
  }
  const double nd = static_cast<double>(n);
  return std::log(nd) + dim * std::log(bin_width) - s.value() / nd;
}

// Sorts dim-tuples (row-major in `idx`) and run-length encodes them.
void tally(std::vector<std::int64_t>& idx, int dim, std::vector<std::int64_t>& cells,
           std::vector<std::uint64_t>& counts, const std::vector<std::uint64_t>* weights) {
  const std::size_t d = static_cast<std::size_t>(dim);
  const std::size_t m = idx.size() / d;
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), std::size_t{0});
  auto less = [&](std::size_t a, std::size_t b) {
    return std::lexicographical_compare(idx.begin() + a * d, idx.begin() + (a + 1) * d,
                                        idx.begin() + b * d, idx.begin() + (b + 1) * d);
  };
  if (d == 1)
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return idx[a] < idx[b]; });
  else
    std::sort(order.begin(), order.end(), less);
  cells.clear();
  counts.clear();
  for (std::size_t k = 0; k < m; ++k) {
    const std::size_t i = order[k];
    const std::uint64_t w = weights ? (*weights)[i] : 1;
    if (!counts.empty() &&
        std::equal(idx.begin() + i * d, idx.begin() + (i + 1) * d, cells.end() - dim)) {
      counts.back() += w;
    } else {
      cells.insert(cells.end(), idx.begin() + i * d, idx.begin() + (i + 1) * d);
      counts.push_back(w);
    }
  }
}

}  // namespace

double HistogramEstimate::density(std::size_t c) const {
  return static_cast<double>(counts[c]) /
         (static_cast<double>(n) * std::pow(bin_width, static_cast<double>(dim)));
}

HistogramEstimate build_histogram(const Sample& sample, double bin_width) {
  check_bin_width(bin_width);
  if (sample.empty()) throw InvalidArgument("cannot build a histogram of an empty sample");
  const Extent ext = extent(sample);
  HistogramEstimate h;
  h.bin_width = bin_width;
  h.origin = ext.lo;
  h.n = sample.n;
  h.dim = sample.dim;
  std::vector<std::int64_t> idx(sample.data.size());
  for (std::size_t i = 0; i < sample.n; ++i)
    for (int j = 0; j < sample.dim; ++j)
      idx[i * sample.dim + j] = cell_index(sample.at(i, j), h.origin[j], bin_width);
  tally(idx, h.dim, h.cells, h.counts, nullptr);
  return h;
}

double histogram_entropy(const HistogramEstimate& h) {
  if (h.n == 0) throw InvalidArgument("histogram is empty");
  return entropy_from_counts(h.counts, h.n, h.dim, h.bin_width);
}

HistogramEstimate coarsen(const HistogramEstimate& h, int factor) {
  if (factor < 2) throw InvalidArgument("coarsening factor must be an integer >= 2");
  std::vector<std::int64_t> idx(h.cells.size());
  for (std::size_t k = 0; k < idx.size(); ++k) idx[k] = floor_div(h.cells[k], factor);
  HistogramEstimate out;
  out.bin_width = h.bin_width * factor;
  out.origin = h.origin;
  out.n = h.n;
  out.dim = h.dim;
  tally(idx, h.dim, out.cells, out.counts, &h.counts);
  return out;
}

double histogram_entropy_sorted_1d(std::span<const double> sorted, double bin_width) {
  check_bin_width(bin_width);
  if (sorted.empty()) throw InvalidArgument("cannot build a histogram of an empty sample");
  const double origin = sorted.front();
  CompensatedSum s;
  std::int64_t current = cell_index(sorted.front(), origin, bin_width);
  std::uint64_t run = 0;
  auto flush = [&] {
    if (run > 1) {
      const double r = static_cast<double>(run);
      s += r * std::log(r);
    }
  };
  for (double x : sorted) {
    const std::int64_t c = cell_index(x, origin, bin_width);
    if (c != current) {
      flush();
      current = c;
      run = 0;
    }
    ++run;
  }
  flush();
  const double nd = static_cast<double>(sorted.size());
  return std::log(nd) + std::log(bin_width) - s.value() / nd;
}

double histogram_entropy_fast(const Sample& sample, double bin_width) {
  check_bin_width(bin_width);
  if (sample.empty()) throw InvalidArgument("cannot build a histogram of an empty sample");
  if (sample.dim == 1) {
    std::vector<double> sorted = sample.data;
    std::sort(sorted.begin(), sorted.end());
    return histogram_entropy_sorted_1d(sorted, bin_width);
  }
  const Extent ext = extent(sample);
  const std::size_t d = static_cast<std::size_t>(sample.dim);
  std::vector<std::uint64_t> extent_cells(d);
  long double total = 1.0L;
  for (std::size_t j = 0; j < d; ++j) {
    extent_cells[j] =
        static_cast<std::uint64_t>(cell_index(ext.hi[j], ext.lo[j], bin_width)) + 1;
    total *= static_cast<long double>(extent_cells[j]);
  }
  if (total > 1.0e18L) return histogram_entropy(build_histogram(sample, bin_width));

  auto key_of = [&](std::size_t i) {
    std::uint64_t key = 0;
    for (std::size_t j = 0; j < d; ++j)
      key = key * extent_cells[j] +
            static_cast<std::uint64_t>(cell_index(sample.at(i, static_cast<int>(j)), ext.lo[j],
                                                  bin_width));
    return key;
  };

  if (total <= 8.0L * static_cast<long double>(sample.n)) {
    std::vector<std::uint32_t> dense(static_cast<std::size_t>(total), 0);
    for (std::size_t i = 0; i < sample.n; ++i) ++dense[key_of(i)];
    return entropy_from_counts(dense, sample.n, sample.dim, bin_width);
  }

  std::vector<std::uint64_t> keys(sample.n);
  for (std::size_t i = 0; i < sample.n; ++i) keys[i] = key_of(i);
  std::sort(keys.begin(), keys.end());
  std::vector<std::uint64_t> counts;
  for (std::size_t i = 0; i < keys.size();) {
    std::size_t j = i;
    while (j < keys.size() && keys[j] == keys[i]) ++j;
    counts.push_back(j - i);
    i = j;
  }
  return entropy_from_counts(counts, sample.n, sample.dim, bin_width);
}

}  // namespace dentropy
