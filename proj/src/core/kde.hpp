#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <span>
#include <string_view>
#include <vector>

#include "core/sample.hpp"

namespace dentropy {

enum class KernelId { Epanechnikov, Uniform, Gaussian };

/// "epanechnikov", "uniform", "gaussian".
std::string_view to_string(KernelId id);
KernelId parse_kernel(std::string_view name);

struct Kernel {
  KernelId id = KernelId::Epanechnikov;

  /// 1 for the compact kernels, infinity for the Gaussian.
  double support_radius() const;
  /// Half-width (in units of h) of the region the kernel is integrated over:
  /// the support for compact kernels, 8 for the Gaussian.
  double integration_radius() const;
  bool compact() const { return id != KernelId::Gaussian; }

  double operator()(double u) const;
  /// K'(u) and K''(u), taken almost everywhere (zero outside the support).
  double derivative(double u) const;
  double second_derivative(double u) const;
  /// int_{-inf}^{u} K.
  double cdf(double u) const;

  /// R(K) = int K^2 and int u^2 K, by quadrature.
  double roughness() const;
  double second_moment() const;
};

enum class EntropyMethod { Quadrature, Resubstitution };

std::string_view to_string(EntropyMethod m);
EntropyMethod parse_entropy_method(std::string_view name);

struct KdeOptions {
  /// Largest number of quadrature nodes a single evaluation may use.
  std::uint64_t node_budget = std::uint64_t{1} << 24;
  /// Resubstitution without the self term. May return +inf when a point has
  /// no neighbour inside the kernel support.
  bool leave_one_out = false;
};

/// Points prepared for repeated kernel sums: sorted ascending in 1D,
/// row-major copy otherwise. Shared between estimates at different h.
struct KdePoints {
  std::vector<double> data;
  std::size_t n = 0;
  int dim = 1;

  static std::shared_ptr<const KdePoints> from(const Sample& sample);
};

/// F(x) = 1/(N h^d) sum_i prod_j K((x_j - x_ij)/h).
class KdeEstimate {
 public:
  KdeEstimate(const Sample& sample, Kernel kernel, double bandwidth);
  KdeEstimate(std::shared_ptr<const KdePoints> points, Kernel kernel, double bandwidth);

  const Kernel& kernel() const noexcept { return kernel_; }
  double bandwidth() const noexcept { return h_; }
  int dim() const noexcept { return points_->dim; }
  std::size_t size() const noexcept { return points_->n; }
  const KdePoints& points() const noexcept { return *points_; }

  /// Neighbour-searched kernel sum; cost scales with the points near x.
  double density(std::span<const double> x) const;
  /// Plain O(N) sum over every point.
  double density_bruteforce(std::span<const double> x) const;

  /// Calls visit(i) for every point index whose kernel can be nonzero at x
  /// (every point within integration_radius()*h in each coordinate).
  template <typename Visit>
  void for_each_neighbor(std::span<const double> x, Visit&& visit) const;

 private:
  void build_cells();

  Kernel kernel_;
  double h_;
  std::shared_ptr<const KdePoints> points_;
  // Cell list for d > 1: cells of side >= integration_radius()*h, keyed by
  // their mixed-radix index; only occupied cells are stored.
  double cell_side_ = 0.0;
  std::vector<double> lo_;
  std::vector<std::int64_t> shape_;
  std::vector<std::uint64_t> cell_keys_;
  std::vector<std::uint64_t> cell_start_;
  std::vector<std::uint32_t> cell_points_;
};

/// Entropy -int F ln F of the estimate.
///
/// Quadrature in 1D integrates piece by piece between kernel-support
/// breakpoints for compact kernels (where F is a polynomial) and with the
/// trapezoid rule (step <= h/10, at least 4096 nodes, half-step offset) for
/// the Gaussian. For d > 1 the density is averaged over the cells of a grid
/// with step <= h/3 and the cell averages are integrated; the node count is
/// checked against options.node_budget first.
/// Resubstitution returns -(1/N) sum_i ln F(x_i).
double kde_entropy(const KdeEstimate& est, EntropyMethod method, const KdeOptions& options = {});

/// dS/dh for d = 1. Compact kernels are differentiated exactly, including
/// the terms produced by the moving support breakpoints (they cancel for the
/// Epanechnikov kernel but not for the uniform one); the Gaussian uses
/// -int (dF/dh) ln F on the trapezoid grid.
double kde_entropy_derivative(const KdeEstimate& est, const KdeOptions& options = {});

/// int F dv and d/dh int F dv (the latter zero up to rounding), d = 1.
double kde_mass(const KdeEstimate& est, const KdeOptions& options = {});
double kde_mass_derivative(const KdeEstimate& est, const KdeOptions& options = {});

/// Residual int (d2F/dh2) ln F - int F (d2 ln F/dh2), which equals -d2S/dh2.
/// For the Gaussian it is evaluated in that form. For compact kernels the
/// integrals alone miss the contributions of the breakpoints, where dF/dh
/// jumps and F may vanish, so -d2S/dh2 is computed exactly with them.
double kde_second_derivative_residual(const KdeEstimate& est, const KdeOptions& options = {});

/// The two integrand forms of -d2S/dh2 evaluated separately on the same grid:
///   product_form = int [F_hh ln F + F_h^2 / F]
///   log_form     = int [F_hh ln F - F (ln F)_hh + F_hh]
/// Gaussian kernel, d = 1 only.
struct SecondDerivativeForms {
  double product_form;
  double log_form;
};
SecondDerivativeForms kde_second_derivative_forms(const KdeEstimate& est,
                                                  const KdeOptions& options = {});

// --- implementation details shared with kde_piecewise.cpp -----------------

struct KdeIntegrals {
  double mass = 0.0;
  double entropy = 0.0;
  double d_entropy = 0.0;
  double d2_entropy = 0.0;
  double mass_h = 0.0;
};

enum KdeIntegralFlags : unsigned {
  kWantEntropy = 1u,
  kWantDerivative = 2u,
  kWantSecondDerivative = 4u,
  kWantMassDerivative = 8u,
};

/// Exact piecewise integrals for a compact kernel over sorted 1D points.
KdeIntegrals compact_kde_integrals(std::span<const double> sorted, KernelId kernel, double h,
                                   unsigned flags);

// --- template implementation ----------------------------------------------

template <typename Visit>
void KdeEstimate::for_each_neighbor(std::span<const double> x, Visit&& visit) const {
  const KdePoints& p = *points_;
  const double reach = kernel_.integration_radius() * h_;
  if (p.dim == 1) {
    auto first = std::lower_bound(p.data.begin(), p.data.end(), x[0] - reach);
    auto last = std::upper_bound(first, p.data.end(), x[0] + reach);
    for (auto it = first; it != last; ++it) visit(static_cast<std::size_t>(it - p.data.begin()));
    return;
  }
  const std::size_t d = static_cast<std::size_t>(p.dim);
  std::vector<std::int64_t> lo(d), hi(d), c(d);
  for (std::size_t j = 0; j < d; ++j) {
    const double pos = std::clamp((x[j] - lo_[j]) / cell_side_, -2.0,
                                  static_cast<double>(shape_[j]) + 1.0);
    lo[j] = std::max<std::int64_t>(0, static_cast<std::int64_t>(std::floor(pos)) - 1);
    hi[j] = std::min<std::int64_t>(shape_[j] - 1, static_cast<std::int64_t>(std::floor(pos)) + 1);
    if (lo[j] > hi[j]) return;
    c[j] = lo[j];
  }
  for (;;) {
    std::uint64_t key = 0;
    for (std::size_t j = 0; j < d; ++j)
      key = key * static_cast<std::uint64_t>(shape_[j]) + static_cast<std::uint64_t>(c[j]);
    const auto it = std::lower_bound(cell_keys_.begin(), cell_keys_.end(), key);
    if (it != cell_keys_.end() && *it == key) {
      const std::size_t cell = static_cast<std::size_t>(it - cell_keys_.begin());
      for (std::uint64_t k = cell_start_[cell]; k < cell_start_[cell + 1]; ++k)
        visit(static_cast<std::size_t>(cell_points_[k]));
    }
    std::size_t j = d;
    while (j > 0) {
      --j;
      if (++c[j] <= hi[j]) break;
      c[j] = lo[j];
      if (j == 0) return;
    }
  }
}

}  // namespace dentropy
