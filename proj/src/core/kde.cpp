#include "core/kde.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>

#include "core/error.hpp"
#include "core/numerics.hpp"

namespace dentropy {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kGaussianReach = 8.0;
const double kInvSqrt2Pi = 1.0 / std::sqrt(2.0 * std::numbers::pi);

void check_bandwidth(double h) {
  if (!(h > 0.0) || !std::isfinite(h))
    throw InvalidArgument("bandwidth must be positive and finite");
}

void require_1d(const KdeEstimate& est, const char* what) {
  if (est.dim() != 1)
    throw InvalidArgument(std::string(what) + " is only available for one-dimensional samples");
}

}  // namespace

// --- Kernel -----------------------------------------------------------------

std::string_view to_string(KernelId id) {
  switch (id) {
    case KernelId::Epanechnikov:
      return "epanechnikov";
    case KernelId::Uniform:
      return "uniform";
    case KernelId::Gaussian:
      return "gaussian";
  }
  return "unknown";
}

KernelId parse_kernel(std::string_view name) {
  for (KernelId id : {KernelId::Epanechnikov, KernelId::Uniform, KernelId::Gaussian})
    if (to_string(id) == name) return id;
  throw InvalidArgument("unknown kernel '" + std::string(name) +
                        "' (valid: epanechnikov, uniform, gaussian)");
}

std::string_view to_string(EntropyMethod m) {
  return m == EntropyMethod::Quadrature ? "quadrature" : "resubstitution";
}

EntropyMethod parse_entropy_method(std::string_view name) {
  if (name == "quadrature") return EntropyMethod::Quadrature;
  if (name == "resubstitution") return EntropyMethod::Resubstitution;
  throw InvalidArgument("unknown entropy method '" + std::string(name) +
                        "' (valid: quadrature, resubstitution)");
}

double Kernel::support_radius() const { return compact() ? 1.0 : kInf; }

double Kernel::integration_radius() const { return compact() ? 1.0 : kGaussianReach; }

double Kernel::operator()(double u) const {
  switch (id) {
    case KernelId::Epanechnikov:
      return std::fabs(u) < 1.0 ? 0.75 * (1.0 - u * u) : 0.0;
    case KernelId::Uniform:
      return std::fabs(u) < 1.0 ? 0.5 : 0.0;
    case KernelId::Gaussian:
      return kInvSqrt2Pi * std::exp(-0.5 * u * u);
  }
  return 0.0;
}

double Kernel::derivative(double u) const {
  switch (id) {
    case KernelId::Epanechnikov:
      return std::fabs(u) < 1.0 ? -1.5 * u : 0.0;
    case KernelId::Uniform:
      return 0.0;
    case KernelId::Gaussian:
      return -u * kInvSqrt2Pi * std::exp(-0.5 * u * u);
  }
  return 0.0;
}

double Kernel::second_derivative(double u) const {
  switch (id) {
    case KernelId::Epanechnikov:
      return std::fabs(u) < 1.0 ? -1.5 : 0.0;
    case KernelId::Uniform:
      return 0.0;
    case KernelId::Gaussian:
      return (u * u - 1.0) * kInvSqrt2Pi * std::exp(-0.5 * u * u);
  }
  return 0.0;
}

double Kernel::cdf(double u) const {
  switch (id) {
    case KernelId::Epanechnikov:
      if (u <= -1.0) return 0.0;
      if (u >= 1.0) return 1.0;
      return 0.5 + 0.75 * (u - u * u * u / 3.0);
    case KernelId::Uniform:
      if (u <= -1.0) return 0.0;
      if (u >= 1.0) return 1.0;
      return 0.5 * (u + 1.0);
    case KernelId::Gaussian:
      return 0.5 * std::erfc(-u / std::numbers::sqrt2);
  }
  return 0.0;
}

double Kernel::roughness() const {
  const double r = support_radius();
  return integrate([this](double u) { return (*this)(u) * (*this)(u); }, -r, r, 1e-13);
}

double Kernel::second_moment() const {
  const double r = support_radius();
  return integrate([this](double u) { return u * u * (*this)(u); }, -r, r, 1e-13);
}

// --- KdePoints / KdeEstimate ------------------------------------------------

std::shared_ptr<const KdePoints> KdePoints::from(const Sample& sample) {
  if (sample.empty()) throw InvalidArgument("sample is empty");
  auto p = std::make_shared<KdePoints>();
  p->data = sample.data;
  p->n = sample.n;
  p->dim = sample.dim;
  if (p->dim == 1) std::sort(p->data.begin(), p->data.end());
  return p;
}

KdeEstimate::KdeEstimate(const Sample& sample, Kernel kernel, double bandwidth)
    : KdeEstimate(KdePoints::from(sample), kernel, bandwidth) {}

KdeEstimate::KdeEstimate(std::shared_ptr<const KdePoints> points, Kernel kernel, double bandwidth)
    : kernel_(kernel), h_(bandwidth), points_(std::move(points)) {
  check_bandwidth(h_);
  if (!points_ || points_->n == 0) throw InvalidArgument("sample is empty");
  if (points_->dim > 1) build_cells();
}

void KdeEstimate::build_cells() {
  const KdePoints& p = *points_;
  const std::size_t d = static_cast<std::size_t>(p.dim);
  lo_.assign(d, kInf);
  std::vector<double> hi(d, -kInf);
  for (std::size_t i = 0; i < p.n; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      lo_[j] = std::min(lo_[j], p.data[i * d + j]);
      hi[j] = std::max(hi[j], p.data[i * d + j]);
    }
  cell_side_ = kernel_.integration_radius() * h_;
  shape_.assign(d, 1);
  for (;;) {
    long double total = 1.0L;
    for (std::size_t j = 0; j < d; ++j) {
      shape_[j] = static_cast<std::int64_t>(std::floor((hi[j] - lo_[j]) / cell_side_)) + 1;
      total *= static_cast<long double>(shape_[j]);
    }
    if (total < 4.0e18L) break;
    cell_side_ *= 2.0;
  }
  std::vector<std::uint64_t> keys(p.n);
  for (std::size_t i = 0; i < p.n; ++i) {
    std::uint64_t key = 0;
    for (std::size_t j = 0; j < d; ++j) {
      const auto c = static_cast<std::int64_t>(std::floor((p.data[i * d + j] - lo_[j]) / cell_side_));
      key = key * static_cast<std::uint64_t>(shape_[j]) +
            static_cast<std::uint64_t>(std::clamp<std::int64_t>(c, 0, shape_[j] - 1));
    }
    keys[i] = key;
  }
  std::vector<std::uint32_t> order(p.n);
  std::iota(order.begin(), order.end(), 0u);
  std::sort(order.begin(), order.end(),
            [&](std::uint32_t a, std::uint32_t b) { return keys[a] < keys[b] || (keys[a] == keys[b] && a < b); });
  cell_points_ = std::move(order);
  cell_keys_.clear();
  cell_start_.clear();
  for (std::size_t k = 0; k < p.n; ++k) {
    const std::uint64_t key = keys[cell_points_[k]];
    if (cell_keys_.empty() || cell_keys_.back() != key) {
      cell_keys_.push_back(key);
      cell_start_.push_back(k);
    }
  }
  cell_start_.push_back(p.n);
}

double KdeEstimate::density(std::span<const double> x) const {
  if (x.size() != static_cast<std::size_t>(dim()))
    throw InvalidArgument("query point has the wrong dimension");
  const KdePoints& p = *points_;
  const std::size_t d = static_cast<std::size_t>(p.dim);
  double sum = 0.0;
  for_each_neighbor(x, [&](std::size_t i) {
    double prod = 1.0;
    for (std::size_t j = 0; j < d; ++j) prod *= kernel_((x[j] - p.data[i * d + j]) / h_);
    sum += prod;
  });
  return sum / (static_cast<double>(p.n) * std::pow(h_, static_cast<double>(d)));
}

double KdeEstimate::density_bruteforce(std::span<const double> x) const {
  if (x.size() != static_cast<std::size_t>(dim()))
    throw InvalidArgument("query point has the wrong dimension");
  const KdePoints& p = *points_;
  const std::size_t d = static_cast<std::size_t>(p.dim);
  double sum = 0.0;
  for (std::size_t i = 0; i < p.n; ++i) {
    double prod = 1.0;
    for (std::size_t j = 0; j < d; ++j) prod *= kernel_((x[j] - p.data[i * d + j]) / h_);
    sum += prod;
  }
  return sum / (static_cast<double>(p.n) * std::pow(h_, static_cast<double>(d)));
}

// --- Gaussian trapezoid grid (1D) ------------------------------------------

namespace {

struct GridIntegrals {
  double mass = 0.0;
  double entropy = 0.0;
  double d_entropy = 0.0;
  double mass_h = 0.0;
  double residual = 0.0;
  double product_form = 0.0;
  double log_form = 0.0;
};

GridIntegrals gaussian_grid(const KdeEstimate& est, const KdeOptions& options) {
  const std::vector<double>& x = est.points().data;
  const std::size_t n = x.size();
  const double h = est.bandwidth();
  const double reach = kGaussianReach * h;
  const double a = x.front() - reach;
  const double span = (x.back() + reach) - a;
  const double step_max = std::min(h / 10.0, span / 4096.0);
  const double nodes_real = std::ceil(span / step_max);
  if (nodes_real > static_cast<double>(options.node_budget))
    throw ResourceBudgetError("quadrature grid needs " + std::to_string(nodes_real) +
                                  " nodes, above the node budget of " +
                                  std::to_string(options.node_budget),
                              options.node_budget);
  const std::size_t m = static_cast<std::size_t>(nodes_real);
  const double s = span / static_cast<double>(m);
  const double nd = static_cast<double>(n);
  CompensatedSum mass, ent, d1, mh, resid, prod, logf;
  std::size_t first = 0, last = 0;
  for (std::size_t k = 0; k < m; ++k) {
    const double v = a + (static_cast<double>(k) + 0.5) * s;
    while (first < n && x[first] < v - reach) ++first;
    if (last < first) last = first;
    while (last < n && x[last] <= v + reach) ++last;
    double sk = 0.0, s1 = 0.0, s2 = 0.0;
    for (std::size_t i = first; i < last; ++i) {
      const double u = (v - x[i]) / h;
      const double u2 = u * u;
      const double phi = kInvSqrt2Pi * std::exp(-0.5 * u2);
      sk += phi;
      s1 += phi * (1.0 - u2);
      s2 += phi * (u2 * u2 - 5.0 * u2 + 2.0);
    }
    const double f = sk / (nd * h);
    const double fh = -s1 / (nd * h * h);
    const double fhh = s2 / (nd * h * h * h);
    mass += s * f;
    mh += s * fh;
    if (!(f > 1e-300)) continue;
    const double lf = std::log(f);
    ent += -s * f * lf;
    d1 += -s * fh * lf;
    const double f_loghh = f * ((fhh * f - fh * fh) / (f * f));
    resid += s * (fhh * lf - f_loghh);
    prod += s * (fhh * lf + fh * fh / f);
    logf += s * (fhh * lf - f_loghh + fhh);
  }
  return {mass.value(), ent.value(), d1.value(), mh.value(), resid.value(), prod.value(), logf.value()};
}

// --- Cell-averaged grid (d > 1) ---------------------------------------------

double grid_entropy_nd(const KdeEstimate& est, const KdeOptions& options, double* mass_out) {
  const KdePoints& p = est.points();
  const std::size_t d = static_cast<std::size_t>(p.dim);
  const Kernel& K = est.kernel();
  const double h = est.bandwidth();
  const double reach = K.integration_radius() * h;
  std::vector<double> lo(d, kInf), hi(d, -kInf), step(d);
  std::vector<std::size_t> count(d);
  for (std::size_t i = 0; i < p.n; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      lo[j] = std::min(lo[j], p.data[i * d + j]);
      hi[j] = std::max(hi[j], p.data[i * d + j]);
    }
  long double total = 1.0L;
  for (std::size_t j = 0; j < d; ++j) {
    lo[j] -= reach;
    hi[j] += reach;
    const double cells = std::ceil((hi[j] - lo[j]) / (h / 3.0));
    total *= static_cast<long double>(cells);
    count[j] = static_cast<std::size_t>(std::min(cells, 1e18));
    step[j] = (hi[j] - lo[j]) / cells;
  }
  if (total > static_cast<long double>(options.node_budget))
    throw ResourceBudgetError("quadrature grid needs " + std::to_string(static_cast<double>(total)) +
                                  " nodes, above the node budget of " +
                                  std::to_string(options.node_budget) +
                                  "; use resubstitution or a larger budget",
                              options.node_budget);

  std::vector<double> grid(static_cast<std::size_t>(total), 0.0);
  std::vector<std::vector<double>> weights(d);
  std::vector<std::size_t> first(d);
  const double inv_n = 1.0 / static_cast<double>(p.n);
  for (std::size_t i = 0; i < p.n; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      const double xi = p.data[i * d + j];
      const auto c0 = static_cast<std::size_t>(std::max(0.0, std::floor((xi - reach - lo[j]) / step[j])));
      const auto c1 = std::min(count[j] - 1,
                               static_cast<std::size_t>(std::floor((xi + reach - lo[j]) / step[j])));
      first[j] = c0;
      weights[j].clear();
      double prev = K.cdf((lo[j] + static_cast<double>(c0) * step[j] - xi) / h);
      for (std::size_t c = c0; c <= c1; ++c) {
        const double next = K.cdf((lo[j] + static_cast<double>(c + 1) * step[j] - xi) / h);
        weights[j].push_back((next - prev) / step[j]);
        prev = next;
      }
    }
    // Outer product of the per-dimension cell averages.
    std::vector<std::size_t> idx(d, 0);
    for (;;) {
      double w = inv_n;
      std::size_t flat = 0;
      for (std::size_t j = 0; j < d; ++j) {
        w *= weights[j][idx[j]];
        flat = flat * count[j] + first[j] + idx[j];
      }
      grid[flat] += w;
      std::size_t j = d;
      bool done = true;
      while (j > 0) {
        --j;
        if (++idx[j] < weights[j].size()) {
          done = false;
          break;
        }
        idx[j] = 0;
      }
      if (done) break;
    }
  }
  double volume = 1.0;
  for (double s : step) volume *= s;
  CompensatedSum ent, mass;
  for (double f : grid) {
    if (!(f > 0.0)) continue;
    mass += volume * f;
    ent += -volume * f * std::log(f);
  }
  if (mass_out) *mass_out = mass.value();
  return ent.value();
}

double resubstitution_entropy(const KdeEstimate& est, const KdeOptions& options) {
  const KdePoints& p = est.points();
  const std::size_t d = static_cast<std::size_t>(p.dim);
  const Kernel& K = est.kernel();
  const double h = est.bandwidth();
  if (options.leave_one_out && p.n < 2)
    throw InvalidArgument("leave-one-out resubstitution needs at least two points");
  const double self = std::pow(K(0.0), static_cast<double>(d));
  const double norm = static_cast<double>(options.leave_one_out ? p.n - 1 : p.n) *
                      std::pow(h, static_cast<double>(d));
  CompensatedSum acc;
  for (std::size_t i = 0; i < p.n; ++i) {
    std::span<const double> xi(p.data.data() + i * d, d);
    double sum = 0.0;
    est.for_each_neighbor(xi, [&](std::size_t k) {
      double prod = 1.0;
      for (std::size_t j = 0; j < d; ++j) prod *= K((xi[j] - p.data[k * d + j]) / h);
      sum += prod;
    });
    if (options.leave_one_out) sum -= self;
    const double f = sum / norm;
    if (!(f > 0.0)) return kInf;
    acc += std::log(f);
  }
  return -acc.value() / static_cast<double>(p.n);
}

}  // namespace

// --- Entropy and derivatives ----------------------------------------------

double kde_entropy(const KdeEstimate& est, EntropyMethod method, const KdeOptions& options) {
  if (method == EntropyMethod::Resubstitution) return resubstitution_entropy(est, options);
  if (est.dim() > 1) return grid_entropy_nd(est, options, nullptr);
  if (est.kernel().compact())
    return compact_kde_integrals(est.points().data, est.kernel().id, est.bandwidth(), kWantEntropy)
        .entropy;
  return gaussian_grid(est, options).entropy;
}

double kde_entropy_derivative(const KdeEstimate& est, const KdeOptions& options) {
  require_1d(est, "the entropy derivative");
  if (est.kernel().compact())
    return compact_kde_integrals(est.points().data, est.kernel().id, est.bandwidth(),
                                 kWantDerivative)
        .d_entropy;
  return gaussian_grid(est, options).d_entropy;
}

double kde_mass(const KdeEstimate& est, const KdeOptions& options) {
  if (est.dim() > 1) {
    double mass = 0.0;
    grid_entropy_nd(est, options, &mass);
    return mass;
  }
  if (est.kernel().compact())
    return compact_kde_integrals(est.points().data, est.kernel().id, est.bandwidth(), 0).mass;
  return gaussian_grid(est, options).mass;
}

double kde_mass_derivative(const KdeEstimate& est, const KdeOptions& options) {
  require_1d(est, "the mass derivative");
  if (est.kernel().compact())
    return compact_kde_integrals(est.points().data, est.kernel().id, est.bandwidth(),
                                 kWantMassDerivative)
        .mass_h;
  return gaussian_grid(est, options).mass_h;
}

double kde_second_derivative_residual(const KdeEstimate& est, const KdeOptions& options) {
  require_1d(est, "the second-derivative residual");
  if (est.kernel().compact())
    return -compact_kde_integrals(est.points().data, est.kernel().id, est.bandwidth(),
                                  kWantSecondDerivative)
                .d2_entropy;
  return gaussian_grid(est, options).residual;
}

SecondDerivativeForms kde_second_derivative_forms(const KdeEstimate& est,
                                                  const KdeOptions& options) {
  require_1d(est, "the second-derivative forms");
  if (est.kernel().compact())
    throw InvalidArgument(
        "the integrand forms of the second derivative need a smooth kernel (gaussian)");
  const GridIntegrals g = gaussian_grid(est, options);
  return {g.product_form, g.log_form};
}

}  // namespace dentropy
