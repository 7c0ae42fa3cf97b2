#include "core/numerics.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <exception>
#include <limits>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <thread>

#include "core/error.hpp"

namespace dentropy {

namespace {

GaussRule build_gauss_legendre(std::size_t n) {
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const std::size_t half = (n + 1) / 2;
  for (std::size_t i = 0; i < half; ++i) {
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                        (static_cast<double>(n) + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (std::size_t k = 2; k <= n; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / static_cast<double>(k);
        p0 = p1;
        p1 = pk;
      }
      if (n == 1) {
        p1 = x;
        p0 = 1.0;
      }
      dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::fabs(dx) < 1e-16) break;
    }
    double p0 = 1.0, p1 = x;
    for (std::size_t k = 2; k <= n; ++k) {
      const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / static_cast<double>(k);
      p0 = p1;
      p1 = pk;
    }
    dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

}  // namespace

const GaussRule& gauss_legendre(std::size_t n) {
  static const std::array<GaussRule, 33> cache = [] {
    std::array<GaussRule, 33> rules;
    rules[1] = GaussRule{{0.0}, {2.0}};
    for (std::size_t k = 2; k < rules.size(); ++k) rules[k] = build_gauss_legendre(k);
    return rules;
  }();
  if (n == 0 || n >= cache.size())
    throw InvalidArgument("Gauss-Legendre order must be in [1, 32]");
  return cache[n];
}

double integrate(const RealFunction& f, double a, double b, double rel_tol) {
  using boost::math::quadrature::gauss_kronrod;
  return gauss_kronrod<double, 61>::integrate(f, a, b, 25, rel_tol);
}

namespace {

// Neville/Richardson tableau over strides step, step/c, step/c^2, ... with
// error terms in even powers of the stride.
template <typename Estimate>
double richardson(Estimate estimate, double step, double* error) {
  constexpr int kMax = 12;
  constexpr double kShrink = 1.4;
  constexpr double kShrink2 = kShrink * kShrink;
  double table[kMax][kMax];
  double best = 0.0;
  double best_err = std::numeric_limits<double>::max();
  double h = step;
  table[0][0] = estimate(h);
  for (int i = 1; i < kMax; ++i) {
    h /= kShrink;
    table[0][i] = estimate(h);
    double fac = kShrink2;
    for (int j = 1; j <= i; ++j) {
      table[j][i] = (table[j - 1][i] * fac - table[j - 1][i - 1]) / (fac - 1.0);
      fac *= kShrink2;
      const double err = std::max(std::fabs(table[j][i] - table[j - 1][i]),
                                  std::fabs(table[j][i] - table[j - 1][i - 1]));
      if (err <= best_err) {
        best_err = err;
        best = table[j][i];
      }
    }
    if (std::fabs(table[i][i] - table[i - 1][i - 1]) >= 2.0 * best_err) break;
  }
  if (error) *error = best_err;
  return best;
}

}  // namespace

double derivative(const RealFunction& f, double x, double step, double* error) {
  return richardson([&](double h) { return (f(x + h) - f(x - h)) / (2.0 * h); }, step, error);
}

double second_derivative(const RealFunction& f, double x, double step, double* error) {
  const double fx = f(x);
  return richardson([&](double h) { return (f(x + h) - 2.0 * fx + f(x - h)) / (h * h); }, step,
                    error);
}

std::vector<double> log_space(double lo, double hi, std::size_t count) {
  if (!(lo > 0.0) || !(hi > lo) || count < 2)
    throw InvalidArgument("log_space needs 0 < lo < hi and at least two points");
  std::vector<double> out(count);
  const double a = std::log(lo);
  const double step = (std::log(hi) - a) / static_cast<double>(count - 1);
  for (std::size_t k = 0; k < count; ++k) out[k] = std::exp(a + step * static_cast<double>(k));
  out.front() = lo;
  out.back() = hi;
  return out;
}

double mean(std::span<const double> values) {
  if (values.empty()) return 0.0;
  CompensatedSum s;
  for (double v : values) s += v;
  return s.value() / static_cast<double>(values.size());
}

double standard_deviation(std::span<const double> values) {
  if (values.size() < 2) return 0.0;
  const double m = mean(values);
  CompensatedSum s;
  for (double v : values) s += (v - m) * (v - m);
  return std::sqrt(s.value() / static_cast<double>(values.size() - 1));
}

unsigned default_threads() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1u : hw;
}

void parallel_for(std::size_t count, unsigned threads,
                  const std::function<void(std::size_t)>& body) {
  if (threads == 0) threads = default_threads();
  const std::size_t workers = std::min<std::size_t>(threads, count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto run = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(count);
        return;
      }
    }
  };
  std::vector<std::jthread> pool;
  pool.reserve(workers - 1);
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(run);
  run();
  pool.clear();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace dentropy
