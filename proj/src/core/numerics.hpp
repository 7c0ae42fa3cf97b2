#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace dentropy {

/// Compensated (Neumaier) running sum.
class CompensatedSum {
 public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::fabs(sum_) >= std::fabs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  CompensatedSum& operator+=(double x) noexcept {
    add(x);
    return *this;
  }
  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

struct GaussRule {
  std::vector<double> nodes;    // on [-1, 1], ascending
  std::vector<double> weights;  // sum to 2
};

/// n-point Gauss-Legendre rule; rules up to 32 points are cached.
const GaussRule& gauss_legendre(std::size_t n);

using RealFunction = std::function<double(double)>;

/// Adaptive Gauss-Kronrod integral over [a, b]; either end may be infinite.
double integrate(const RealFunction& f, double a, double b, double rel_tol = 1e-12);

/// Richardson-extrapolated central first derivative (Ridders' tableau).
/// `step` is the initial stride; it is halved until the tableau stabilises.
double derivative(const RealFunction& f, double x, double step, double* error = nullptr);

/// Richardson-extrapolated central second derivative.
double second_derivative(const RealFunction& f, double x, double step, double* error = nullptr);

/// Log-uniform values from lo to hi inclusive.
std::vector<double> log_space(double lo, double hi, std::size_t count);

double mean(std::span<const double> values);

/// Sample standard deviation (n - 1 denominator); zero for fewer than two values.
double standard_deviation(std::span<const double> values);

/// Runs body(i) for i in [0, count) on up to `threads` workers. Each index is
/// processed exactly once; callers write results by index so the outcome does
/// not depend on scheduling.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body);

/// Worker count to use when the caller passes 0.
unsigned default_threads();

}  // namespace dentropy
