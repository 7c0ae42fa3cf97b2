// Exact piecewise integration of compact-kernel density estimates in 1D.
//
// Between consecutive support breakpoints x_i - h and x_i + h the set of
// contributing points is fixed, so F, dF/dh and d2F/dh2 are polynomials in x
// (quadratics for the Epanechnikov kernel, constants for the uniform one).
// On each piece F is factored through its roots: a root near the piece has
// its logarithm integrated in closed form, a far one is expanded in a log1p
// series about the midpoint. Pieces where F barely changes use a corrected
// midpoint rule, and the S'' integrand falls back to Gauss-Legendre with the
// order chosen from the distance to the nearest root.
//
// The derivatives in h follow the breakpoints as they move: with pieces
// [p_k, p_k+1] moving at dp/dh = v (+1 for x_i + h, -1 for x_i - h),
//   S'  = sum_k [ int g_h + g(p_k+1-) v_k+1 - g(p_k+) v_k ]
//   S'' = sum_k [ int g_hh + (g_h + d/dh g)(p_k+1-) v_k+1 - (...)(p_k+) v_k ]
// with g = -F ln F. For the Epanechnikov kernel g is continuous, the g terms
// telescope away, and only the jumps of g_h remain in S''.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "core/error.hpp"
#include "core/kde.hpp"
#include "core/numerics.hpp"

namespace dentropy {

namespace {

constexpr double kLogInvTol = 32.3;  // ln(1e14)
constexpr int kMaxRule = 16;
constexpr int kMaxDepth = 48;

struct Quad {
  double c0 = 0.0, c1 = 0.0, c2 = 0.0;
  double operator()(double t) const { return c0 + t * (c1 + t * c2); }
  // Antiderivative from 0 to w.
  double integral(double w) const { return w * (c0 + w * (c1 / 2.0 + w * c2 / 3.0)); }
};

// p(w - s) as a polynomial in s.
Quad reflect(const Quad& p, double w) {
  return {p.c0 + w * (p.c1 + w * p.c2), -p.c1 - 2.0 * p.c2 * w, p.c2};
}

// int_0^w t^k ln t dt, k = 0, 1, 2, given lw = ln w.
void log_moments(double w, double lw, double out[3]) {
  out[0] = w * (lw - 1.0);
  out[1] = w * w * (lw / 2.0 - 0.25);
  out[2] = w * w * w * (lw / 3.0 - 1.0 / 9.0);
}

// int_0^w p(t) ln(r - t) dt for r >= w.
double log_shift_integral(const Quad& p, double r, double w) {
  const Quad s = reflect(p, r);
  const double lo = r - w;
  double hi_m[3], lo_m[3] = {0.0, 0.0, 0.0};
  log_moments(r, std::log(r), hi_m);
  if (lo > 0.0) log_moments(lo, std::log(lo), lo_m);
  return s.c0 * (hi_m[0] - lo_m[0]) + s.c1 * (hi_m[1] - lo_m[1]) + s.c2 * (hi_m[2] - lo_m[2]);
}

// int_0^w p(t) ln(t - r) dt for r <= 0.
double log_left_integral(const Quad& p, double r, double w) {
  const Quad s{p.c0 + r * (p.c1 + r * p.c2), p.c1 + 2.0 * r * p.c2, p.c2};
  double hi_m[3], lo_m[3] = {0.0, 0.0, 0.0};
  log_moments(w - r, std::log(w - r), hi_m);
  if (r < 0.0) log_moments(-r, std::log(-r), lo_m);
  return s.c0 * (hi_m[0] - lo_m[0]) + s.c1 * (hi_m[1] - lo_m[1]) + s.c2 * (hi_m[2] - lo_m[2]);
}

// int_{-a}^{a} s^j ln(1 + sigma s/L) ds for j = 0, 1, 2, with a/L <= 0.2.
// Only the parity matching j survives, so the even moments do not depend on sigma.
void log1p_moments(double a, double L, double sigma, double out[3]) {
  // Series coefficients for odd k: 1/(k(k+2)); for even k = k_odd + 1:
  // 1/(k(k+1)) and 1/(k(k+3)).
  struct Coeffs {
    std::array<double, 32> o1, e0, e2;
  };
  static const Coeffs kC = [] {
    Coeffs c{};
    for (int i = 0; i < 32; ++i) {
      const double k = 2.0 * i + 1.0;
      c.o1[i] = 1.0 / (k * (k + 2.0));
      c.e0[i] = 1.0 / ((k + 1.0) * (k + 2.0));
      c.e2[i] = 1.0 / ((k + 1.0) * (k + 4.0));
    }
    return c;
  }();
  const double r = a / L;
  const double r2 = r * r;
  double e0 = 0.0, e2 = 0.0, o1 = 0.0;
  double pe = r2, po = r;
  for (int i = 0; i < 32 && pe > 1e-18 * r2; ++i) {
    o1 += po * kC.o1[i];
    e0 += pe * kC.e0[i];
    e2 += pe * kC.e2[i];
    po *= r2;
    pe *= r2;
  }
  out[0] = -2.0 * a * e0;
  out[1] = 2.0 * sigma * a * a * o1;
  out[2] = -2.0 * a * a * a * e2;
}

// int_0^w p(t) ln(1 + sigma (t - w/2)/L) dt from the moments above.
double log1p_integral(const Quad& p, double w, const double m[3]) {
  const double mid = 0.5 * w;
  return p(mid) * m[0] + (p.c1 + 2.0 * p.c2 * mid) * m[1] + p.c2 * m[2];
}

// Gauss-Legendre order needed on [a, b] when the integrand is analytic
// except at the real points `sing`; 0 means the panel must be split. The
// q-point error decays like rho^(-2q), rho = z + sqrt(z^2 - 1) for a
// singularity at z half-widths from the midpoint; kZmin[q] is the smallest
// z with rho^(2q) >= exp(kLogInvTol).
int rule_order(double a, double b, const double* sing, int count) {
  static const auto kZmin = [] {
    std::array<double, kMaxRule + 1> z{};
    for (int q = 2; q <= kMaxRule; ++q) z[q] = std::cosh(kLogInvTol / (2.0 * q));
    return z;
  }();
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double zmin = std::numeric_limits<double>::infinity();
  for (int k = 0; k < count; ++k)
    if (std::isfinite(sing[k])) zmin = std::min(zmin, std::fabs(sing[k] - mid));
  zmin /= half;
  if (zmin <= 1.0 + 1e-12) return 0;
  for (int q = 2; q <= kMaxRule; ++q)
    if (zmin >= kZmin[q]) return q;
  return 0;
}

// Calls visit(t, weight) for the nodes of an adaptive Gauss-Legendre rule on [a, b].
template <typename Visit>
void gauss_nodes(double a, double b, const double* sing, int count, Visit& visit, int depth = 0) {
  int q = rule_order(a, b, sing, count);
  if (q == 0) {
    if (depth < kMaxDepth) {
      const double m = 0.5 * (a + b);
      gauss_nodes(a, m, sing, count, visit, depth + 1);
      gauss_nodes(m, b, sing, count, visit, depth + 1);
      return;
    }
    q = kMaxRule;
  }
  const GaussRule& rule = gauss_legendre(static_cast<std::size_t>(q));
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  for (int k = 0; k < q; ++k) visit(mid + half * rule.nodes[k], half * rule.weights[k]);
}

// Real roots of c2 t^2 + c1 t + c0 (NaN when absent).
void quad_roots(const Quad& p, double out[2]) {
  out[0] = out[1] = std::numeric_limits<double>::quiet_NaN();
  if (p.c2 == 0.0) {
    if (p.c1 != 0.0) out[0] = -p.c0 / p.c1;
    return;
  }
  const double disc = p.c1 * p.c1 - 4.0 * p.c2 * p.c0;
  if (disc < 0.0) return;
  const double s = -0.5 * (p.c1 + std::copysign(std::sqrt(disc), p.c1));
  if (s != 0.0) {
    out[0] = s / p.c2;
    out[1] = p.c0 / s;
  } else {
    out[0] = out[1] = 0.0;
  }
}

class Accumulator {
 public:
  Accumulator(KernelId kernel, double h, std::size_t n, unsigned flags)
      : kernel_(kernel),
        h_(h),
        inv_n_(1.0 / static_cast<double>(n)),
        flags_(flags),
        inv_h2_(1.0 / (h * h)),
        kf_(0.75 * inv_n_ / h),
        kh_(0.75 * inv_n_ * inv_h2_),
        khh_(inv_n_ * inv_h2_ / h),
        isolated_(5.0 / 3.0 - std::log(3.0)) {}

  void piece(double w, double s1, double s2, std::size_t n, bool zero_left, bool zero_right,
             double v_left, double v_right) {
    if (kernel_ == KernelId::Uniform)
      uniform_piece(w, n, v_left, v_right);
    else
      epanechnikov_piece(w, s1, s2, n, zero_left, zero_right, v_left, v_right);
  }

  KdeIntegrals result() const {
    return {mass_.value(), entropy_.value(), d1_.value(), d2_.value(), mass_h_.value()};
  }

 private:
  bool want(unsigned f) const { return (flags_ & f) != 0; }

  void uniform_piece(double w, std::size_t n, double v_left, double v_right) {
    const double f = 0.5 * static_cast<double>(n) * inv_n_ / h_;
    const double lf = std::log(f);
    const double fh = -f / h_;
    const double fhh = 2.0 * f / (h_ * h_);
    const double g = -f * lf;
    const double gh = -fh * (lf + 1.0);
    const double ghh = -fhh * (lf + 1.0) - fh * fh / f;
    const double dw = v_right - v_left;
    mass_ += w * f;
    entropy_ += w * g;
    d1_ += w * gh + dw * g;
    d2_ += w * ghh + 2.0 * dw * gh;
    mass_h_ += w * fh + dw * f;
  }

  void epanechnikov_piece(double w, double s1, double s2, std::size_t n, bool zero_left,
                          bool zero_right, double v_left, double v_right) {
    const double nd = static_cast<double>(n);
    if (zero_left && zero_right) {
      // n coincident points whose kernel overlaps nothing else.
      const double m = nd * inv_n_;
      mass_ += m;
      entropy_ += m * (std::log(h_ / m) + isolated_);
      d1_ += m / h_;
      d2_ += -m * inv_h2_;
      return;
    }
    // Moments are about the left end: sum u^2 = (s2 - 2 s1 t + n t^2)/h^2.
    const double a0 = s2 * inv_h2_, a1 = s1 * inv_h2_, a2 = nd * inv_h2_;
    const Quad f{kf_ * (nd - a0), 2.0 * kf_ * a1, -kf_ * a2};
    Quad fh, fhh;
    if (flags_ & ~unsigned{kWantEntropy}) fh = {kh_ * (3.0 * a0 - nd), -6.0 * kh_ * a1, 3.0 * kh_ * a2};
    if (want(kWantSecondDerivative)) fhh = {khh_ * (1.5 * nd - 9.0 * a0), 18.0 * khh_ * a1, -9.0 * khh_ * a2};

    if (want(kWantMassDerivative)) mass_h_ += fh.integral(w);

    auto gh_at = [&](double t) {
      const double ft = std::max(f(t), std::numeric_limits<double>::min());
      return -fh(t) * (std::log(ft) + 1.0);
    };

    if (zero_left || zero_right) {
      if (zero_left) {
        zero_edge_piece(w, f, fh, fhh);
        if (want(kWantSecondDerivative)) d2_ += gh_at(w) * v_right;
      } else {
        zero_edge_piece(w, reflect(f, w), reflect(fh, w), reflect(fhh, w));
        if (want(kWantSecondDerivative)) d2_ += -gh_at(0.0) * v_left;
      }
      return;
    }

    mass_ += f.integral(w);
    if (!want(kWantSecondDerivative) && (smooth_piece(w, f, fh) || factored_piece(w, f, fh))) return;
    double roots[2];
    quad_roots(f, roots);
    double ent = 0.0, d1 = 0.0, d2 = 0.0;
    auto visit = [&](double t, double wt) {
      const double ft = f(t);
      if (!(ft > 0.0)) return;
      const double lf = std::log(ft);
      ent += -wt * ft * lf;
      const double b = fh(t);
      d1 += -wt * b * (lf + 1.0);
      if (want(kWantSecondDerivative)) d2 += -wt * (fhh(t) * (lf + 1.0) + b * b / ft);
    };
    gauss_nodes(0.0, w, roots, 2, visit);
    if (want(kWantEntropy)) entropy_ += ent;
    if (want(kWantDerivative)) d1_ += d1;
    if (want(kWantSecondDerivative)) d2_ += d2;
    if (want(kWantSecondDerivative)) d2_ += gh_at(w) * v_right - gh_at(0.0) * v_left;
  }

  // Midpoint rule with the w^3/24 curvature correction, one logarithm per
  // piece. Used when F changes little across the piece: with
  // e = w max(|F'|/F, sqrt(|F''|/F)) <= 2e-3 the neglected w^5 term is below
  // 1e-14 of the piece's value.
  bool smooth_piece(double w, const Quad& f, const Quad& fh) {
    const double t = 0.5 * w;
    const double ft = f(t);
    if (!(ft > 0.0)) return false;
    const double f1 = f.c1 + 2.0 * f.c2 * t;
    const double f2 = 2.0 * f.c2;
    const double r1 = f1 / ft;
    const double r2 = f2 / ft;
    const double e2 = w * w * std::max(r1 * r1, std::fabs(r2));
    if (e2 > 4e-6) return false;
    const double lf = std::log(ft);
    const double w3 = w * w * w / 24.0;
    if (want(kWantEntropy)) {
      // g = -F ln F, g'' = -F''(ln F + 1) - F'^2/F.
      const double g2 = -f2 * (lf + 1.0) - f1 * r1;
      entropy_ += -w * ft * lf + w3 * g2;
    }
    if (want(kWantDerivative)) {
      // g_h = -B (ln F + 1), with B = dF/dh.
      const double b = fh(t);
      const double b1 = fh.c1 + 2.0 * fh.c2 * t;
      const double b2 = 2.0 * fh.c2;
      const double g2 = -b2 * (lf + 1.0) - 2.0 * b1 * r1 - b * (r2 - r1 * r1);
      d1_ += -w * b * (lf + 1.0) + w3 * g2;
    }
    return true;
  }

  // F = -c2 (t - r_lo)(r_hi - t) with r_lo <= 0 < w <= r_hi. A root within
  // 2w of the piece has its logarithm integrated in closed form; a farther
  // root is expanded as ln L + log1p(+-s/L) about the midpoint, |s/L| <= 0.2.
  bool factored_piece(double w, const Quad& f, const Quad& fh) {
    if (!(f.c2 < 0.0)) return false;
    double roots[2];
    quad_roots(f, roots);
    if (std::isnan(roots[0]) || std::isnan(roots[1])) return false;
    const double r_lo = std::min({roots[0], roots[1], 0.0});
    const double r_hi = std::max({roots[0], roots[1], w});
    const bool near_lo = -r_lo <= 2.0 * w;
    const bool near_hi = r_hi - w <= 2.0 * w;
    const bool d = want(kWantDerivative);
    const double mid = 0.5 * w;
    // ln(-c2) plus ln L of each far factor.
    double lc;
    if (near_lo && near_hi)
      lc = std::log(-f.c2);
    else if (near_lo)
      lc = std::log(-f.c2 * (r_hi - mid));
    else if (near_hi)
      lc = std::log(-f.c2 * (mid - r_lo));
    else
      lc = std::log(f(mid));
    double ent = lc * f.integral(w);
    double d1 = d ? (lc + 1.0) * fh.integral(w) : 0.0;
    double m[3];
    if (near_lo) {
      ent += log_left_integral(f, r_lo, w);
      if (d) d1 += log_left_integral(fh, r_lo, w);
    } else {
      log1p_moments(mid, mid - r_lo, 1.0, m);
      ent += log1p_integral(f, w, m);
      if (d) d1 += log1p_integral(fh, w, m);
    }
    if (near_hi) {
      ent += log_shift_integral(f, r_hi, w);
      if (d) d1 += log_shift_integral(fh, r_hi, w);
    } else {
      log1p_moments(mid, r_hi - mid, -1.0, m);
      ent += log1p_integral(f, w, m);
      if (d) d1 += log1p_integral(fh, w, m);
    }
    if (want(kWantEntropy)) entropy_ += -ent;
    if (d) d1_ += -d1;
    return true;
  }

  // Piece on [0, w] with F(0) = 0: F = t q(t), q = c1 + c2 t. The ln t parts
  // are integrated exactly; for S'' the divergent boundary term at t = 0 and
  // the -kappa/t part of the integrand are combined analytically,
  //   int_0^w (g_hh + kappa/t) dt - kappa (ln(c1 w) + 1),  kappa = b0^2/c1.
  void zero_edge_piece(double w, const Quad& f, const Quad& fh, const Quad& fhh) {
    const double c1 = f.c1;
    const double c2 = f.c2;
    mass_ += w * w * (c1 / 2.0 + w * c2 / 3.0);
    if (!(c1 > 0.0)) return;
    double lm[3];
    log_moments(w, std::log(w), lm);
    const double lm0 = lm[0], lm1 = lm[1], lm2 = lm[2];
    const double b0 = fh.c0, b1 = fh.c1, b2 = fh.c2;
    const double kappa = b0 * b0 / c1;
    const double p0 = 2.0 * c1 * b0 * b1 - b0 * b0 * c2;
    const double p1 = c1 * (b1 * b1 + 2.0 * b0 * b2);
    const double p2 = 2.0 * c1 * b1 * b2;
    const double p3 = c1 * b2 * b2;

    if (want(kWantEntropy)) entropy_ += -(c1 * lm1 + c2 * lm2);
    if (want(kWantDerivative)) d1_ += -(b0 * lm0 + b1 * lm1 + b2 * lm2);
    if (want(kWantSecondDerivative))
      d2_ += -(fhh.c0 * lm0 + fhh.c1 * lm1 + fhh.c2 * lm2) - kappa * (std::log(c1 * w) + 1.0);

    const double root = c2 != 0.0 ? -c1 / c2 : std::numeric_limits<double>::infinity();
    if (!want(kWantSecondDerivative) && c2 < 0.0 && root <= 2.0 * w) {
      // The other root of F is close: ln q = ln(-c2) + ln(root - t), both exact.
      const double lc = std::log(-c2);
      const Quad tq{0.0, c1, c2};
      if (want(kWantEntropy))
        entropy_ += -(lc * tq.integral(w) + log_shift_integral(tq, root, w));
      if (want(kWantDerivative))
        d1_ += -((lc + 1.0) * fh.integral(w) + log_shift_integral(fh, root, w));
      return;
    }
    double ent = 0.0, d1 = 0.0, d2 = 0.0;
    auto visit = [&](double t, double wt) {
      const double q = c1 + c2 * t;
      if (!(q > 0.0)) return;
      const double lq = std::log(q);
      ent += -wt * t * q * lq;
      d1 += -wt * fh(t) * (lq + 1.0);
      if (want(kWantSecondDerivative)) {
        const double poly = p0 + t * (p1 + t * (p2 + t * p3));
        d2 += -wt * (fhh(t) * (lq + 1.0) + poly / (c1 * q));
      }
    };
    gauss_nodes(0.0, w, &root, 1, visit);
    if (want(kWantEntropy)) entropy_ += ent;
    if (want(kWantDerivative)) d1_ += d1;
    if (want(kWantSecondDerivative)) d2_ += d2;
  }

  KernelId kernel_;
  double h_;
  double inv_n_;
  unsigned flags_;
  double inv_h2_, kf_, kh_, khh_, isolated_;
  CompensatedSum mass_, entropy_, d1_, d2_, mass_h_;
};

}  // namespace

KdeIntegrals compact_kde_integrals(std::span<const double> x, KernelId kernel, double h,
                                   unsigned flags) {
  if (kernel == KernelId::Gaussian)
    throw InvalidArgument("piecewise integration needs a compact kernel");
  if (!(h > 0.0)) throw InvalidArgument("bandwidth must be positive");
  const std::size_t n = x.size();
  if (n == 0) throw InvalidArgument("sample is empty");

  Accumulator acc(kernel, h, n, flags);
  std::size_t next_lower = 0, next_upper = 0;  // active points are [next_upper, next_lower)
  double c = 0.0, s1 = 0.0, s2 = 0.0;
  bool zero_left = true;
  double v_left = -1.0;
  std::size_t since_refresh = 0;

  while (next_upper < n) {
    const double lower = next_lower < n ? x[next_lower] - h : std::numeric_limits<double>::infinity();
    const double upper = x[next_upper] + h;
    const double p = std::min(lower, upper);
    const std::size_t active = next_lower - next_upper;

    std::size_t leaving = 0;
    while (next_upper + leaving < next_lower && x[next_upper + leaving] + h == p) ++leaving;
    std::size_t entering = 0;
    while (next_lower + entering < n && x[next_lower + entering] - h == p) ++entering;

    if (active > 0) {
      const double w = p - c;
      const bool zero_right = leaving == active;
      const double v_right = leaving > 0 ? 1.0 : -1.0;
      if (w > 0.0) acc.piece(w, s1, s2, active, zero_left, zero_right, v_left, v_right);
      // Move the moments to p.
      const double delta = p - c;
      s2 = s2 - 2.0 * delta * s1 + static_cast<double>(active) * delta * delta;
      s1 -= static_cast<double>(active) * delta;
    }
    c = p;
    for (std::size_t k = 0; k < leaving; ++k) {
      const double d = x[next_upper + k] - p;
      s1 -= d;
      s2 -= d * d;
    }
    next_upper += leaving;
    zero_left = next_lower == next_upper;
    for (std::size_t k = 0; k < entering; ++k) {
      const double d = x[next_lower + k] - p;
      s1 += d;
      s2 += d * d;
    }
    next_lower += entering;
    v_left = entering > 0 ? -1.0 : 1.0;

    since_refresh += leaving + entering;
    const std::size_t now = next_lower - next_upper;
    if (now == 0) {
      s1 = s2 = 0.0;
      since_refresh = 0;
    } else if (since_refresh >= std::max<std::size_t>(64, now)) {
      CompensatedSum a, b;
      for (std::size_t k = next_upper; k < next_lower; ++k) {
        const double d = x[k] - c;
        a += d;
        b += d * d;
      }
      s1 = a.value();
      s2 = b.value();
      since_refresh = 0;
    }
  }
  return acc.result();
}

}  // namespace dentropy
