#pragma once

// Reference computations used as independent oracles by the test suites.
// None of these call into the library's solvers.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <vector>

#include <boost/math/special_functions/lambert_w.hpp>

namespace testsupport {

inline std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) out[i] = n == 1 ? lo : lo + (hi - lo) * i / (n - 1);
  return out;
}

// min over xs of max over ys of f on scalar grids.
inline double brute_minmax_1d(const std::function<double(double, double)>& f, const std::vector<double>& xs,
                              const std::vector<double>& ys, double* argmin = nullptr) {
  double best = std::numeric_limits<double>::infinity();
  for (double x : xs) {
    double worst = -std::numeric_limits<double>::infinity();
    for (double y : ys) worst = std::max(worst, f(x, y));
    if (worst < best) {
      best = worst;
      if (argmin) *argmin = x;
    }
  }
  return best;
}

// Golden-section minimum of a unimodal function on [lo, hi].
inline double golden_min(const std::function<double(double)>& g, double lo, double hi, int iters = 200) {
  const double r = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - r * (b - a), d = a + r * (b - a);
  double gc = g(c), gd = g(d);
  for (int i = 0; i < iters; ++i) {
    if (gc < gd) {
      b = d; d = c; gd = gc; c = b - r * (b - a); gc = g(c);
    } else {
      a = c; c = d; gc = gd; d = a + r * (b - a); gd = g(d);
    }
  }
  return std::min({g(a), g(b), g(0.5 * (a + b))});
}

inline double hmax_reference(double n, double K) {
  const double l = 1.0 + std::log(n);
  return std::floor(2.0 * n / (5.0 * K * l * l));
}

struct BoundInputs {
  double nu, rho, C, d, a1, a2, C2, g, K, n;
};

// W(s*x)/s with the s -> 0 limit.
inline double w_over(double s, double x) {
  if (s == 0.0) return x;
  return boost::math::lambert_w0(s * x) / s;
}

// Second transcription of the sublinear bound; operations reordered.
inline double sublinear_reference(const BoundInputs& p, bool* first_branch = nullptr) {
  const double h = hmax_reference(p.n, p.K);
  const double lr = -std::log(p.rho);
  const double inv = 1.0 / p.a2;
  const double expo = inv + p.d;
  const double arg = (lr * expo * h) * std::pow(p.nu, inv) / (std::pow(p.a1, inv) * 4.0 * p.C);
  const double tree = p.nu / std::exp(boost::math::lambert_w0(arg) / expo);
  const bool first = tree <= p.a1 * std::exp2(p.a2);
  if (first_branch) *first_branch = first;
  if (first) {
    const double l = std::log(p.n) + 1.0;
    const double half = std::floor(p.n / (l * l * p.K * 5.0));
    return tree + (half == 0.0 ? std::numeric_limits<double>::infinity() : p.a1 * std::pow(half, -p.a2));
  }
  return p.nu * 2.0 / std::exp(w_over(p.d, h * lr / (2.0 * p.C)));
}

// Second transcription of the linear bound (both forms).
inline double linear_reference(const BoundInputs& p, bool printed, bool* first_branch = nullptr) {
  const double h = hmax_reference(p.n, p.K);
  const double lr = -std::log(p.rho);
  const double lg = -std::log(p.g);
  const double base = printed ? lr * std::sqrt(h / (4.0 * p.C)) : std::sqrt(h * lg * lr / (4.0 * p.C));
  const double scale = printed ? p.C2 : std::max(p.nu, p.C2);
  const double ht = w_over(0.5 * p.d, base) / lr;
  const bool first = 2.0 * lr * ht >= lg;
  if (first_branch) *first_branch = first;
  if (first) {
    const double l = std::log(p.n) + 1.0;
    const double half = std::floor(p.n / (l * l * p.K * 5.0));
    return scale * (std::exp(half * std::log(p.g)) + std::exp(-lr * ht));
  }
  return scale * 2.0 / std::exp(w_over(p.d, h * lr / (2.0 * p.C)));
}

}  // namespace testsupport
