#include "exotic/theory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "exotic/exotic.hpp"

namespace exotic {

double lambert_w(double y) {
  if (std::isnan(y) || y < 0.0) throw std::domain_error("lambert_w: argument must be >= 0");
  if (y == 0.0) return 0.0;
  if (std::isinf(y)) return y;
  double w = y < 1.0 ? y / (1.0 + y) : std::log1p(y);
  if (y > 3.0) {
    const double l = std::log(y);
    w = l - std::log(l);
  }
  for (int it = 0; it < 100; ++it) {
    const double ew = std::exp(w);
    const double r = w * ew - y;
    // Newton step with a Halley correction; fall back to bisection-like
    // damping if the step would leave the branch.
    const double d1 = ew * (w + 1.0);
    double step = r / (d1 - (w + 2.0) * r / (2.0 * (w + 1.0)));
    double next = w - step;
    if (next <= -1.0) next = (w - 1.0) / 2.0;
    if (std::abs(next - w) <= 1e-15 * std::max(1.0, std::abs(next))) {
      w = next;
      break;
    }
    w = next;
  }
  return w;
}

void TheoryParams::validate() const {
  auto need = [](bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(std::string("TheoryParams: ") + what);
  };
  need(nu > 0.0, "nu must be > 0");
  need(rho > 0.0 && rho < 1.0, "rho must be in (0,1)");
  need(C > 1.0, "C must be > 1");
  need(d >= 0.0 && std::isfinite(d), "d must be >= 0");
  need(alpha1 > 0.0, "alpha1 must be > 0");
  need(alpha2 > 0.0, "alpha2 must be > 0");
  need(C2 > 0.0, "C2 must be > 0");
  need(gamma > 0.0 && gamma < 1.0, "gamma must be in (0,1)");
  need(arity >= 2, "arity must be >= 2");
  need(budget >= 1, "budget must be >= 1");
}

namespace {

struct Depths {
  double h_max;  // floor(2n / (5K(1+ln n)^2))
  double half;   // floor(n / (5K(1+ln n)^2))
};

Depths depths(const TheoryParams& p) {
  p.validate();
  const double h = static_cast<double>(budget_to_hmax(p.budget, p.arity));
  const double n = static_cast<double>(p.budget);
  const double l = 1.0 + std::log(n);
  return {h, std::floor(n / (5.0 * p.arity * l * l))};
}

// W(a x) / a, continued to x at a = 0.
double scaled_w(double a, double x) { return a > 0.0 ? lambert_w(a * x) / a : x; }

// Argument of W in the sublinear bound and the exponent denominator.
struct SublinearTerms {
  double A;    // d + 1/alpha2
  double arg;  // h_max A ln(1/rho) / (4 C alpha1^{1/alpha2} nu^{-1/alpha2})
};

SublinearTerms sublinear_terms(const TheoryParams& p, double h_max) {
  const double A = p.d + 1.0 / p.alpha2;
  const double denom = 4.0 * p.C * std::pow(p.alpha1, 1.0 / p.alpha2) * std::pow(p.nu, -1.0 / p.alpha2);
  return {A, h_max * A * std::log(1.0 / p.rho) / denom};
}

double solver_term_sublinear(const TheoryParams& p, double half) {
  return half > 0.0 ? p.alpha1 / std::pow(half, p.alpha2) : std::numeric_limits<double>::infinity();
}

// Shared second-branch argument d ln(1/rho) h_max / (2C), with the d factor
// kept out so d = 0 is handled by scaled_w.
double fallback_base(const TheoryParams& p, double h_max) { return std::log(1.0 / p.rho) * h_max / (2.0 * p.C); }

struct LinearTerms {
  double base;     // h_tilde = W((d/2) base) / (d/2)
  double h_tilde;
  double scale;    // constant in front of both terms
};

// The printed form uses base = ln(1/rho) sqrt(h/(4C)) and C2 as the constant.
// Solving nu rho^h = C2 gamma^(2^(p-1)), h_max = 2 h C 2^p rho^(-d h) with
// nu = C2 = max(nu, C2) gives an extra sqrt(ln(1/gamma) / ln(1/rho)) in base.
LinearTerms linear_terms(const TheoryParams& p, double h_max, LinearBoundForm form) {
  const double L = std::log(1.0 / p.rho);
  LinearTerms t;
  if (form == LinearBoundForm::AsPrinted) {
    t.base = L * std::sqrt(h_max / (4.0 * p.C));
    t.scale = p.C2;
  } else {
    t.base = L * std::sqrt(h_max * std::log(1.0 / p.gamma) / (4.0 * p.C * L));
    t.scale = std::max(p.C2, p.nu);
  }
  t.h_tilde = scaled_w(p.d / 2.0, t.base) / L;
  return t;
}

std::optional<double> log_ratio_power(double u, double exponent) {
  if (!(u > std::exp(1.0))) return std::nullopt;
  return std::pow(u / std::log(u), -exponent);
}

}  // namespace

GapBound gap_bound_sublinear(const TheoryParams& p) {
  const Depths dep = depths(p);
  const auto [A, arg] = sublinear_terms(p, dep.h_max);
  const double tree_term = p.nu * std::exp(-lambert_w(arg) / A);
  GapBound out;
  out.condition_holds = tree_term <= std::pow(2.0, p.alpha2) * p.alpha1;
  if (out.condition_holds) {
    out.value = solver_term_sublinear(p, dep.half) + tree_term;
  } else {
    out.value = 2.0 * p.nu * std::exp(-scaled_w(p.d, fallback_base(p, dep.h_max)));
  }
  return out;
}

GapBound gap_bound_linear(const TheoryParams& p, LinearBoundForm form) {
  const Depths dep = depths(p);
  const double L = std::log(1.0 / p.rho);
  const LinearTerms lt = linear_terms(p, dep.h_max, form);
  GapBound out;
  // Branch condition: h_tilde >= ln(1/gamma) / (2 ln(1/rho)).
  out.condition_holds = lt.h_tilde >= std::log(1.0 / p.gamma) / (2.0 * L);
  if (out.condition_holds) {
    out.value = lt.scale * std::pow(p.gamma, dep.half) + lt.scale * std::exp(-L * lt.h_tilde);
  } else {
    out.value = 2.0 * lt.scale * std::exp(-scaled_w(p.d, fallback_base(p, dep.h_max)));
  }
  return out;
}

std::optional<double> gap_bound_sublinear_asymptotic(const TheoryParams& p) {
  const Depths dep = depths(p);
  const auto [A, arg] = sublinear_terms(p, dep.h_max);
  if (gap_bound_sublinear(p).condition_holds) {
    const auto tail = log_ratio_power(arg, 1.0 / A);
    if (!tail) return std::nullopt;
    return solver_term_sublinear(p, dep.half) + p.nu * *tail;
  }
  if (p.d == 0.0) return std::nullopt;
  const auto tail = log_ratio_power(p.d * fallback_base(p, dep.h_max), 1.0 / p.d);
  if (!tail) return std::nullopt;
  return 2.0 * p.nu * *tail;
}

std::optional<double> gap_bound_linear_asymptotic(const TheoryParams& p, LinearBoundForm form) {
  const Depths dep = depths(p);
  if (p.d == 0.0) return std::nullopt;
  const LinearTerms lt = linear_terms(p, dep.h_max, form);
  if (gap_bound_linear(p, form).condition_holds) {
    const auto tail = log_ratio_power(p.d / 2.0 * lt.base, 2.0 / p.d);
    if (!tail) return std::nullopt;
    return lt.scale * std::pow(p.gamma, dep.half) + lt.scale * *tail;
  }
  const auto tail = log_ratio_power(p.d * fallback_base(p, dep.h_max), 1.0 / p.d);
  if (!tail) return std::nullopt;
  return 2.0 * lt.scale * *tail;
}

}  // namespace exotic
