#include "exotic/inner_solver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace exotic {

std::string to_string(Selection s) { return s == Selection::BestIterate ? "best" : "last"; }

std::string to_string(StepRule r) {
  switch (r) {
    case StepRule::Constant: return "constant";
    case StepRule::InverseSqrt: return "inverse-sqrt";
  }
  return "?";
}

Selection selection_from_string(const std::string& s) {
  if (s == "best") return Selection::BestIterate;
  if (s == "last") return Selection::LastIterate;
  throw std::invalid_argument("unknown selection '" + s + "' (expected best|last)");
}

StepRule step_rule_from_string(const std::string& s) {
  if (s == "constant") return StepRule::Constant;
  if (s == "inverse-sqrt") return StepRule::InverseSqrt;
  throw std::invalid_argument("unknown step rule '" + s + "' (expected constant|inverse-sqrt)");
}

double default_step_size(const ProductDomain& domain) {
  const double d = domain.diameter();
  return d > 0.0 ? d / 10.0 : 1.0;
}

InnerSolution opt(const ConvexObjective& objective, std::span<const double> init, int iterations,
                  const InnerSolverConfig& config) {
  if (iterations < 1) throw std::invalid_argument("opt: iterations must be >= 1");
  const ProductDomain& domain = objective.domain();
  const double eta = config.step_size.value_or(default_step_size(domain));
  if (!(eta > 0.0)) throw std::invalid_argument("opt: step size must be > 0");

  InnerSolution sol;
  sol.iterations_used = iterations;
  if (config.record_trace) sol.trace.reserve(static_cast<std::size_t>(iterations));

  Vector x = domain.project(init);
  Vector g(x.size());
  double fx = objective.value_and_subgradient(x, g);
  sol.x = x;
  sol.t = fx;

  const bool probe_kinks = config.kink_probe && config.selection == Selection::BestIterate;
  Vector prev_x, prev_g, probe(x.size()), step(x.size());
  double prev_f = 0.0;

  for (int k = 1; k <= iterations; ++k) {
    const double eta_k = config.step_rule == StepRule::Constant ? eta : eta / std::sqrt(double(k));
    if (probe_kinks) {
      prev_x = x;
      prev_g = g;
      prev_f = fx;
    }
    for (std::size_t i = 0; i < x.size(); ++i) step[i] = x[i] - eta_k * g[i];
    x = domain.project(step);
    fx = objective.value_and_subgradient(x, g);
    if (config.record_trace) sol.trace.push_back(fx);

    if (config.selection == Selection::LastIterate || fx < sol.t) {
      sol.x = x;
      sol.t = fx;
    }
    if (probe_kinks) {
      // Slopes of the two end linearizations along the step; when they
      // straddle zero, try the point where the linearizations cross.
      double a0 = 0.0, a1 = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = x[i] - prev_x[i];
        a0 += prev_g[i] * d;
        a1 += g[i] * d;
      }
      if (a0 < 0.0 && a1 > 0.0) {
        const double tau = std::clamp((fx - a1 - prev_f) / (a0 - a1), 0.0, 1.0);
        for (std::size_t i = 0; i < x.size(); ++i) probe[i] = prev_x[i] + tau * (x[i] - prev_x[i]);
        const double fp = objective.value(probe);
        if (fp < sol.t) {
          sol.x = probe;
          sol.t = fp;
        }
      }
    }
  }
  if (config.selection == Selection::LastIterate) {
    sol.x = x;
    sol.t = fx;
  }
  return sol;
}

double estimate_G(const ConvexObjective& objective, std::span<const double> init, int iterations,
                  const InnerSolverConfig& config) {
  return opt(objective, init, iterations, config).t;
}

}  // namespace exotic
