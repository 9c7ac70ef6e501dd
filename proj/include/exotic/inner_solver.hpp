#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "exotic/convex_objective.hpp"

namespace exotic {

enum class Selection { BestIterate, LastIterate };
enum class StepRule { Constant, InverseSqrt };

std::string to_string(Selection s);
std::string to_string(StepRule r);
Selection selection_from_string(const std::string& s);
StepRule step_rule_from_string(const std::string& s);

struct InnerSolverConfig {
  /// Base step eta; unset means diameter(X) / 10.
  std::optional<double> step_size;
  Selection selection = Selection::BestIterate;
  StepRule step_rule = StepRule::InverseSqrt;
  /// BestIterate only: also evaluate F where the linearizations at
  /// consecutive iterates cross, when the step passes over a kink.
  bool kink_probe = true;
  bool record_trace = false;
};

struct InnerSolution {
  Vector x;
  /// F(x, w) at the returned x, so (t, x) is feasible by construction.
  double t = 0.0;
  int iterations_used = 0;
  /// F at every iterate (only when record_trace is set).
  std::vector<double> trace;
};

double default_step_size(const ProductDomain& domain);

/// Projected subgradient descent x_k = P(x_{k-1} - eta_k g_k) for `iterations`
/// steps, with eta_k = eta (Constant) or eta / sqrt(k) (InverseSqrt).
///
/// BestIterate returns the lowest-valued point among the (projected)
/// initializer, all iterates and (with kink_probe) the crossing points of
/// consecutive linearizations; LastIterate returns x_j. The initializer is
/// projected onto the domain first. Throws std::invalid_argument when
/// iterations < 1 or the step is not positive.
InnerSolution opt(const ConvexObjective& objective, std::span<const double> init, int iterations,
                  const InnerSolverConfig& config = {});

/// opt(...).t: an upper estimate of min_x F.
double estimate_G(const ConvexObjective& objective, std::span<const double> init, int iterations,
                  const InnerSolverConfig& config = {});

}  // namespace exotic
