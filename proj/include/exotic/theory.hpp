#pragma once

#include <optional>

namespace exotic {

/// Principal branch of the Lambert W function: x with x e^x = y.
/// Throws std::domain_error for y < 0.
double lambert_w(double y);

/// Constants of the optimality-gap bounds. `rate_constant`/`rate_exponent`
/// describe a solver with error alpha1 / j^alpha2 after j steps; the linear
/// pair describes error C2 * gamma^j.
struct TheoryParams {
  double nu = 1.0;
  double rho = 0.5;           // in (0,1)
  double C = 2.0;             // > 1
  double d = 1.0;             // near-optimality dimension, >= 0
  double alpha1 = 1.0;        // > 0
  double alpha2 = 0.5;        // > 0
  double C2 = 1.0;            // > 0
  double gamma = 0.5;         // in (0,1)
  int arity = 3;
  long long budget = 1000000;

  /// Throws std::invalid_argument on out-of-range constants.
  void validate() const;
};

struct GapBound {
  double value = 0.0;
  /// Whether the theorem's branch condition held (first bound used).
  bool condition_holds = false;
};

/// Bound for a solver converging at a polynomial rate. Uses
/// h_max = floor(2n / (5K (1+ln n)^2)); throws BudgetTooSmallError when that
/// is zero. The first term divides by floor(n / (5K (1+ln n)^2))^alpha2 and
/// is +inf while that floor is zero.
GapBound gap_bound_sublinear(const TheoryParams& params);

enum class LinearBoundForm {
  /// Depth h_tilde solved from its defining relations, constant max(nu, C2).
  Rederived,
  /// Closed form exactly as stated with the theorem. It omits a factor
  /// sqrt(ln(1/gamma) / ln(1/rho)) inside W and can increase in n where the
  /// branch condition starts to hold.
  AsPrinted,
};

/// Bound for a solver converging at a linear (geometric) rate.
GapBound gap_bound_linear(const TheoryParams& params, LinearBoundForm form = LinearBoundForm::Rederived);

/// Large-budget closed forms obtained from W(y) >= ln(y / ln y). Empty when
/// the argument of W is not above e.
std::optional<double> gap_bound_sublinear_asymptotic(const TheoryParams& params);
std::optional<double> gap_bound_linear_asymptotic(const TheoryParams& params,
                                                  LinearBoundForm form = LinearBoundForm::Rederived);

}  // namespace exotic
