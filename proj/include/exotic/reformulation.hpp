#pragma once

#include <span>
#include <vector>

#include "exotic/convex_objective.hpp"
#include "exotic/problem.hpp"

namespace exotic {

/// A point w of the outer domain W = Y^(copies): one y per component.
struct OuterPoint {
  std::vector<Vector> components;

  Vector flatten() const;
  /// Splits a flat vector into `copies` equally sized components.
  static OuterPoint split(std::span<const double> flat, std::size_t copies);

  bool operator==(const OuterPoint&) const = default;
};

/// W = Y^(copies) with copies = problem.outer_copies().
ProductDomain outer_domain(const MinMaxProblem& problem);

/// The convex inner problem attached to an outer point w:
///
///   F(x, w) = max_i f(x, y_i),   G(w) = min_{x in X} F(x, w).
///
/// The epigraph variable t of K(w) = {(t, x) : f(x, y_i) <= t for all i} is
/// eliminated: solvers minimize F directly and report t = F(x, w), which is
/// always feasible.
class InnerProblem final : public ConvexObjective {
 public:
  /// Throws std::invalid_argument if w has the wrong number of components or
  /// a component lies outside Y.
  InnerProblem(const MinMaxProblem& problem, OuterPoint w);

  const ProductDomain& domain() const override { return problem_->x_domain; }
  double value(std::span<const double> x) const override;
  void subgradient(std::span<const double> x, std::span<double> out) const override;
  double value_and_subgradient(std::span<const double> x, std::span<double> out) const override;

  /// Lowest index i attaining max_i f(x, y_i).
  std::size_t active_index(std::span<const double> x) const;

  const OuterPoint& outer_point() const { return w_; }
  const MinMaxProblem& source() const { return *problem_; }

 private:
  const MinMaxProblem* problem_;
  OuterPoint w_;
};

/// F(x, w); throws std::domain_error when x is outside X.
double inner_objective_F(const InnerProblem& inner, std::span<const double> x);

/// max_i f(x, y_i) - t; nonpositive exactly when (t, x) lies in K(w).
double feasibility_residual(const InnerProblem& inner, double t, std::span<const double> x);

}  // namespace exotic
