#include "exotic/reformulation.hpp"

#include <limits>
#include <stdexcept>
#include <string>

namespace exotic {

Vector OuterPoint::flatten() const {
  Vector out;
  for (const auto& c : components) out.insert(out.end(), c.begin(), c.end());
  return out;
}

OuterPoint OuterPoint::split(std::span<const double> flat, std::size_t copies) {
  if (copies == 0 || flat.size() % copies != 0) {
    throw std::invalid_argument("OuterPoint::split: size not divisible by copy count");
  }
  const std::size_t n = flat.size() / copies;
  OuterPoint w;
  w.components.reserve(copies);
  for (std::size_t i = 0; i < copies; ++i) {
    w.components.emplace_back(flat.begin() + i * n, flat.begin() + (i + 1) * n);
  }
  return w;
}

ProductDomain outer_domain(const MinMaxProblem& problem) {
  return problem.y_domain.power(problem.outer_copies());
}

InnerProblem::InnerProblem(const MinMaxProblem& problem, OuterPoint w)
    : problem_(&problem), w_(std::move(w)) {
  if (w_.components.size() != problem.outer_copies()) {
    throw std::invalid_argument("InnerProblem: outer point has " +
                                std::to_string(w_.components.size()) + " components, expected " +
                                std::to_string(problem.outer_copies()));
  }
  for (std::size_t i = 0; i < w_.components.size(); ++i) {
    if (!problem.y_domain.contains(w_.components[i], 1e-12)) {
      throw std::invalid_argument("InnerProblem: component " + std::to_string(i) +
                                  " lies outside the y-domain");
    }
  }
}

double InnerProblem::value(std::span<const double> x) const {
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& y : w_.components) best = std::max(best, problem_->f(x, y));
  return best;
}

std::size_t InnerProblem::active_index(std::span<const double> x) const {
  std::size_t arg = 0;
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < w_.components.size(); ++i) {
    const double v = problem_->f(x, w_.components[i]);
    if (v > best) {
      best = v;
      arg = i;
    }
  }
  return arg;
}

void InnerProblem::subgradient(std::span<const double> x, std::span<double> out) const {
  problem_->grad_x(x, w_.components[active_index(x)], out);
}

double InnerProblem::value_and_subgradient(std::span<const double> x, std::span<double> out) const {
  std::size_t arg = 0;
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < w_.components.size(); ++i) {
    const double v = problem_->f(x, w_.components[i]);
    if (v > best) {
      best = v;
      arg = i;
    }
  }
  problem_->grad_x(x, w_.components[arg], out);
  return best;
}

double inner_objective_F(const InnerProblem& inner, std::span<const double> x) {
  if (!inner.domain().contains(x, 1e-12)) {
    throw std::domain_error("inner_objective_F: x lies outside the x-domain");
  }
  return inner.value(x);
}

double feasibility_residual(const InnerProblem& inner, double t, std::span<const double> x) {
  return inner.value(x) - t;
}

}  // namespace exotic
