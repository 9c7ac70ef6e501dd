#pragma once

#include <span>

#include "exotic/domain.hpp"

namespace exotic {

/// A convex function over a ProductDomain, queried through values and
/// subgradients. This is what the inner solver minimizes.
class ConvexObjective {
 public:
  virtual ~ConvexObjective() = default;

  virtual const ProductDomain& domain() const = 0;
  virtual double value(std::span<const double> x) const = 0;
  virtual void subgradient(std::span<const double> x, std::span<double> out) const = 0;

  /// Value and a subgradient in one pass; override when they share work.
  virtual double value_and_subgradient(std::span<const double> x, std::span<double> out) const {
    subgradient(x, out);
    return value(x);
  }
};

}  // namespace exotic
