#pragma once

#include <cstddef>
#include <random>
#include <span>
#include <variant>
#include <vector>

namespace exotic {

using Vector = std::vector<double>;

/// Axis-aligned box [lower, upper] in R^n.
struct BoxDomain {
  Vector lower;
  Vector upper;

  BoxDomain() = default;
  BoxDomain(Vector lo, Vector hi);

  /// Cube [lo, hi]^n.
  static BoxDomain cube(std::size_t n, double lo, double hi);

  std::size_t dimension() const { return lower.size(); }
};

/// Probability simplex over `dimension` actions.
struct SimplexDomain {
  std::size_t dimension = 0;

  SimplexDomain() = default;
  explicit SimplexDomain(std::size_t m);
};

using DomainFactor = std::variant<BoxDomain, SimplexDomain>;

/// Cartesian product of boxes and simplices. A single box or simplex is a
/// product with one factor, so every problem domain in the library is a
/// ProductDomain.
///
/// Each factor also has a box "parameter space" used by the partition tree:
/// a box is its own parameterization, a simplex over m actions is
/// parameterized by m-1 stick-breaking coordinates in [0,1].
class ProductDomain {
 public:
  ProductDomain() = default;
  ProductDomain(BoxDomain box);          // NOLINT(google-explicit-constructor)
  ProductDomain(SimplexDomain simplex);  // NOLINT(google-explicit-constructor)
  explicit ProductDomain(std::vector<DomainFactor> factors);

  const std::vector<DomainFactor>& factors() const { return factors_; }

  /// Ambient dimension (sum of factor dimensions).
  std::size_t dimension() const { return dimension_; }
  /// Dimension of the affine hull: a simplex over m actions counts m-1.
  std::size_t affine_dimension() const;
  /// Number of stick-breaking/box parameters.
  std::size_t parameter_dimension() const { return parameter_dimension_; }

  bool contains(std::span<const double> point, double tol = 1e-12) const;

  /// Euclidean projection, factor by factor.
  Vector project(std::span<const double> point) const;

  /// Coordinate-wise box midpoints and barycenters of simplices.
  Vector center() const;

  /// Euclidean diameter of the set.
  double diameter() const;

  BoxDomain parameter_box() const;
  Vector from_parameters(std::span<const double> params) const;
  Vector to_parameters(std::span<const double> point) const;

  /// Uniform sample (Dirichlet(1) on simplices).
  Vector sample(std::mt19937_64& rng) const;

  /// `copies` copies of this domain, concatenated.
  ProductDomain power(std::size_t copies) const;

 private:
  void recompute();

  std::vector<DomainFactor> factors_;
  std::size_t dimension_ = 0;
  std::size_t parameter_dimension_ = 0;
};

Vector project_box(const BoxDomain& box, std::span<const double> point);

/// Sorting-based Euclidean projection onto the probability simplex.
Vector project_simplex(std::span<const double> point);

/// Stick-breaking map [0,1]^{m-1} -> simplex over m actions.
Vector stick_breaking(std::span<const double> params);
Vector inverse_stick_breaking(std::span<const double> probabilities);

double norm2(std::span<const double> v);
double distance(std::span<const double> a, std::span<const double> b);

}  // namespace exotic
