#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "exotic/problem.hpp"

namespace exotic {

/// Uniform grid over each domain factor. Box coordinates get
/// `points_per_dimension` evenly spaced values (endpoints included); a simplex
/// over m actions gets every point with coordinates in {0, 1/(p-1), ..., 1}.
struct GridSpec {
  int points_per_dimension = 101;
  /// Separate resolution for Y; unset means the same as X.
  std::optional<int> y_points_per_dimension;

  static constexpr double kMaxPoints = 1e7;

  int x_points() const { return points_per_dimension; }
  int y_points() const { return y_points_per_dimension.value_or(points_per_dimension); }
  /// Throws std::invalid_argument when a resolution is below 2.
  void validate() const;
};

/// All grid points of `domain`, in lexicographic index order. Throws
/// GridTooLargeError beyond `max_points`.
std::vector<Vector> grid_points(const ProductDomain& domain, int points_per_dimension,
                                double max_points = GridSpec::kMaxPoints);

struct GridMinMaxResult {
  double value = 0.0;
  Vector x;  // grid minimizer of the inner max
  Vector y;  // grid maximizer at that x
  std::size_t x_points = 0;
  std::size_t y_points = 0;
};

/// Brute-force min over grid-X of max over grid-Y. Ties go to the lowest
/// index. Throws GridTooLargeError when |grid-X| * |grid-Y| > 1e7.
GridMinMaxResult grid_minmax(const MinMaxProblem& problem, const GridSpec& grid);

struct SecurityValue {
  double value = 0.0;
  Vector strategy;  // protected player's mixed strategy
};

/// Exact security value of the protected player. The adversaries' best
/// response is always attained at a pure joint profile, so this minimizes a
/// maximum of linear functions over a simplex. Two own actions: exact 1-D
/// piecewise-linear minimization. Three or four: vertex enumeration of the
/// epigraph LP. More than four throws UnsupportedProblemError.
SecurityValue security_value_exact(const GameSpec& game);

struct WorstCaseResponse {
  /// One pure action per adversary, in player order (protected player skipped).
  std::vector<std::size_t> profile;
  double value = 0.0;
};

/// Adversary pure profile maximizing the protected player's expected cost
/// under `strategy`; the lexicographically lowest profile wins ties.
WorstCaseResponse worst_case_response(const GameSpec& game, std::span<const double> strategy);

/// Expected cost of `strategy` against a pure adversary profile.
double cost_against_profile(const GameSpec& game, std::span<const double> strategy,
                            std::span<const std::size_t> profile);

/// All pure adversary profiles in lexicographic order.
std::vector<std::vector<std::size_t>> adversary_profiles(const GameSpec& game);

}  // namespace exotic
