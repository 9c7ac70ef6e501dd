#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "exotic/inner_solver.hpp"
#include "exotic/partition.hpp"
#include "exotic/problem.hpp"
#include "exotic/reformulation.hpp"
#include "json.hpp"

namespace exotic {

/// Logarithm used in the budget -> depth mapping.
enum class BudgetLog { Natural, Binary };

struct ExoticConfig {
  /// Total inner-solver iterations n. Exactly one of budget / h_max is set.
  std::optional<long long> budget;
  std::optional<int> h_max;
  int arity = 3;
  InnerSolverConfig inner;
  BudgetLog budget_log = BudgetLog::Natural;
  /// Only used by optional sampling diagnostics; the search is deterministic.
  std::uint64_t seed = 0;
  /// Sibling evaluations run on up to this many threads (capped by
  /// EXOTIC_THREADS). Results do not depend on it.
  int threads = 1;
  /// Keep the final tree in the report (for trace dumps).
  bool record_tree = false;

  void validate() const;
  int resolved_h_max() const;
};

struct RunReport {
  double value = 0.0;                   // G-hat
  OuterPoint w;                         // w-hat
  Vector x;                             // inner solution at w-hat
  long long total_inner_iterations = 0;
  long long nodes_expanded = 0;
  std::size_t node_count = 0;
  int h_max = 0;
  /// expansions_per_depth[h] / skipped_per_depth[h]: Phase II selections at
  /// depth h that succeeded / found no eligible leaf.
  std::vector<int> expansions_per_depth;
  std::vector<int> skipped_per_depth;
  double wall_time_seconds = 0.0;
  std::optional<Tree> tree;

  /// {value, w, x, iterations, nodes, time, ...}; `time` is null when
  /// include_time is false so reports can be compared byte for byte.
  nlohmann::json to_json(bool include_time = true) const;
};

/// floor(2n / (5K (1 + log n)^2)). Throws BudgetTooSmallError (which names
/// the smallest admissible n) when the result would be 0.
int budget_to_hmax(long long n, int arity, BudgetLog log = BudgetLog::Natural);

/// Upper bound on the iterations Algorithm 1 spends for a given h_max:
/// K h + sum_h sum_m K floor(h/(h'm)) + (floor(log2 h) + 1) floor(h/2).
long long iteration_count_bound(int h_max, int arity);

/// Among depth-h leaves with count >= threshold, the one with the largest
/// value (ties to the lowest position); nullopt when none qualifies.
std::optional<std::size_t> eligible_leaf(const Tree& tree, int depth, int threshold);

/// The max-min problem the tree search works on: maximize over the outer
/// domain the value returned by `evaluate` (an upper estimate of the inner
/// minimum, warm-started from `init`).
struct SearchSpace {
  ProductDomain outer;
  std::size_t copies = 1;
  Vector inner_start;
  std::function<InnerSolution(const OuterPoint& w, const Vector& init, int iterations)> evaluate;
};

/// Initialization, tree expansion and re-evaluation over `space`.
RunReport optimistic_tree_search(const SearchSpace& space, const ExoticConfig& config);

/// Convex-non-concave min-max through the max-min reformulation over
/// W = Y^(copies). Errors in inner solves surface as SolverError.
RunReport run_exotic(const MinMaxProblem& problem, const ExoticConfig& config);

/// Non-convex-concave min_x max_y f: searches x directly against the convex
/// inner problem min_y -f(x, y) and negates the result. Requires grad_y. In
/// the report, x holds the min player's point and w the single y component.
RunReport solve_ncc(const MinMaxProblem& problem, const ExoticConfig& config);

}  // namespace exotic
