#include "exotic/exotic.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>
#include <string>

#include "exotic/errors.hpp"
#include "exotic/parallel.hpp"

namespace exotic {

namespace {

double budget_log(double n, BudgetLog base) { return base == BudgetLog::Natural ? std::log(n) : std::log2(n); }

long long raw_hmax(long long n, int arity, BudgetLog base) {
  const double l = 1.0 + budget_log(double(n), base);
  return static_cast<long long>(std::floor(2.0 * double(n) / (5.0 * arity * l * l)));
}

// Negated slice y -> -f(x0, y): convex in y when f is concave in y.
class NegatedSlice final : public ConvexObjective {
 public:
  NegatedSlice(const MinMaxProblem& problem, Vector x) : problem_(&problem), x_(std::move(x)) {}

  const ProductDomain& domain() const override { return problem_->y_domain; }
  double value(std::span<const double> y) const override { return -problem_->f(x_, y); }
  void subgradient(std::span<const double> y, std::span<double> out) const override {
    problem_->grad_y(x_, y, out);
    for (auto& v : out) v = -v;
  }

 private:
  const MinMaxProblem* problem_;
  Vector x_;
};

}  // namespace

void ExoticConfig::validate() const {
  if (budget.has_value() == h_max.has_value()) {
    throw std::invalid_argument("ExoticConfig: set exactly one of budget and h_max");
  }
  if (budget && *budget < 1) throw std::invalid_argument("ExoticConfig: budget must be >= 1");
  if (h_max && *h_max < 1) throw std::invalid_argument("ExoticConfig: h_max must be >= 1");
  if (arity < 2) throw std::invalid_argument("ExoticConfig: arity must be >= 2");
  if (inner.step_size && !(*inner.step_size > 0.0)) {
    throw std::invalid_argument("ExoticConfig: inner step size must be > 0");
  }
}

int ExoticConfig::resolved_h_max() const {
  validate();
  return h_max ? *h_max : budget_to_hmax(*budget, arity, budget_log);
}

nlohmann::json RunReport::to_json(bool include_time) const {
  nlohmann::json j;
  j["value"] = value;
  j["w"] = w.components;
  j["x"] = x;
  j["iterations"] = total_inner_iterations;
  j["nodes"] = node_count;
  j["nodes_expanded"] = nodes_expanded;
  j["h_max"] = h_max;
  j["expansions_per_depth"] = expansions_per_depth;
  j["skipped_per_depth"] = skipped_per_depth;
  j["time"] = include_time ? nlohmann::json(wall_time_seconds) : nlohmann::json(nullptr);
  return j;
}

int budget_to_hmax(long long n, int arity, BudgetLog log) {
  if (arity < 2) throw std::invalid_argument("budget_to_hmax: arity must be >= 2");
  if (n < 1) throw std::invalid_argument("budget_to_hmax: budget must be >= 1");
  const long long h = raw_hmax(n, arity, log);
  if (h >= 1) {
    if (h > std::numeric_limits<int>::max()) throw std::invalid_argument("budget_to_hmax: budget too large");
    return static_cast<int>(h);
  }
  long long minimal = n;
  while (raw_hmax(minimal, arity, log) < 1) ++minimal;
  throw BudgetTooSmallError("budget " + std::to_string(n) + " gives h_max = 0 for K = " +
                                std::to_string(arity) + "; the smallest usable budget is " +
                                std::to_string(minimal),
                            minimal);
}

long long iteration_count_bound(int h_max, int arity) {
  long long total = static_cast<long long>(arity) * h_max;
  for (int h = 1; h <= h_max; ++h) {
    for (int m = 1; m <= h_max / h; ++m) total += static_cast<long long>(arity) * (h_max / (h * m));
  }
  const int reevaluations = static_cast<int>(std::floor(std::log2(double(h_max)))) + 1;
  total += static_cast<long long>(reevaluations) * (h_max / 2);
  return total;
}

std::optional<std::size_t> eligible_leaf(const Tree& tree, int depth, int threshold) {
  if (threshold < 1) throw std::invalid_argument("eligible_leaf: threshold must be >= 1");
  if (depth < 0 || depth > tree.max_depth()) return std::nullopt;
  std::optional<std::size_t> best;
  for (std::size_t id : tree.depth_index()[static_cast<std::size_t>(depth)]) {
    const TreeNode& n = tree.node(id);
    if (!n.is_leaf() || !n.evaluated || n.count < threshold) continue;
    if (!best || n.value > tree.node(*best).value) best = id;
  }
  return best;
}

RunReport optimistic_tree_search(const SearchSpace& space, const ExoticConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  const int h_max = config.resolved_h_max();
  const int arity = config.arity;
  const int threads = resolve_threads(config.threads);

  Tree tree(space.outer, space.copies, arity);
  RunReport report;
  report.h_max = h_max;
  report.expansions_per_depth.assign(static_cast<std::size_t>(h_max) + 1, 0);
  report.skipped_per_depth.assign(static_cast<std::size_t>(h_max) + 1, 0);

  auto solve = [&](std::size_t id, int iterations) {
    TreeNode& node = tree.node(id);
    InnerSolution sol;
    try {
      sol = space.evaluate(node.center, node.initializer, iterations);
    } catch (const std::exception& e) {
      throw SolverError(std::string("inner solve failed at node (depth ") +
                            std::to_string(node.cell.depth()) + ", index " +
                            std::to_string(node.depth_position) + "): " + e.what(),
                        node.cell.depth(), node.depth_position);
    }
    node.value = sol.t;
    node.initializer = std::move(sol.x);
    node.evaluated = true;
  };

  // Children of one expansion are independent solves; merge order is fixed
  // by the ids, so the thread count never changes the result.
  auto expand_and_evaluate = [&](std::size_t parent, int iterations) {
    const std::vector<std::size_t> kids = tree.expand(parent);
    for (std::size_t id : kids) {
      tree.node(id).initializer = parent == 0 ? space.inner_start : tree.node(parent).initializer;
    }
    parallel_for(kids.size(), threads, [&](std::size_t k) { solve(kids[k], iterations); });
    for (std::size_t id : kids) tree.node(id).count = iterations;
    report.total_inner_iterations += static_cast<long long>(iterations) * arity;
    ++report.nodes_expanded;
  };

  // Initialization: K depth-1 children, h_max iterations each.
  expand_and_evaluate(0, h_max);

  // Tree expansion.
  for (int h = 1; h <= h_max; ++h) {
    for (int m = 1; m <= h_max / h; ++m) {
      const int threshold = h_max / (h * m);
      const auto leaf = eligible_leaf(tree, h, threshold);
      if (!leaf) {
        ++report.skipped_per_depth[static_cast<std::size_t>(h)];
        continue;
      }
      expand_and_evaluate(*leaf, threshold);
      ++report.expansions_per_depth[static_cast<std::size_t>(h)];
    }
  }

  // Re-evaluation: for each p, the best node evaluated at least 2^p times
  // gets floor(h_max/2) more iterations from its latest solution.
  const int p_max = static_cast<int>(std::floor(std::log2(double(h_max))));
  const int reevaluation_iterations = h_max / 2;
  std::vector<std::size_t> selected;
  for (int p = 0; p <= p_max; ++p) {
    const long long need = 1LL << p;
    std::optional<std::size_t> best;
    for (std::size_t id = 1; id < tree.size(); ++id) {
      const TreeNode& n = tree.node(id);
      if (!n.evaluated || n.count < need) continue;
      if (!best || n.value > tree.node(*best).value) best = id;
    }
    if (!best) continue;
    if (reevaluation_iterations >= 1) {
      solve(*best, reevaluation_iterations);
      report.total_inner_iterations += reevaluation_iterations;
    }
    selected.push_back(*best);
  }

  std::size_t winner = selected.front();
  for (std::size_t id : selected) {
    if (tree.node(id).value > tree.node(winner).value) winner = id;
  }

  const TreeNode& out = tree.node(winner);
  report.value = out.value;
  report.w = out.center;
  report.x = out.initializer;
  report.node_count = tree.size();
  report.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (config.record_tree) report.tree = std::move(tree);
  return report;
}

RunReport run_exotic(const MinMaxProblem& problem, const ExoticConfig& config) {
  config.validate();
  SearchSpace space;
  space.outer = outer_domain(problem);
  space.copies = problem.outer_copies();
  space.inner_start = problem.x_domain.center();
  const InnerSolverConfig inner_config = config.inner;
  space.evaluate = [&problem, inner_config](const OuterPoint& w, const Vector& init, int iterations) {
    const InnerProblem inner(problem, w);
    return opt(inner, init, iterations, inner_config);
  };
  return optimistic_tree_search(space, config);
}

RunReport solve_ncc(const MinMaxProblem& problem, const ExoticConfig& config) {
  config.validate();
  if (!problem.has_grad_y()) {
    throw UnsupportedProblemError("solve_ncc: problem '" + problem.name + "' has no grad_y");
  }
  SearchSpace space;
  space.outer = problem.x_domain;
  space.copies = 1;
  space.inner_start = problem.y_domain.center();
  const InnerSolverConfig inner_config = config.inner;
  space.evaluate = [&problem, inner_config](const OuterPoint& w, const Vector& init, int iterations) {
    const NegatedSlice slice(problem, w.components.front());
    return opt(slice, init, iterations, inner_config);
  };
  RunReport report = optimistic_tree_search(space, config);
  report.value = -report.value;
  Vector y = std::move(report.x);
  report.x = report.w.components.front();
  report.w = OuterPoint{{std::move(y)}};
  return report;
}

}  // namespace exotic
