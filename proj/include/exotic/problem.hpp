#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "exotic/domain.hpp"
#include "json.hpp"

namespace exotic {

using ObjectiveFn = std::function<double(std::span<const double> x, std::span<const double> y)>;
/// Writes a gradient into `out` (sized to the differentiated variable).
using GradientFn =
    std::function<void(std::span<const double> x, std::span<const double> y, std::span<double> out)>;

/// min_{x in X} max_{y in Y} f(x, y) with f convex in x for every fixed y.
///
/// Instances are immutable after construction and may be shared across
/// threads. `grad_y` is optional; only the gradient baselines need it.
struct MinMaxProblem {
  std::string name;
  ObjectiveFn f;
  GradientFn grad_x;
  GradientFn grad_y;
  ProductDomain x_domain;
  ProductDomain y_domain;

  std::size_t dx() const { return x_domain.dimension(); }
  std::size_t dy() const { return y_domain.dimension(); }
  bool has_grad_y() const { return static_cast<bool>(grad_y); }

  /// Number of y-copies in the max-min reformulation: affine dimension of X
  /// plus one. Equals dx + 1 for boxes; a simplex over m actions needs m.
  std::size_t outer_copies() const { return x_domain.affine_dimension() + 1; }

  double value(std::span<const double> x, std::span<const double> y) const { return f(x, y); }
  Vector gradient_x(std::span<const double> x, std::span<const double> y) const;
  Vector gradient_y(std::span<const double> x, std::span<const double> y) const;
};

/// Finite N-player game, seen from the protected player's cost.
struct GameSpec {
  std::vector<std::size_t> action_counts;
  std::size_t protected_player = 0;
  /// Row-major over joint actions (first player's action is most significant).
  std::vector<double> cost;

  std::size_t num_players() const { return action_counts.size(); }
  std::size_t joint_action_count() const;
  /// Throws std::invalid_argument when the shape or entries are malformed.
  void validate() const;

  double entry(std::span<const std::size_t> joint_action) const;
};

/// Expected cost sum_a (prod_k s_k(a_k)) c(a); one mixed strategy per player.
double expected_cost(const GameSpec& game, std::span<const Vector> strategies);

GameSpec game_from_json(const nlohmann::json& doc);
nlohmann::json game_to_json(const GameSpec& game);
GameSpec load_game(const std::string& path);

/// Three players, two actions each; protected player 0.
GameSpec table3_game();

/// f(x, y) = -(1'y)^3 + (1'x)(1'y) on [-c,c]^dx x [-1,1]^dy.
MinMaxProblem handcrafted_problem(std::size_t dx, std::size_t dy, double c);

struct HandcraftedOptimum {
  double value;
  double x_aggregate;                 // 1'x at the optimum
  std::array<double, 2> y_aggregates; // admissible values of 1'y
};

/// Closed-form optimum of the handcrafted family. Guaranteed only for
/// c > 3 dy^2 / dx; smaller c may move the optimum.
HandcraftedOptimum handcrafted_optimum(std::size_t dx, std::size_t dy);

/// Smallest c used by the benchmark tables: 3 dy^2 / dx + 1.
double handcrafted_default_c(std::size_t dx, std::size_t dy);

/// Security-value problem: x is the protected player's mixed strategy, y
/// stacks the opponents' mixed strategies in player order.
MinMaxProblem security_game_problem(const GameSpec& game);

/// f(x, y) = x y on [-1,1]^2.
MinMaxProblem bilinear_toy();

/// f(x, y) = x^4 - x^2 - y^2 + x y on [-2,2]^2: non-convex in x, concave in y.
MinMaxProblem quartic_ncc_problem();

/// Largest midpoint-convexity violation f((a+b)/2, y) - (f(a,y)+f(b,y))/2
/// seen on `samples` random triples; <= 0 means none found.
double midpoint_convexity_violation(const MinMaxProblem& problem, int samples, std::uint64_t seed);

/// Name -> factory lookup used by the CLI. Factories take a JSON object of
/// parameters. The built-ins are registered on first use.
class ProblemRegistry {
 public:
  using Factory = std::function<MinMaxProblem(const nlohmann::json& params)>;

  static ProblemRegistry& instance();

  void add(const std::string& name, Factory factory);
  bool contains(const std::string& name) const;
  MinMaxProblem create(const std::string& name, const nlohmann::json& params) const;
  std::vector<std::string> names() const;

 private:
  ProblemRegistry();
  std::map<std::string, Factory> factories_;
};

}  // namespace exotic
