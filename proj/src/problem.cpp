#include "exotic/problem.hpp"

#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <stdexcept>

namespace exotic {

namespace {

double sum(std::span<const double> v) { return std::accumulate(v.begin(), v.end(), 0.0); }

// Advances a mixed-radix counter; returns false after the last joint action.
bool next_joint_action(std::vector<std::size_t>& a, std::span<const std::size_t> radix) {
  for (std::size_t k = a.size(); k-- > 0;) {
    if (++a[k] < radix[k]) return true;
    a[k] = 0;
  }
  return false;
}

std::vector<Vector> split_strategies(const GameSpec& game, std::span<const double> x,
                                     std::span<const double> y) {
  std::vector<Vector> s(game.num_players());
  std::size_t off = 0;
  for (std::size_t k = 0; k < game.num_players(); ++k) {
    if (k == game.protected_player) {
      s[k].assign(x.begin(), x.end());
    } else {
      s[k].assign(y.begin() + off, y.begin() + off + game.action_counts[k]);
      off += game.action_counts[k];
    }
  }
  return s;
}

// d/d s_player of the multilinear expected cost.
void partial_cost(const GameSpec& game, std::span<const Vector> s, std::size_t player,
                  std::span<double> out) {
  std::fill(out.begin(), out.end(), 0.0);
  std::vector<std::size_t> a(game.num_players(), 0);
  std::size_t flat = 0;
  do {
    double weight = game.cost[flat];
    for (std::size_t k = 0; k < a.size() && weight != 0.0; ++k) {
      if (k != player) weight *= s[k][a[k]];
    }
    out[a[player]] += weight;
    ++flat;
  } while (next_joint_action(a, game.action_counts));
}

}  // namespace

Vector MinMaxProblem::gradient_x(std::span<const double> x, std::span<const double> y) const {
  Vector g(dx());
  grad_x(x, y, g);
  return g;
}

Vector MinMaxProblem::gradient_y(std::span<const double> x, std::span<const double> y) const {
  if (!grad_y) throw std::invalid_argument("problem '" + name + "' has no grad_y");
  Vector g(dy());
  grad_y(x, y, g);
  return g;
}

std::size_t GameSpec::joint_action_count() const {
  return std::accumulate(action_counts.begin(), action_counts.end(), std::size_t{1},
                         std::multiplies<>());
}

void GameSpec::validate() const {
  if (action_counts.size() < 2) throw std::invalid_argument("GameSpec: needs at least 2 players");
  for (auto m : action_counts) {
    if (m == 0) throw std::invalid_argument("GameSpec: every player needs at least one action");
  }
  if (protected_player >= action_counts.size()) {
    throw std::invalid_argument("GameSpec: protected player index out of range");
  }
  if (cost.size() != joint_action_count()) {
    throw std::invalid_argument("GameSpec: cost tensor has " + std::to_string(cost.size()) +
                                " entries, shape requires " + std::to_string(joint_action_count()));
  }
  for (double c : cost) {
    if (!std::isfinite(c)) throw std::invalid_argument("GameSpec: cost entries must be finite");
  }
}

double GameSpec::entry(std::span<const std::size_t> joint_action) const {
  std::size_t flat = 0;
  for (std::size_t k = 0; k < action_counts.size(); ++k) flat = flat * action_counts[k] + joint_action[k];
  return cost.at(flat);
}

double expected_cost(const GameSpec& game, std::span<const Vector> strategies) {
  if (strategies.size() != game.num_players()) {
    throw std::invalid_argument("expected_cost: one strategy per player required");
  }
  double total = 0.0;
  std::vector<std::size_t> a(game.num_players(), 0);
  std::size_t flat = 0;
  do {
    double weight = game.cost[flat];
    for (std::size_t k = 0; k < a.size() && weight != 0.0; ++k) weight *= strategies[k][a[k]];
    total += weight;
    ++flat;
  } while (next_joint_action(a, game.action_counts));
  return total;
}

GameSpec game_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw std::invalid_argument("game: expected a JSON object");
  for (const auto& [key, _] : doc.items()) {
    if (key != "action_counts" && key != "protected" && key != "cost") {
      throw std::invalid_argument("game: unknown key '" + key + "'");
    }
  }
  GameSpec g;
  try {
    g.action_counts = doc.at("action_counts").get<std::vector<std::size_t>>();
    g.protected_player = doc.value("protected", std::size_t{0});
    g.cost = doc.at("cost").get<std::vector<double>>();
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("game: ") + e.what());
  }
  g.validate();
  return g;
}

nlohmann::json game_to_json(const GameSpec& game) {
  return {{"action_counts", game.action_counts},
          {"protected", game.protected_player},
          {"cost", game.cost}};
}

GameSpec load_game(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open game file '" + path + "'");
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument("game file '" + path + "': " + e.what());
  }
  return game_from_json(doc);
}

GameSpec table3_game() {
  GameSpec g;
  g.action_counts = {2, 2, 2};
  g.protected_player = 0;
  // (a1, a2, a3) with alpha = 0, beta = 1.
  g.cost = {2.1, 1.2, 1.5, 1.6, 1.5, 0.4, 1.5, 1.7};
  return g;
}

MinMaxProblem handcrafted_problem(std::size_t dx, std::size_t dy, double c) {
  if (dx == 0 || dy == 0) throw std::invalid_argument("handcrafted_problem: dx, dy must be >= 1");
  if (!(c > 0.0) || !std::isfinite(c)) throw std::invalid_argument("handcrafted_problem: c must be > 0");
  MinMaxProblem p;
  p.name = "handcrafted";
  p.x_domain = BoxDomain::cube(dx, -c, c);
  p.y_domain = BoxDomain::cube(dy, -1.0, 1.0);
  p.f = [](std::span<const double> x, std::span<const double> y) {
    const double sy = sum(y);
    return -sy * sy * sy + sum(x) * sy;
  };
  p.grad_x = [](std::span<const double>, std::span<const double> y, std::span<double> out) {
    std::fill(out.begin(), out.end(), sum(y));
  };
  p.grad_y = [](std::span<const double> x, std::span<const double> y, std::span<double> out) {
    const double sy = sum(y);
    std::fill(out.begin(), out.end(), -3.0 * sy * sy + sum(x));
  };
  return p;
}

HandcraftedOptimum handcrafted_optimum(std::size_t dx, std::size_t dy) {
  if (dx == 0 || dy == 0) throw std::invalid_argument("handcrafted_optimum: dx, dy must be >= 1");
  const double d = double(dy);
  return {0.25 * d * d * d, 0.75 * d * d, {-d, 0.5 * d}};
}

double handcrafted_default_c(std::size_t dx, std::size_t dy) {
  return 3.0 * double(dy) * double(dy) / double(dx) + 1.0;
}

MinMaxProblem security_game_problem(const GameSpec& game) {
  game.validate();
  std::vector<DomainFactor> adversaries;
  for (std::size_t k = 0; k < game.num_players(); ++k) {
    if (k != game.protected_player) adversaries.emplace_back(SimplexDomain(game.action_counts[k]));
  }
  MinMaxProblem p;
  p.name = "security";
  p.x_domain = SimplexDomain(game.action_counts[game.protected_player]);
  p.y_domain = ProductDomain(std::move(adversaries));
  p.f = [game](std::span<const double> x, std::span<const double> y) {
    const auto s = split_strategies(game, x, y);
    return expected_cost(game, s);
  };
  p.grad_x = [game](std::span<const double> x, std::span<const double> y, std::span<double> out) {
    const auto s = split_strategies(game, x, y);
    partial_cost(game, s, game.protected_player, out);
  };
  p.grad_y = [game](std::span<const double> x, std::span<const double> y, std::span<double> out) {
    const auto s = split_strategies(game, x, y);
    std::size_t off = 0;
    for (std::size_t k = 0; k < game.num_players(); ++k) {
      if (k == game.protected_player) continue;
      partial_cost(game, s, k, out.subspan(off, game.action_counts[k]));
      off += game.action_counts[k];
    }
  };
  return p;
}

MinMaxProblem bilinear_toy() {
  MinMaxProblem p;
  p.name = "bilinear";
  p.x_domain = BoxDomain::cube(1, -1.0, 1.0);
  p.y_domain = BoxDomain::cube(1, -1.0, 1.0);
  p.f = [](std::span<const double> x, std::span<const double> y) { return x[0] * y[0]; };
  p.grad_x = [](std::span<const double>, std::span<const double> y, std::span<double> out) {
    out[0] = y[0];
  };
  p.grad_y = [](std::span<const double> x, std::span<const double>, std::span<double> out) {
    out[0] = x[0];
  };
  return p;
}

MinMaxProblem quartic_ncc_problem() {
  MinMaxProblem p;
  p.name = "quartic-ncc";
  p.x_domain = BoxDomain::cube(1, -2.0, 2.0);
  p.y_domain = BoxDomain::cube(1, -2.0, 2.0);
  p.f = [](std::span<const double> x, std::span<const double> y) {
    const double a = x[0], b = y[0];
    return a * a * a * a - a * a - b * b + a * b;
  };
  p.grad_x = [](std::span<const double> x, std::span<const double> y, std::span<double> out) {
    out[0] = 4.0 * x[0] * x[0] * x[0] - 2.0 * x[0] + y[0];
  };
  p.grad_y = [](std::span<const double> x, std::span<const double> y, std::span<double> out) {
    out[0] = -2.0 * y[0] + x[0];
  };
  return p;
}

double midpoint_convexity_violation(const MinMaxProblem& problem, int samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  double worst = -std::numeric_limits<double>::infinity();
  Vector mid(problem.dx());
  for (int s = 0; s < samples; ++s) {
    const Vector a = problem.x_domain.sample(rng);
    const Vector b = problem.x_domain.sample(rng);
    const Vector y = problem.y_domain.sample(rng);
    for (std::size_t i = 0; i < mid.size(); ++i) mid[i] = 0.5 * (a[i] + b[i]);
    const double gap = problem.f(mid, y) - 0.5 * (problem.f(a, y) + problem.f(b, y));
    worst = std::max(worst, gap);
  }
  return worst;
}

ProblemRegistry& ProblemRegistry::instance() {
  static ProblemRegistry registry;
  return registry;
}

ProblemRegistry::ProblemRegistry() {
  add("handcrafted", [](const nlohmann::json& p) {
    const auto dx = p.value("dx", std::size_t{1});
    const auto dy = p.value("dy", std::size_t{1});
    const double c = p.value("c", handcrafted_default_c(dx, dy));
    return handcrafted_problem(dx, dy, c);
  });
  add("security", [](const nlohmann::json& p) {
    if (p.contains("game") && p["game"].is_string()) {
      return security_game_problem(load_game(p["game"].get<std::string>()));
    }
    if (p.contains("game") && p["game"].is_object()) return security_game_problem(game_from_json(p["game"]));
    return security_game_problem(table3_game());
  });
  add("bilinear", [](const nlohmann::json&) { return bilinear_toy(); });
  add("quartic-ncc", [](const nlohmann::json&) { return quartic_ncc_problem(); });
}

void ProblemRegistry::add(const std::string& name, Factory factory) {
  factories_[name] = std::move(factory);
}

bool ProblemRegistry::contains(const std::string& name) const { return factories_.count(name) != 0; }

MinMaxProblem ProblemRegistry::create(const std::string& name, const nlohmann::json& params) const {
  const auto it = factories_.find(name);
  if (it == factories_.end()) throw std::invalid_argument("unknown problem '" + name + "'");
  return it->second(params);
}

std::vector<std::string> ProblemRegistry::names() const {
  std::vector<std::string> out;
  for (const auto& [k, _] : factories_) out.push_back(k);
  return out;
}

}  // namespace exotic
