#include <cmath>
#include <random>

#include "doctest.h"
#include "exotic/problem.hpp"

using namespace exotic;

namespace {

double central_diff(const MinMaxProblem& p, Vector x, const Vector& y, std::size_t i) {
  const double h = 1e-6;
  Vector a = x, b = x;
  a[i] += h;
  b[i] -= h;
  return (p.f(a, y) - p.f(b, y)) / (2 * h);
}

}  // namespace

TEST_CASE("handcrafted evaluations") {
  const auto p = handcrafted_problem(1, 1, 4.0);
  CHECK(p.value(Vector{2.0}, Vector{0.5}) == doctest::Approx(0.875));
  CHECK(p.value(Vector{0.0}, Vector{0.0}) == 0.0);
  const auto q = handcrafted_problem(2, 1, 4.0);
  const Vector g = q.gradient_x(Vector{0.3, -2.0}, Vector{1.0});
  CHECK(g[0] == doctest::Approx(1.0));
  CHECK(g[1] == doctest::Approx(1.0));
  CHECK(p.outer_copies() == 2);
  CHECK(handcrafted_problem(2, 3, 14).outer_copies() == 3);
}

TEST_CASE("handcrafted optimum closed form") {
  auto o = handcrafted_optimum(1, 1);
  CHECK(o.value == doctest::Approx(0.25));
  CHECK(o.x_aggregate == doctest::Approx(0.75));
  CHECK(o.y_aggregates[0] == doctest::Approx(-1.0));
  CHECK(o.y_aggregates[1] == doctest::Approx(0.5));
  o = handcrafted_optimum(1, 2);
  CHECK(o.value == doctest::Approx(2.0));
  CHECK(o.x_aggregate == doctest::Approx(3.0));
  o = handcrafted_optimum(3, 3);
  CHECK(o.value == doctest::Approx(6.75));
  CHECK(o.x_aggregate == doctest::Approx(6.75));
  CHECK(o.y_aggregates[0] == doctest::Approx(-3.0));
  CHECK(o.y_aggregates[1] == doctest::Approx(1.5));
  CHECK(handcrafted_default_c(2, 3) == doctest::Approx(14.5));
}

TEST_CASE("handcrafted gradients match central differences") {
  std::mt19937_64 rng(1);
  const auto p = handcrafted_problem(2, 3, 5.0);
  for (int i = 0; i < 100; ++i) {
    const Vector x = p.x_domain.sample(rng), y = p.y_domain.sample(rng);
    const Vector gx = p.gradient_x(x, y);
    for (std::size_t k = 0; k < gx.size(); ++k) {
      const double fd = central_diff(p, x, y, k);
      CHECK(std::abs(gx[k] - fd) <= 1e-6 * std::max(1.0, std::abs(fd)));
    }
    const Vector gy = p.gradient_y(x, y);
    for (std::size_t k = 0; k < gy.size(); ++k) {
      Vector a = y, b = y;
      a[k] += 1e-6;
      b[k] -= 1e-6;
      const double fd = (p.f(x, a) - p.f(x, b)) / 2e-6;
      CHECK(std::abs(gy[k] - fd) <= 1e-6 * std::max(1.0, std::abs(fd)));
    }
  }
}

TEST_CASE("midpoint convexity of built-in convex problems") {
  CHECK(midpoint_convexity_violation(handcrafted_problem(2, 2, 4), 1000, 1) <= 1e-9);
  CHECK(midpoint_convexity_violation(bilinear_toy(), 1000, 2) <= 1e-9);
  CHECK(midpoint_convexity_violation(security_game_problem(table3_game()), 1000, 3) <= 1e-9);
  // The quartic problem is deliberately non-convex in x.
  CHECK(midpoint_convexity_violation(quartic_ncc_problem(), 1000, 4) > 0.0);
}

TEST_CASE("security game evaluations") {
  const auto g = table3_game();
  const auto p = security_game_problem(g);
  CHECK(p.dx() == 2);
  CHECK(p.dy() == 4);
  CHECK(p.outer_copies() == 2);
  CHECK(p.value(Vector{1, 0}, Vector{1, 0, 1, 0}) == doctest::Approx(2.1));
  CHECK(p.value(Vector{0.5, 0.5}, Vector{1, 0, 1, 0}) == doctest::Approx(1.8));
  double mean = 0;
  for (double c : g.cost) mean += c;
  mean /= static_cast<double>(g.cost.size());
  CHECK(p.value(Vector{0.5, 0.5}, Vector{0.5, 0.5, 0.5, 0.5}) == doctest::Approx(mean));
}

TEST_CASE("security cost invariant under swapping two adversaries") {
  GameSpec g;
  g.action_counts = {2, 3, 2};
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0, 1);
  g.cost.resize(12);
  for (auto& c : g.cost) c = u(rng);
  GameSpec s = g;
  s.action_counts = {2, 2, 3};
  for (std::size_t a = 0; a < 2; ++a)
    for (std::size_t b = 0; b < 3; ++b)
      for (std::size_t c = 0; c < 2; ++c) s.cost[a * 6 + c * 3 + b] = g.cost[a * 6 + b * 2 + c];
  const auto pg = security_game_problem(g), ps = security_game_problem(s);
  for (int i = 0; i < 50; ++i) {
    const Vector x = pg.x_domain.sample(rng), y = pg.y_domain.sample(rng);
    const Vector ys{y[3], y[4], y[0], y[1], y[2]};
    CHECK(pg.f(x, y) == doctest::Approx(ps.f(x, ys)).epsilon(1e-12));
  }
}

TEST_CASE("bilinear and quartic") {
  const auto b = bilinear_toy();
  CHECK(b.value(Vector{1}, Vector{1}) == 1.0);
  CHECK(b.value(Vector{0}, Vector{-0.7}) == 0.0);
  const auto q = quartic_ncc_problem();
  CHECK(q.value(Vector{1}, Vector{1}) == doctest::Approx(1 - 1 - 1 + 1));
}

TEST_CASE("game validation and json round trip") {
  GameSpec g;
  g.action_counts = {2, 2};
  g.cost = {1, 2, 3};
  CHECK_THROWS_AS(g.validate(), std::invalid_argument);
  g.cost = {1, 2, 3, NAN};
  CHECK_THROWS_AS(g.validate(), std::invalid_argument);
  const auto t = table3_game();
  const auto back = game_from_json(game_to_json(t));
  CHECK(back.action_counts == t.action_counts);
  CHECK(back.cost == t.cost);
  CHECK(back.protected_player == t.protected_player);
}

TEST_CASE("registry") {
  auto& reg = ProblemRegistry::instance();
  CHECK(reg.contains("handcrafted"));
  CHECK(reg.contains("security"));
  CHECK(reg.contains("bilinear"));
  CHECK(reg.contains("quartic-ncc"));
  reg.add("constant5", [](const nlohmann::json&) {
    MinMaxProblem p = bilinear_toy();
    p.name = "constant5";
    p.f = [](std::span<const double>, std::span<const double>) { return 5.0; };
    return p;
  });
  CHECK(reg.create("constant5", nlohmann::json::object()).value(Vector{0.1}, Vector{0.2}) == 5.0);
  CHECK_THROWS_AS(reg.create("nope", nlohmann::json::object()), std::invalid_argument);
}
