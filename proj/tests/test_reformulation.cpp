#include <cmath>
#include <random>

#include "doctest.h"
#include "exotic/inner_solver.hpp"
#include "exotic/reformulation.hpp"
#include "support.hpp"

using namespace exotic;

TEST_CASE("outer domain shapes") {
  CHECK(outer_domain(handcrafted_problem(1, 1, 4)).dimension() == 2);
  CHECK(outer_domain(handcrafted_problem(2, 3, 14)).dimension() == 9);
  const auto sec = outer_domain(security_game_problem(table3_game()));
  CHECK(sec.dimension() == 8);
  CHECK(sec.factors().size() == 4);
  CHECK(sec.affine_dimension() == 4);
}

TEST_CASE("outer point split and flatten") {
  const Vector flat{1, 2, 3, 4, 5, 6};
  const auto w = OuterPoint::split(flat, 3);
  REQUIRE(w.components.size() == 3);
  CHECK(w.components[1] == Vector{3, 4});
  CHECK(w.flatten() == flat);
  CHECK_THROWS(OuterPoint::split(flat, 4));
}

TEST_CASE("F evaluations") {
  const auto p = handcrafted_problem(1, 1, 4);
  const InnerProblem inner(p, OuterPoint{{{-1.0}, {0.5}}});
  CHECK(inner_objective_F(inner, Vector{0.75}) == doctest::Approx(0.25));
  CHECK(inner.active_index(Vector{0.0}) == 0);
  CHECK(inner.active_index(Vector{2.0}) == 1);
  const InnerProblem same(p, OuterPoint{{{0.3}, {0.3}}});
  CHECK(inner_objective_F(same, Vector{1.7}) == doctest::Approx(p.f(Vector{1.7}, Vector{0.3})));
  const auto b = bilinear_toy();
  const InnerProblem zero(b, OuterPoint{{{0.0}, {0.0}}});
  CHECK(inner_objective_F(zero, Vector{0.9}) == 0.0);
  CHECK_THROWS_AS(inner_objective_F(inner, Vector{5.0}), std::domain_error);
  CHECK_THROWS_AS(InnerProblem(p, OuterPoint{{{2.0}, {0.5}}}), std::invalid_argument);
  CHECK_THROWS_AS(InnerProblem(p, OuterPoint{{{0.0}}}), std::invalid_argument);
}

TEST_CASE("feasibility residual") {
  const auto p = handcrafted_problem(1, 1, 4);
  const InnerProblem inner(p, OuterPoint{{{-1.0}, {0.5}}});
  const double F = inner_objective_F(inner, Vector{0.3});
  CHECK(feasibility_residual(inner, F, Vector{0.3}) == 0.0);
  CHECK(feasibility_residual(inner, F + 1, Vector{0.3}) == doctest::Approx(-1.0));
  CHECK(feasibility_residual(inner, 0.0, Vector{0.0}) == doctest::Approx(1.0));
}

TEST_CASE("subgradient comes from the active component") {
  const auto p = handcrafted_problem(1, 1, 4);
  const InnerProblem inner(p, OuterPoint{{{-1.0}, {0.5}}});
  Vector g(1);
  inner.subgradient(Vector{0.0}, g);
  CHECK(g[0] == doctest::Approx(-1.0));
  inner.subgradient(Vector{3.0}, g);
  CHECK(g[0] == doctest::Approx(0.5));
}

TEST_CASE("degenerate w matches a line search of f") {
  const auto p = handcrafted_problem(1, 1, 4);
  for (double y0 : {-0.8, -0.2, 0.0, 0.4, 0.9}) {
    const InnerProblem inner(p, OuterPoint{{{y0}, {y0}}});
    const double solver = estimate_G(inner, Vector{0.0}, 2000);
    const double ref = testsupport::golden_min([&](double x) { return p.f(Vector{x}, Vector{y0}); }, -4, 4);
    CHECK(solver == doctest::Approx(ref).epsilon(1e-6).scale(1.0));
  }
}

TEST_CASE("subset bound: G(w) never exceeds the min-max value") {
  const auto p = handcrafted_problem(1, 1, 4);
  const auto ys = testsupport::linspace(-1, 1, 401);
  const auto xs = testsupport::linspace(-4, 4, 801);
  const double minmax = testsupport::brute_minmax_1d(
      [&](double x, double y) { return p.f(Vector{x}, Vector{y}); }, xs, ys);
  std::mt19937_64 rng(2);
  const auto W = outer_domain(p);
  for (int i = 0; i < 50; ++i) {
    const auto w = OuterPoint::split(W.sample(rng), 2);
    const InnerProblem inner(p, w);
    const double G = testsupport::golden_min(
        [&](double x) { return inner_objective_F(inner, Vector{x}); }, -4, 4);
    CHECK(G <= minmax + 1e-2);
  }
}

TEST_CASE("grid max of G over W equals grid min-max on the bilinear toy") {
  const auto p = bilinear_toy();
  const auto grid = testsupport::linspace(-1, 1, 41);
  double best = -1e300;
  for (double a : grid)
    for (double b : grid) {
      const InnerProblem inner(p, OuterPoint{{{a}, {b}}});
      best = std::max(best, testsupport::golden_min(
                                [&](double x) { return inner_objective_F(inner, Vector{x}); }, -1, 1));
    }
  CHECK(std::abs(best) <= 1e-6);
}
