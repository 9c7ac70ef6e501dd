#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"
#include "exotic/baselines.hpp"
#include "exotic/errors.hpp"

using namespace exotic;

namespace {

BaselineConfig from(Vector x0, Vector y0, double step, int iters) {
  BaselineConfig c;
  c.x0 = std::move(x0);
  c.y0 = std::move(y0);
  c.step_x = c.step_y = step;
  c.iterations = iters;
  return c;
}

}  // namespace

TEST_CASE("one hand-computed step on the bilinear toy") {
  const auto p = bilinear_toy();
  const auto g = run_gda(p, from({1}, {1}, 0.1, 1));
  CHECK(g.x[0] == doctest::Approx(0.9));
  CHECK(g.y[0] == doctest::Approx(1.0));
  const auto a = run_agp(p, from({1}, {1}, 0.1, 1));
  CHECK(a.x[0] == doctest::Approx(0.9));
  CHECK(a.y[0] == doctest::Approx(1.0));
  // AGP's y step sees the updated x = 0.45.
  const auto a2 = run_agp(p, from({0.5}, {0.5}, 0.1, 1));
  CHECK(a2.x[0] == doctest::Approx(0.45));
  CHECK(a2.y[0] == doctest::Approx(0.545));
  const auto g2 = run_gda(p, from({0.5}, {0.5}, 0.1, 1));
  CHECK(g2.y[0] == doctest::Approx(0.55));
}

TEST_CASE("stationary start stays put") {
  const auto p = handcrafted_problem(1, 1, 1);
  for (auto kind : {BaselineKind::Gda, BaselineKind::Agp}) {
    const auto r = run_baseline(kind, p, from({0}, {0}, 0.05, 500));
    CHECK(r.x[0] == 0.0);
    CHECK(r.y[0] == 0.0);
  }
}

TEST_CASE("zero iterations return the initial point") {
  const auto p = handcrafted_problem(1, 1, 4);
  const auto r = run_agp(p, from({0.3}, {-0.2}, 0.05, 0));
  CHECK(r.x == Vector{0.3});
  CHECK(r.y == Vector{-0.2});
  CHECK(r.value == doctest::Approx(p.f(Vector{0.3}, Vector{-0.2})));
}

TEST_CASE("baselines on handcrafted c=1 stall away from the optimum") {
  const auto p = handcrafted_problem(1, 1, 1);
  // grad_x f(1,-1) = -1 and grad_y f(1,-1) = -2 both point out of the box.
  const auto fixed = run_gda(p, from({1}, {-1}, 0.05, 50));
  CHECK(fixed.x == Vector{1});
  CHECK(fixed.y == Vector{-1});
  BaselineConfig cfg;
  const auto gda = run_sweep(BaselineKind::Gda, p, cfg, 125, 0, 4);
  const auto agp = run_sweep(BaselineKind::Agp, p, cfg, 125, 0, 4);
  int corner = 0, origin = 0;
  for (const auto& r : gda) {
    CHECK(p.x_domain.contains(r.x));
    CHECK(p.y_domain.contains(r.y));
    if (std::abs(r.x[0] - 1) < 0.05 && std::abs(r.y[0] + 1) < 0.05) ++corner;
  }
  for (const auto& r : agp)
    if (std::hypot(r.x[0], r.y[0]) < 0.15) ++origin;
  CHECK(corner >= 125 / 2);
  CHECK(origin >= 125 / 10);
  // Neither point is optimal: the optimum has x = 0.75.
  CHECK(std::abs(gda[0].x[0] - 0.75) > 0.1);
}

TEST_CASE("iterates stay in their domains") {
  const auto p = security_game_problem(table3_game());
  std::mt19937_64 rng(1);
  for (auto kind : {BaselineKind::Gda, BaselineKind::Agp}) {
    Vector x = p.x_domain.sample(rng), y = p.y_domain.sample(rng);
    for (int step = 0; step < 200; ++step) {
      const auto r = run_baseline(kind, p, from(x, y, 0.3, 1));
      REQUIRE(p.x_domain.contains(r.x, 1e-12));
      REQUIRE(p.y_domain.contains(r.y, 1e-12));
      x = r.x;
      y = r.y;
    }
  }
}

TEST_CASE("saddle residual") {
  const auto b = bilinear_toy();
  CHECK(saddle_residual(b, Vector{0}, Vector{0}, 0.1, 0.1) == 0.0);
  CHECK(saddle_residual(b, Vector{1}, Vector{1}, 1, 1) == doctest::Approx(1.0));
  CHECK(saddle_residual(handcrafted_problem(1, 1, 4), Vector{0}, Vector{0}, 0.5, 0.5) == 0.0);
  MinMaxProblem no_grad = b;
  no_grad.grad_y = nullptr;
  CHECK_THROWS_AS(saddle_residual(no_grad, Vector{0}, Vector{0}, 1, 1), UnsupportedProblemError);
  CHECK_THROWS_AS(run_gda(no_grad, BaselineConfig{}), UnsupportedProblemError);
}

TEST_CASE("GDA does not settle on the bilinear saddle") {
  const auto r = run_gda(bilinear_toy(), from({1}, {1}, 0.05, 1000));
  CHECK_FALSE(std::abs(r.value) <= 1e-3);
  CHECK(std::hypot(r.x[0], r.y[0]) >= 1.0);
}

TEST_CASE("sweep is reproducible and CSV parses") {
  const auto p = handcrafted_problem(1, 1, 4);
  BaselineConfig cfg;
  cfg.iterations = 300;
  const auto a = run_sweep(BaselineKind::Agp, p, cfg, 8, 42, 1);
  const auto b = run_sweep(BaselineKind::Agp, p, cfg, 8, 42, 3);
  std::ostringstream sa, sb;
  write_sweep_csv(sa, a);
  write_sweep_csv(sb, b);
  CHECK(sa.str() == sb.str());
  std::istringstream in(sa.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "seed,x,y,f,saddle_residual");
  int rows = 0;
  while (std::getline(in, line)) {
    int commas = 0;
    for (char ch : line) commas += ch == ',';
    CHECK(commas == 4);
    ++rows;
  }
  CHECK(rows == 8);
  CHECK(a[0].seed == 42);
  CHECK(a[7].seed == 49);
}

TEST_CASE("names and validation") {
  CHECK(baseline_from_string("gda") == BaselineKind::Gda);
  CHECK(baseline_from_string(to_string(BaselineKind::Agp)) == BaselineKind::Agp);
  CHECK_THROWS_AS(baseline_from_string("sgd"), std::invalid_argument);
  BaselineConfig c;
  c.step_x = 0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
}
