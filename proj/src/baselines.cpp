#include "exotic/baselines.hpp"

#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

#include "exotic/errors.hpp"
#include "exotic/parallel.hpp"

namespace exotic {

namespace {

void require_gradients(const MinMaxProblem& problem) {
  if (!problem.grad_x || !problem.has_grad_y()) {
    throw UnsupportedProblemError("problem '" + problem.name + "' lacks the gradients the baselines need");
  }
}

std::pair<Vector, Vector> initial_point(const MinMaxProblem& problem, const BaselineConfig& config) {
  std::mt19937_64 rng(config.seed);
  Vector x = config.x0 ? problem.x_domain.project(*config.x0) : problem.x_domain.sample(rng);
  Vector y = config.y0 ? problem.y_domain.project(*config.y0) : problem.y_domain.sample(rng);
  if (x.size() != problem.dx() || y.size() != problem.dy()) {
    throw std::invalid_argument("baseline: initial point has the wrong dimension");
  }
  return {std::move(x), std::move(y)};
}

Vector step(const ProductDomain& domain, const Vector& z, const Vector& g, double scale) {
  Vector out(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) out[i] = z[i] + scale * g[i];
  return domain.project(out);
}

template <bool Alternating>
BaselineResult run_dynamics(const MinMaxProblem& problem, const BaselineConfig& config) {
  config.validate();
  require_gradients(problem);
  auto [x, y] = initial_point(problem, config);
  Vector gx(x.size()), gy(y.size());
  BaselineResult result;
  if (config.record_trace) result.trace.reserve(static_cast<std::size_t>(config.iterations));
  for (int k = 0; k < config.iterations; ++k) {
    problem.grad_x(x, y, gx);
    if constexpr (Alternating) {
      x = step(problem.x_domain, x, gx, -config.step_x);
      problem.grad_y(x, y, gy);
    } else {
      problem.grad_y(x, y, gy);
      x = step(problem.x_domain, x, gx, -config.step_x);
    }
    y = step(problem.y_domain, y, gy, config.step_y);
    if (config.record_trace) result.trace.push_back(problem.f(x, y));
  }
  result.value = problem.f(x, y);
  result.x = std::move(x);
  result.y = std::move(y);
  return result;
}

std::string join(const Vector& v) {
  std::ostringstream s;
  s.precision(17);
  for (std::size_t i = 0; i < v.size(); ++i) s << (i ? ";" : "") << v[i];
  return s.str();
}

}  // namespace

void BaselineConfig::validate() const {
  if (!(step_x > 0.0) || !(step_y > 0.0)) throw std::invalid_argument("baseline: steps must be > 0");
  if (iterations < 0) throw std::invalid_argument("baseline: iterations must be >= 0");
}

BaselineResult run_gda(const MinMaxProblem& problem, const BaselineConfig& config) {
  return run_dynamics<false>(problem, config);
}

BaselineResult run_agp(const MinMaxProblem& problem, const BaselineConfig& config) {
  return run_dynamics<true>(problem, config);
}

double saddle_residual(const MinMaxProblem& problem, std::span<const double> x, std::span<const double> y,
                       double beta, double gamma) {
  require_gradients(problem);
  if (!(beta > 0.0) || !(gamma > 0.0)) throw std::invalid_argument("saddle_residual: steps must be > 0");
  const Vector xv(x.begin(), x.end()), yv(y.begin(), y.end());
  const Vector gx = problem.gradient_x(x, y);
  const Vector gy = problem.gradient_y(x, y);
  const Vector px = step(problem.x_domain, xv, gx, -1.0 / beta);
  const Vector py = step(problem.y_domain, yv, gy, 1.0 / gamma);
  double sq = 0.0;
  for (std::size_t i = 0; i < xv.size(); ++i) sq += std::pow(beta * (xv[i] - px[i]), 2);
  for (std::size_t i = 0; i < yv.size(); ++i) sq += std::pow(gamma * (yv[i] - py[i]), 2);
  return std::sqrt(sq);
}

std::string to_string(BaselineKind kind) { return kind == BaselineKind::Gda ? "gda" : "agp"; }

BaselineKind baseline_from_string(const std::string& s) {
  if (s == "gda") return BaselineKind::Gda;
  if (s == "agp") return BaselineKind::Agp;
  throw std::invalid_argument("unknown baseline '" + s + "' (expected gda|agp)");
}

BaselineResult run_baseline(BaselineKind kind, const MinMaxProblem& problem, const BaselineConfig& config) {
  return kind == BaselineKind::Gda ? run_gda(problem, config) : run_agp(problem, config);
}

std::vector<SweepRow> run_sweep(BaselineKind kind, const MinMaxProblem& problem, const BaselineConfig& config,
                                int runs, std::uint64_t base_seed, int threads) {
  if (runs < 0) throw std::invalid_argument("run_sweep: runs must be >= 0");
  config.validate();
  require_gradients(problem);
  std::vector<SweepRow> rows(static_cast<std::size_t>(runs));
  parallel_for(rows.size(), resolve_threads(threads), [&](std::size_t r) {
    BaselineConfig c = config;
    c.seed = base_seed + r;
    c.x0.reset();
    c.y0.reset();
    c.record_trace = false;
    BaselineResult res = run_baseline(kind, problem, c);
    SweepRow& row = rows[r];
    row.seed = c.seed;
    row.residual = saddle_residual(problem, res.x, res.y, c.step_x, c.step_y);
    row.value = res.value;
    row.x = std::move(res.x);
    row.y = std::move(res.y);
  });
  return rows;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << "seed,x,y,f,saddle_residual\n";
  std::ostringstream line;
  line.precision(17);
  for (const auto& r : rows) {
    line.str("");
    line << r.seed << ',' << join(r.x) << ',' << join(r.y) << ',' << r.value << ',' << r.residual << '\n';
    out << line.str();
  }
}

}  // namespace exotic
