#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "exotic/problem.hpp"

namespace exotic {

struct BaselineConfig {
  double step_x = 0.05;  // beta
  double step_y = 0.05;  // gamma
  int iterations = 10000;
  /// Starting point; when unset, x0 and y0 are drawn uniformly from the
  /// domains with `seed`.
  std::optional<Vector> x0;
  std::optional<Vector> y0;
  std::uint64_t seed = 0;
  bool record_trace = false;

  /// Positive steps and iterations >= 0.
  void validate() const;
};

struct BaselineResult {
  Vector x;
  Vector y;
  double value = 0.0;          // f at the final iterate
  std::vector<double> trace;   // f after every iteration (record_trace)
};

/// Simultaneous projected gradient descent-ascent.
BaselineResult run_gda(const MinMaxProblem& problem, const BaselineConfig& config);

/// Alternating projected gradient: x first, then y at the updated x.
BaselineResult run_agp(const MinMaxProblem& problem, const BaselineConfig& config);

/// Norm of (beta (x - P_X(x - grad_x f / beta)), gamma (y - P_Y(y + grad_y f / gamma))).
double saddle_residual(const MinMaxProblem& problem, std::span<const double> x, std::span<const double> y,
                       double beta, double gamma);

enum class BaselineKind { Gda, Agp };
std::string to_string(BaselineKind kind);
BaselineKind baseline_from_string(const std::string& s);

BaselineResult run_baseline(BaselineKind kind, const MinMaxProblem& problem, const BaselineConfig& config);

struct SweepRow {
  std::uint64_t seed = 0;
  Vector x;
  Vector y;
  double value = 0.0;
  double residual = 0.0;
};

/// `runs` independent runs with seeds base_seed, base_seed+1, ... and random
/// initial points. Runs execute on up to `threads` workers; rows come back in
/// seed order.
std::vector<SweepRow> run_sweep(BaselineKind kind, const MinMaxProblem& problem, const BaselineConfig& config,
                                int runs, std::uint64_t base_seed, int threads = 1);

/// Header: seed,x,y,f,saddle_residual. Vectors are ';'-joined.
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

}  // namespace exotic
