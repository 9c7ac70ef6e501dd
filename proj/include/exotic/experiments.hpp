#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "exotic/baselines.hpp"
#include "exotic/exotic.hpp"
#include "exotic/oracles.hpp"
#include "exotic/problem.hpp"
#include "exotic/theory.hpp"
#include "json.hpp"

namespace exotic {

/// Malformed or inconsistent experiment configuration (CLI exit code 2).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class Algorithm { Exotic, ExoticNcc, Gda, Agp, Oracle };
std::string to_string(Algorithm a);
Algorithm algorithm_from_string(const std::string& s);

/// Everything a `solve` / `trace-dump` run needs. JSON layout:
///
///   {"problem": "handcrafted", "params": {"dx": 1, "dy": 1, "c": 4},
///    "algorithm": "exotic|exotic-ncc|gda|agp|oracle",
///    "exotic": {"budget", "h_max", "arity", "step_size", "selection",
///               "step_rule", "kink_probe", "budget_log", "threads"},
///    "baseline": {"step_x", "step_y", "iterations", "x0", "y0"},
///    "oracle": {"grid", "y_grid"},
///    "output": "path", "format": "json|csv", "repetitions": 1,
///    "seed": 0, "timing": true}
///
/// Every key is optional; unknown keys anywhere are rejected.
struct ExperimentConfig {
  std::string problem = "handcrafted";
  nlohmann::json params = nlohmann::json::object();
  Algorithm algorithm = Algorithm::Exotic;
  ExoticConfig exotic;
  BaselineConfig baseline;
  GridSpec grid;
  std::optional<std::string> output;
  std::string format = "json";
  int repetitions = 1;
  std::uint64_t seed = 0;
  /// Off: timing fields are null/empty so reports are byte-identical.
  bool timing = true;

  /// EXOTIC defaults to budget n = 1e5.
  ExperimentConfig();

  /// Throws ConfigError.
  void validate() const;
};

ExperimentConfig experiment_from_json(const nlohmann::json& doc);
nlohmann::json experiment_to_json(const ExperimentConfig& config);
/// Applies the keys of `doc` on top of `base` (same schema as above).
void merge_experiment_json(ExperimentConfig& base, const nlohmann::json& doc);

/// Builds the configured problem; unknown problems or parameters throw ConfigError.
MinMaxProblem make_problem(const ExperimentConfig& config);
/// The game behind a "security" problem.
GameSpec make_game(const ExperimentConfig& config);

/// Runs the configured algorithm `repetitions` times (baseline repetitions use
/// seeds seed, seed+1, ...) and returns the report document.
nlohmann::json run_solve(const ExperimentConfig& config);
/// CSV form of a solve report: repetition,seed,algorithm,value,x,y,iterations,time.
void write_solve_csv(std::ostream& out, const nlohmann::json& report);

/// Tree (EXOTIC) or per-iteration value trace (baselines) of one run.
nlohmann::json run_trace_dump(const ExperimentConfig& config);

struct Table1Spec {
  std::size_t dx;
  std::size_t dy;
  int h_max;
};

/// All benchmark rows with their published depths.
std::vector<Table1Spec> table1_all_rows();
/// Rows with dx * dy <= 9.
bool table1_is_desk_scale(const Table1Spec& row);

struct Table1Row {
  std::size_t dx = 0;
  std::size_t dy = 0;
  double opt_true = 0.0;
  double g_hat = 0.0;
  double percent_error = 0.0;
  int h_max = 0;
  std::optional<double> runtime_seconds;
};

struct Table1Options {
  bool force = false;       // allow rows with dx * dy > 9
  bool timing = true;
  int threads = 1;          // rows run concurrently
  InnerSolverConfig inner;
  int arity = 3;
};

/// Runs the selected rows on the handcrafted family with c = 3 dy^2/dx + 1.
/// Oversized rows without `force` throw ConfigError.
std::vector<Table1Row> run_table1(const std::vector<Table1Spec>& rows, const Table1Options& options);
void write_table1_csv(std::ostream& out, const std::vector<Table1Row>& rows);

struct SecurityCompareOptions {
  int runs = 25;
  std::uint64_t seed = 0;
  ExoticConfig exotic;          // defaults: n = 1e6, eta = 10
  BaselineConfig baseline;
  int threads = 1;
  double tolerance = 1e-6;

  SecurityCompareOptions();
};

struct SecurityCompareRow {
  std::string algorithm;
  std::uint64_t seed = 0;
  Vector x_alg;
  Vector y_alg;
  /// c1(x_EXOTIC, adversaries from the baseline run).
  double exotic_vs_alg = 0.0;
  /// c1(x_alg, worst-case pure response).
  double alg_vs_worst = 0.0;
  bool ordering1 = false;  // exotic_vs_alg <= exotic security level + tol
  bool ordering2 = false;  // exotic security level <= alg_vs_worst + tol
};

struct SecurityCompareResult {
  double exotic_estimate = 0.0;  // G-hat
  /// c1(x_EXOTIC, worst-case pure response): the value the orderings use.
  double exotic_security = 0.0;
  Vector x_exotic;
  double exact_value = 0.0;
  Vector exact_strategy;
  std::vector<SecurityCompareRow> rows;

  bool all_orderings_hold() const;
};

SecurityCompareResult run_security_compare(const GameSpec& game, const SecurityCompareOptions& options);
/// Columns: algorithm,seed,x_alg,y_alg,exotic_value,exotic_vs_alg,alg_vs_worst,ordering1,ordering2.
void write_security_csv(std::ostream& out, const SecurityCompareResult& result);

struct BoundsOptions {
  TheoryParams params;
  std::vector<long long> budgets{1000, 10000, 100000, 1000000};
  /// Empirical gaps |Opt - G-hat| on the handcrafted family; off leaves the column empty.
  bool empirical = true;
  std::size_t dx = 1;
  std::size_t dy = 1;
  std::optional<double> c;
  InnerSolverConfig inner;
  int threads = 1;
  LinearBoundForm linear_form = LinearBoundForm::Rederived;
};

struct BoundsRow {
  long long n = 0;
  std::optional<double> empirical_gap;
  double sublinear = 0.0;
  bool sublinear_condition = false;
  double linear = 0.0;
  bool linear_condition = false;
};

std::vector<BoundsRow> run_bounds(const BoundsOptions& options);
/// Columns: n,empirical_gap,sublinear_bound,linear_bound,sublinear_branch,linear_branch.
void write_bounds_csv(std::ostream& out, const std::vector<BoundsRow>& rows);

/// Shortest round-trip decimal form used by every CSV writer.
std::string format_number(double v);
/// Vector as ';'-joined numbers.
std::string format_vector(std::span<const double> v);

}  // namespace exotic
