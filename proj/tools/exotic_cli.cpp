// exotic: command-line front end (solve, table1, security-compare, bounds, trace-dump).

#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "exotic/errors.hpp"
#include "exotic/experiments.hpp"

namespace {

using nlohmann::json;
using namespace exotic;

constexpr int kExitConfig = 2;
constexpr int kExitSolver = 3;

// Flags shared by solve and trace-dump. Every field is optional so that
// only flags given on the command line override the --config file.
struct ExperimentFlags {
  std::string config_path;
  std::optional<std::string> problem, game, algorithm, selection, step_rule, output, format;
  std::optional<std::size_t> dx, dy;
  std::optional<double> c, step_size, beta, gamma;
  std::optional<long long> budget;
  std::optional<int> h_max, arity, grid, y_grid, iterations, repetitions, threads;
  std::optional<std::uint64_t> seed;
  bool no_timing = false;
  bool no_kink_probe = false;

  void attach(CLI::App* app) {
    app->add_option("--config", config_path, "JSON experiment config")->check(CLI::ExistingFile);
    app->add_option("--problem", problem, "handcrafted|bilinear|quartic-ncc|security");
    app->add_option("--dx", dx, "handcrafted: dimension of x");
    app->add_option("--dy", dy, "handcrafted: dimension of y");
    app->add_option("--c", c, "handcrafted: half-width of the x box");
    app->add_option("--game", game, "security: game JSON file");
    app->add_option("--alg", algorithm, "exotic|exotic-ncc|gda|agp|oracle");
    app->add_option("--budget", budget, "EXOTIC: total inner iterations n");
    app->add_option("--hmax", h_max, "EXOTIC: maximum depth (instead of --budget)");
    app->add_option("--arity", arity, "EXOTIC: children per expansion K");
    app->add_option("--step-size", step_size, "EXOTIC: inner step eta (default diam(X)/10)");
    app->add_option("--selection", selection, "EXOTIC: best|last");
    app->add_option("--step-rule", step_rule, "EXOTIC: constant|inverse-sqrt");
    app->add_flag("--no-kink-probe", no_kink_probe, "EXOTIC: plain best-iterate selection");
    app->add_option("--grid", grid, "oracle: points per dimension");
    app->add_option("--y-grid", y_grid, "oracle: points per dimension for Y");
    app->add_option("--iterations", iterations, "gda/agp: iterations");
    app->add_option("--beta", beta, "gda/agp: x step");
    app->add_option("--gamma", gamma, "gda/agp: y step");
    app->add_option("--repetitions", repetitions, "number of runs");
    app->add_option("--seed", seed, "base seed");
    app->add_option("--threads", threads, "worker threads (capped by EXOTIC_THREADS)");
    app->add_option("-o,--output", output, "output file (default stdout)");
    app->add_option("--format", format, "json|csv");
    app->add_flag("--no-timing", no_timing, "omit wall-clock fields (byte-identical reports)");
  }

  ExperimentConfig resolve() const {
    ExperimentConfig cfg;
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      json doc;
      try {
        in >> doc;
      } catch (const json::exception& e) {
        throw ConfigError(config_path + ": " + e.what());
      }
      merge_experiment_json(cfg, doc);
    }
    json over = json::object();
    // --game alone implies the security problem.
    const std::optional<std::string> new_problem = problem ? problem : game ? std::optional<std::string>("security") : std::nullopt;
    if (new_problem) over["problem"] = *new_problem;
    if (algorithm) over["algorithm"] = *algorithm;
    json params = json::object();
    if (dx) params["dx"] = *dx;
    if (dy) params["dy"] = *dy;
    if (c) params["c"] = *c;
    if (game) params["game"] = *game;
    if (!params.empty()) {
      // Flags add to (and override) the params of the config file, unless the
      // problem itself changed.
      json merged = (new_problem && *new_problem != cfg.problem) ? json::object() : cfg.params;
      merged.update(params);
      over["params"] = merged;
    } else if (new_problem && *new_problem != cfg.problem) {
      over["params"] = json::object();
    }
    json ex = json::object();
    if (budget) ex["budget"] = *budget;
    if (h_max) ex["h_max"] = *h_max;
    if (arity) ex["arity"] = *arity;
    if (step_size) ex["step_size"] = *step_size;
    if (selection) ex["selection"] = *selection;
    if (step_rule) ex["step_rule"] = *step_rule;
    if (no_kink_probe) ex["kink_probe"] = false;
    if (threads) ex["threads"] = *threads;
    if (!ex.empty()) over["exotic"] = ex;
    json bl = json::object();
    if (iterations) bl["iterations"] = *iterations;
    if (beta) bl["step_x"] = *beta;
    if (gamma) bl["step_y"] = *gamma;
    if (!bl.empty()) over["baseline"] = bl;
    json orc = json::object();
    if (grid) orc["grid"] = *grid;
    if (y_grid) orc["y_grid"] = *y_grid;
    if (!orc.empty()) over["oracle"] = orc;
    if (output) over["output"] = *output;
    if (format) over["format"] = *format;
    if (repetitions) over["repetitions"] = *repetitions;
    if (seed) over["seed"] = *seed;
    if (no_timing) over["timing"] = false;
    merge_experiment_json(cfg, over);
    return cfg;
  }
};

// Writes to the file or stdout; the whole document is produced first so a
// failing run leaves no partial file.
void emit(const std::optional<std::string>& path, const std::string& text) {
  if (!path || path->empty() || *path == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(*path, std::ios::binary);
  if (!out) throw ConfigError("cannot open output file '" + *path + "'");
  out << text;
}

std::vector<Table1Spec> parse_rows(const std::vector<std::string>& selectors, bool all) {
  const auto known = table1_all_rows();
  if (all) return known;
  if (selectors.empty()) {
    std::vector<Table1Spec> out;
    for (const auto& r : known) {
      if (table1_is_desk_scale(r)) out.push_back(r);
    }
    return out;
  }
  std::vector<Table1Spec> out;
  for (const auto& sel : selectors) {
    // dxXdy or dxXdy:hmax
    std::size_t dx = 0, dy = 0;
    int h = 0;
    char sep = 0, colon = 0;
    std::istringstream in(sel);
    in >> dx >> sep >> dy;
    if (!in || (sep != 'x' && sep != 'X')) throw ConfigError("row '" + sel + "': expected DXxDY[:HMAX]");
    if (in >> colon) {
      if (colon != ':' || !(in >> h)) throw ConfigError("row '" + sel + "': expected DXxDY[:HMAX]");
    } else {
      for (const auto& r : known) {
        if (r.dx == dx && r.dy == dy) h = r.h_max;
      }
      if (h == 0) throw ConfigError("row '" + sel + "' is not a benchmark row; give its depth as DXxDY:HMAX");
    }
    out.push_back({dx, dy, h});
  }
  return out;
}

int run(int argc, char** argv) {
  CLI::App app{"EXOTIC: global min-max solver for convex-non-concave problems"};
  app.require_subcommand(1);

  ExperimentFlags solve_flags;
  auto* solve = app.add_subcommand("solve", "run one algorithm on one problem and write a report");
  solve_flags.attach(solve);

  ExperimentFlags trace_flags;
  auto* trace = app.add_subcommand("trace-dump", "dump the search tree (exotic) or value trace (gda/agp) as JSON");
  trace_flags.attach(trace);

  std::vector<std::string> t1_rows;
  bool t1_all = false, t1_force = false, t1_no_timing = false;
  int t1_threads = 1, t1_arity = 3;
  std::optional<double> t1_step;
  std::optional<std::string> t1_output;
  std::string t1_format = "csv";
  auto* table1 = app.add_subcommand("table1", "handcrafted benchmark rows: dx,dy,Opt_true,G_hat,%Error,h_max,runtime");
  table1->add_option("--rows", t1_rows, "rows as DXxDY[:HMAX] (default: all rows with dx*dy <= 9)")->delimiter(',');
  table1->add_flag("--all", t1_all, "every benchmark row");
  table1->add_flag("--force", t1_force, "allow rows with dx*dy > 9");
  table1->add_option("--threads", t1_threads, "rows run concurrently");
  table1->add_option("--arity", t1_arity, "children per expansion K");
  table1->add_option("--step-size", t1_step, "inner step eta");
  table1->add_flag("--no-timing", t1_no_timing, "leave the runtime column empty");
  table1->add_option("-o,--output", t1_output, "output file (default stdout)");
  table1->add_option("--format", t1_format, "csv|json")->check(CLI::IsMember({"csv", "json"}));

  std::optional<std::string> sc_game, sc_output;
  SecurityCompareOptions sc;
  std::string sc_format = "csv";
  auto* security = app.add_subcommand("security-compare", "EXOTIC vs GDA/AGP security strategies on a finite game");
  security->add_option("--game", sc_game, "game JSON file (default: the three-player example game)");
  security->add_option("--runs", sc.runs, "runs per baseline");
  security->add_option("--seed", sc.seed, "base seed of the baseline runs");
  security->add_option("--budget", sc.exotic.budget, "EXOTIC budget n");
  security->add_option("--step-size", sc.exotic.inner.step_size, "EXOTIC inner step eta");
  security->add_option("--iterations", sc.baseline.iterations, "baseline iterations");
  security->add_option("--beta", sc.baseline.step_x, "baseline x step");
  security->add_option("--gamma", sc.baseline.step_y, "baseline y step");
  security->add_option("--threads", sc.threads, "worker threads");
  security->add_option("-o,--output", sc_output, "output file (default stdout)");
  security->add_option("--format", sc_format, "csv|json")->check(CLI::IsMember({"csv", "json"}));

  BoundsOptions bo;
  std::optional<std::string> b_output;
  std::string b_form = "rederived";
  bool b_no_empirical = false;
  auto* bounds = app.add_subcommand("bounds", "CSV of n, empirical gap, sublinear and linear gap bounds");
  bounds->add_option("--nu", bo.params.nu);
  bounds->add_option("--rho", bo.params.rho);
  bounds->add_option("--C", bo.params.C);
  bounds->add_option("--d", bo.params.d, "near-optimality dimension");
  bounds->add_option("--alpha1", bo.params.alpha1, "sublinear solver constant");
  bounds->add_option("--alpha2", bo.params.alpha2, "sublinear solver exponent");
  bounds->add_option("--C2", bo.params.C2, "linear solver constant");
  bounds->add_option("--gamma", bo.params.gamma, "linear solver rate");
  bounds->add_option("--arity", bo.params.arity);
  bounds->add_option("--budgets", bo.budgets, "comma-separated budgets")->delimiter(',');
  bounds->add_flag("--no-empirical", b_no_empirical, "skip the EXOTIC runs");
  bounds->add_option("--dx", bo.dx, "handcrafted dx for the empirical column");
  bounds->add_option("--dy", bo.dy, "handcrafted dy for the empirical column");
  bounds->add_option("--c", bo.c, "handcrafted c for the empirical column");
  bounds->add_option("--threads", bo.threads);
  bounds->add_option("--linear-form", b_form, "rederived|printed")->check(CLI::IsMember({"rederived", "printed"}));
  bounds->add_option("-o,--output", b_output, "output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*solve) {
      const ExperimentConfig cfg = solve_flags.resolve();
      const json report = run_solve(cfg);
      if (cfg.format == "csv") {
        std::ostringstream s;
        write_solve_csv(s, report);
        emit(cfg.output, s.str());
      } else {
        emit(cfg.output, report.dump(2) + "\n");
      }
    } else if (*trace) {
      const ExperimentConfig cfg = trace_flags.resolve();
      emit(cfg.output, run_trace_dump(cfg).dump(2) + "\n");
    } else if (*table1) {
      Table1Options opt;
      opt.force = t1_force;
      opt.timing = !t1_no_timing;
      opt.threads = t1_threads;
      opt.arity = t1_arity;
      if (t1_step) opt.inner.step_size = *t1_step;
      const auto rows = run_table1(parse_rows(t1_rows, t1_all), opt);
      if (t1_format == "json") {
        json arr = json::array();
        for (const auto& r : rows) {
          arr.push_back({{"dx", r.dx}, {"dy", r.dy}, {"Opt_true", r.opt_true}, {"G_hat", r.g_hat},
                         {"percent_error", r.percent_error}, {"h_max", r.h_max},
                         {"runtime_s", r.runtime_seconds ? json(*r.runtime_seconds) : json(nullptr)}});
        }
        emit(t1_output, arr.dump(2) + "\n");
      } else {
        std::ostringstream s;
        write_table1_csv(s, rows);
        emit(t1_output, s.str());
      }
    } else if (*security) {
      GameSpec game = table3_game();
      if (sc_game) {
        try {
          game = load_game(*sc_game);
        } catch (const std::exception& e) {
          throw ConfigError(*sc_game + ": " + e.what());
        }
      }
      const auto result = run_security_compare(game, sc);
      if (sc_format == "json") {
        json rows = json::array();
        for (const auto& r : result.rows) {
          rows.push_back({{"algorithm", r.algorithm}, {"seed", r.seed}, {"x_alg", r.x_alg}, {"y_alg", r.y_alg},
                          {"exotic_vs_alg", r.exotic_vs_alg}, {"alg_vs_worst", r.alg_vs_worst},
                          {"ordering1", r.ordering1}, {"ordering2", r.ordering2}});
        }
        emit(sc_output, json{{"exotic_estimate", result.exotic_estimate},
                             {"exotic_value", result.exotic_security},
                             {"x_exotic", result.x_exotic},
                             {"exact_value", result.exact_value},
                             {"exact_strategy", result.exact_strategy},
                             {"rows", rows}}
                                .dump(2) + "\n");
      } else {
        std::ostringstream s;
        write_security_csv(s, result);
        emit(sc_output, s.str());
      }
      if (!result.all_orderings_hold()) {
        std::cerr << "error: a security ordering failed (see the ordering1/ordering2 columns)\n";
        return kExitSolver;
      }
    } else if (*bounds) {
      bo.empirical = !b_no_empirical;
      bo.linear_form = b_form == "printed" ? LinearBoundForm::AsPrinted : LinearBoundForm::Rederived;
      try {
        bo.params.validate();
      } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
      }
      std::ostringstream s;
      write_bounds_csv(s, run_bounds(bo));
      emit(b_output, s.str());
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const BudgetTooSmallError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const GridTooLargeError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const UnsupportedProblemError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const SolverError& e) {
    std::cerr << "solver error at depth " << e.depth() << ", index " << e.index() << ": " << e.what() << "\n";
    return kExitSolver;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return kExitSolver;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) { return run(argc, argv); }
