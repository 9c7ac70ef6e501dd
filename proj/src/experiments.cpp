#include "exotic/experiments.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "exotic/errors.hpp"
#include "exotic/parallel.hpp"

namespace exotic {

using nlohmann::json;

namespace {

void check_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + ": expected a JSON object");
  for (const auto& [key, _] : obj.items()) {
    if (!allowed.count(key)) throw ConfigError(where + ": unknown key '" + key + "'");
  }
}

template <class T>
T get_as(const json& obj, const std::string& key, const std::string& where) {
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(where + "." + key + ": " + e.what());
  }
}

double elapsed_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Parameter keys of the built-in problems; nullptr for user-registered ones.
const std::set<std::string>* builtin_param_keys(const std::string& problem) {
  static const std::map<std::string, std::set<std::string>> keys{
      {"handcrafted", {"dx", "dy", "c"}},
      {"security", {"game"}},
      {"bilinear", {}},
      {"quartic-ncc", {}},
  };
  const auto it = keys.find(problem);
  return it == keys.end() ? nullptr : &it->second;
}

void apply_exotic(ExoticConfig& e, const json& doc) {
  const std::string where = "exotic";
  check_keys(doc, {"budget", "h_max", "arity", "step_size", "selection", "step_rule", "kink_probe", "budget_log",
                   "threads"},
             where);
  if (doc.contains("budget") && doc.contains("h_max")) throw ConfigError("exotic: set budget or h_max, not both");
  if (doc.contains("budget")) {
    e.budget = get_as<long long>(doc, "budget", where);
    e.h_max.reset();
  }
  if (doc.contains("h_max")) {
    e.h_max = get_as<int>(doc, "h_max", where);
    e.budget.reset();
  }
  if (doc.contains("arity")) e.arity = get_as<int>(doc, "arity", where);
  if (doc.contains("step_size")) {
    if (doc["step_size"].is_null()) e.inner.step_size.reset();
    else e.inner.step_size = get_as<double>(doc, "step_size", where);
  }
  try {
    if (doc.contains("selection")) e.inner.selection = selection_from_string(get_as<std::string>(doc, "selection", where));
    if (doc.contains("step_rule")) e.inner.step_rule = step_rule_from_string(get_as<std::string>(doc, "step_rule", where));
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& err) {
    throw ConfigError(std::string("exotic: ") + err.what());
  }
  if (doc.contains("kink_probe")) e.inner.kink_probe = get_as<bool>(doc, "kink_probe", where);
  if (doc.contains("budget_log")) {
    const auto s = get_as<std::string>(doc, "budget_log", where);
    if (s == "natural") e.budget_log = BudgetLog::Natural;
    else if (s == "binary") e.budget_log = BudgetLog::Binary;
    else throw ConfigError("exotic.budget_log: expected natural|binary");
  }
  if (doc.contains("threads")) e.threads = get_as<int>(doc, "threads", where);
}

void apply_baseline(BaselineConfig& b, const json& doc) {
  const std::string where = "baseline";
  check_keys(doc, {"step_x", "step_y", "iterations", "x0", "y0"}, where);
  if (doc.contains("step_x")) b.step_x = get_as<double>(doc, "step_x", where);
  if (doc.contains("step_y")) b.step_y = get_as<double>(doc, "step_y", where);
  if (doc.contains("iterations")) b.iterations = get_as<int>(doc, "iterations", where);
  if (doc.contains("x0")) b.x0 = get_as<Vector>(doc, "x0", where);
  if (doc.contains("y0")) b.y0 = get_as<Vector>(doc, "y0", where);
}

std::string budget_log_name(BudgetLog l) { return l == BudgetLog::Natural ? "natural" : "binary"; }

}  // namespace

std::string to_string(Algorithm a) {
  switch (a) {
    case Algorithm::Exotic: return "exotic";
    case Algorithm::ExoticNcc: return "exotic-ncc";
    case Algorithm::Gda: return "gda";
    case Algorithm::Agp: return "agp";
    case Algorithm::Oracle: return "oracle";
  }
  return "?";
}

Algorithm algorithm_from_string(const std::string& s) {
  for (auto a : {Algorithm::Exotic, Algorithm::ExoticNcc, Algorithm::Gda, Algorithm::Agp, Algorithm::Oracle}) {
    if (to_string(a) == s) return a;
  }
  throw ConfigError("unknown algorithm '" + s + "' (expected exotic|exotic-ncc|gda|agp|oracle)");
}

void ExperimentConfig::validate() const {
  if (!ProblemRegistry::instance().contains(problem)) throw ConfigError("unknown problem '" + problem + "'");
  if (format != "json" && format != "csv") throw ConfigError("format: expected json|csv");
  if (repetitions < 1) throw ConfigError("repetitions must be >= 1");
  try {
    switch (algorithm) {
      case Algorithm::Exotic:
      case Algorithm::ExoticNcc: exotic.validate(); break;
      case Algorithm::Gda:
      case Algorithm::Agp: baseline.validate(); break;
      case Algorithm::Oracle: grid.validate(); break;
    }
  } catch (const BudgetTooSmallError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

void merge_experiment_json(ExperimentConfig& c, const json& doc) {
  check_keys(doc, {"problem", "params", "algorithm", "exotic", "baseline", "oracle", "output", "format", "repetitions",
                   "seed", "timing"},
             "config");
  if (doc.contains("problem")) c.problem = get_as<std::string>(doc, "problem", "config");
  if (doc.contains("params")) {
    if (!doc["params"].is_object()) throw ConfigError("config.params: expected a JSON object");
    c.params = doc["params"];
  }
  if (doc.contains("algorithm")) c.algorithm = algorithm_from_string(get_as<std::string>(doc, "algorithm", "config"));
  if (doc.contains("exotic")) apply_exotic(c.exotic, doc["exotic"]);
  if (doc.contains("baseline")) apply_baseline(c.baseline, doc["baseline"]);
  if (doc.contains("oracle")) {
    check_keys(doc["oracle"], {"grid", "y_grid"}, "oracle");
    if (doc["oracle"].contains("grid")) c.grid.points_per_dimension = get_as<int>(doc["oracle"], "grid", "oracle");
    if (doc["oracle"].contains("y_grid")) c.grid.y_points_per_dimension = get_as<int>(doc["oracle"], "y_grid", "oracle");
  }
  if (doc.contains("output")) {
    if (doc["output"].is_null()) c.output.reset();
    else c.output = get_as<std::string>(doc, "output", "config");
  }
  if (doc.contains("format")) c.format = get_as<std::string>(doc, "format", "config");
  if (doc.contains("repetitions")) c.repetitions = get_as<int>(doc, "repetitions", "config");
  if (doc.contains("seed")) c.seed = get_as<std::uint64_t>(doc, "seed", "config");
  if (doc.contains("timing")) c.timing = get_as<bool>(doc, "timing", "config");
}

ExperimentConfig::ExperimentConfig() { exotic.budget = 100000; }

ExperimentConfig experiment_from_json(const json& doc) {
  ExperimentConfig c;
  merge_experiment_json(c, doc);
  return c;
}

json experiment_to_json(const ExperimentConfig& c) {
  json e;
  if (c.exotic.budget) e["budget"] = *c.exotic.budget;
  if (c.exotic.h_max) e["h_max"] = *c.exotic.h_max;
  e["arity"] = c.exotic.arity;
  e["step_size"] = c.exotic.inner.step_size ? json(*c.exotic.inner.step_size) : json(nullptr);
  e["selection"] = to_string(c.exotic.inner.selection);
  e["step_rule"] = to_string(c.exotic.inner.step_rule);
  e["kink_probe"] = c.exotic.inner.kink_probe;
  e["budget_log"] = budget_log_name(c.exotic.budget_log);
  e["threads"] = c.exotic.threads;
  json b;
  b["step_x"] = c.baseline.step_x;
  b["step_y"] = c.baseline.step_y;
  b["iterations"] = c.baseline.iterations;
  if (c.baseline.x0) b["x0"] = *c.baseline.x0;
  if (c.baseline.y0) b["y0"] = *c.baseline.y0;
  json o;
  o["grid"] = c.grid.points_per_dimension;
  if (c.grid.y_points_per_dimension) o["y_grid"] = *c.grid.y_points_per_dimension;
  return json{{"problem", c.problem},
              {"params", c.params},
              {"algorithm", to_string(c.algorithm)},
              {"exotic", e},
              {"baseline", b},
              {"oracle", o},
              {"output", c.output ? json(*c.output) : json(nullptr)},
              {"format", c.format},
              {"repetitions", c.repetitions},
              {"seed", c.seed},
              {"timing", c.timing}};
}

MinMaxProblem make_problem(const ExperimentConfig& c) {
  const auto& registry = ProblemRegistry::instance();
  if (!registry.contains(c.problem)) throw ConfigError("unknown problem '" + c.problem + "'");
  if (const auto* allowed = builtin_param_keys(c.problem)) check_keys(c.params, *allowed, "params");
  try {
    return registry.create(c.problem, c.params);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("params: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("params: ") + e.what());
  } catch (const std::runtime_error& e) {
    throw ConfigError(std::string("params: ") + e.what());
  }
}

GameSpec make_game(const ExperimentConfig& c) {
  if (c.problem != "security") throw ConfigError("problem '" + c.problem + "' is not a game");
  check_keys(c.params, *builtin_param_keys("security"), "params");
  try {
    if (!c.params.contains("game")) return table3_game();
    const auto& g = c.params["game"];
    if (g.is_string()) return load_game(g.get<std::string>());
    return game_from_json(g);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("params.game: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("params.game: ") + e.what());
  } catch (const std::runtime_error& e) {
    throw ConfigError(std::string("params.game: ") + e.what());
  }
}

json run_solve(const ExperimentConfig& c) {
  c.validate();
  const MinMaxProblem problem = make_problem(c);
  json runs = json::array();
  for (int r = 0; r < c.repetitions; ++r) {
    const std::uint64_t seed = c.seed + static_cast<std::uint64_t>(r);
    json run{{"repetition", r}, {"seed", seed}};
    const auto t0 = std::chrono::steady_clock::now();
    switch (c.algorithm) {
      case Algorithm::Exotic:
      case Algorithm::ExoticNcc: {
        ExoticConfig e = c.exotic;
        e.seed = seed;
        const RunReport rep = c.algorithm == Algorithm::Exotic ? run_exotic(problem, e) : solve_ncc(problem, e);
        run.update(rep.to_json(c.timing));
        break;
      }
      case Algorithm::Gda:
      case Algorithm::Agp: {
        BaselineConfig b = c.baseline;
        b.seed = seed;
        const auto kind = c.algorithm == Algorithm::Gda ? BaselineKind::Gda : BaselineKind::Agp;
        const BaselineResult res = run_baseline(kind, problem, b);
        run["value"] = res.value;
        run["x"] = res.x;
        run["y"] = res.y;
        run["iterations"] = b.iterations;
        run["saddle_residual"] = saddle_residual(problem, res.x, res.y, b.step_x, b.step_y);
        run["time"] = c.timing ? json(elapsed_since(t0)) : json(nullptr);
        break;
      }
      case Algorithm::Oracle: {
        if (c.problem == "security") {
          const GameSpec game = make_game(c);
          const SecurityValue sv = security_value_exact(game);
          run["value"] = sv.value;
          run["x"] = sv.strategy;
          run["y"] = worst_case_response(game, sv.strategy).profile;
          run["method"] = "security-exact";
        } else {
          const GridMinMaxResult g = grid_minmax(problem, c.grid);
          run["value"] = g.value;
          run["x"] = g.x;
          run["y"] = g.y;
          run["grid_points"] = {g.x_points, g.y_points};
          run["method"] = "grid";
        }
        run["time"] = c.timing ? json(elapsed_since(t0)) : json(nullptr);
        break;
      }
    }
    runs.push_back(std::move(run));
  }
  json report{{"config", experiment_to_json(c)}, {"runs", runs}};
  report["value"] = runs.front()["value"];
  if (c.problem == "handcrafted") {
    const auto dy = problem.dy();
    report["opt_true"] = handcrafted_optimum(problem.dx(), dy).value;
  }
  return report;
}

void write_solve_csv(std::ostream& out, const json& report) {
  out << "repetition,seed,algorithm,value,x,y,iterations,time\n";
  const std::string alg = report.at("config").at("algorithm").get<std::string>();
  for (const auto& run : report.at("runs")) {
    std::string y;
    if (run.contains("w")) {
      for (const auto& comp : run["w"]) {
        if (!y.empty()) y += '|';
        y += format_vector(comp.get<Vector>());
      }
    } else if (run.contains("y")) {
      y = format_vector(run["y"].get<Vector>());
    }
    out << run["repetition"].get<int>() << ',' << run["seed"].get<std::uint64_t>() << ',' << alg << ','
        << format_number(run["value"].get<double>()) << ',' << format_vector(run["x"].get<Vector>()) << ',' << y
        << ',' << (run.contains("iterations") ? std::to_string(run["iterations"].get<long long>()) : "") << ','
        << (run["time"].is_null() ? "" : format_number(run["time"].get<double>())) << '\n';
  }
}

json run_trace_dump(const ExperimentConfig& c) {
  c.validate();
  const MinMaxProblem problem = make_problem(c);
  switch (c.algorithm) {
    case Algorithm::Exotic:
    case Algorithm::ExoticNcc: {
      ExoticConfig e = c.exotic;
      e.record_tree = true;
      const RunReport rep = c.algorithm == Algorithm::Exotic ? run_exotic(problem, e) : solve_ncc(problem, e);
      return json{{"report", rep.to_json(c.timing)}, {"tree", rep.tree ? rep.tree->to_json() : json(nullptr)}};
    }
    case Algorithm::Gda:
    case Algorithm::Agp: {
      BaselineConfig b = c.baseline;
      b.seed = c.seed;
      b.record_trace = true;
      const auto kind = c.algorithm == Algorithm::Gda ? BaselineKind::Gda : BaselineKind::Agp;
      const BaselineResult res = run_baseline(kind, problem, b);
      return json{{"algorithm", to_string(c.algorithm)}, {"x", res.x}, {"y", res.y}, {"trace", res.trace}};
    }
    case Algorithm::Oracle: break;
  }
  throw ConfigError("trace-dump needs algorithm exotic, exotic-ncc, gda or agp");
}

std::vector<Table1Spec> table1_all_rows() {
  return {{1, 1, 100},   {1, 2, 200},   {2, 1, 200},   {3, 2, 400},    {2, 3, 500},
          {3, 3, 600},   {5, 5, 1600},  {3, 10, 2000}, {10, 3, 2000},  {3, 20, 4000},
          {20, 3, 4000}, {2, 100, 13000}, {20, 20, 13000}};
}

bool table1_is_desk_scale(const Table1Spec& row) { return row.dx * row.dy <= 9; }

std::vector<Table1Row> run_table1(const std::vector<Table1Spec>& rows, const Table1Options& options) {
  for (const auto& r : rows) {
    if (r.dx == 0 || r.dy == 0 || r.h_max < 1) throw ConfigError("table1: dx, dy and h_max must be positive");
    if (!options.force && !table1_is_desk_scale(r)) {
      throw ConfigError("table1: row (" + std::to_string(r.dx) + "," + std::to_string(r.dy) +
                        ") has dx*dy > 9; pass --force to run it");
    }
  }
  std::vector<Table1Row> out(rows.size());
  parallel_for(rows.size(), resolve_threads(options.threads), [&](std::size_t i) {
    const auto& spec = rows[i];
    const auto t0 = std::chrono::steady_clock::now();
    const MinMaxProblem p = handcrafted_problem(spec.dx, spec.dy, handcrafted_default_c(spec.dx, spec.dy));
    ExoticConfig e;
    e.h_max = spec.h_max;
    e.arity = options.arity;
    e.inner = options.inner;
    const RunReport rep = run_exotic(p, e);
    Table1Row& row = out[i];
    row.dx = spec.dx;
    row.dy = spec.dy;
    row.opt_true = handcrafted_optimum(spec.dx, spec.dy).value;
    row.g_hat = rep.value;
    row.percent_error = 100.0 * std::abs(row.opt_true - row.g_hat) / row.opt_true;
    row.h_max = spec.h_max;
    if (options.timing) row.runtime_seconds = elapsed_since(t0);
  });
  return out;
}

void write_table1_csv(std::ostream& out, const std::vector<Table1Row>& rows) {
  out << "dx,dy,Opt_true,G_hat,percent_error,h_max,runtime_s\n";
  for (const auto& r : rows) {
    out << r.dx << ',' << r.dy << ',' << format_number(r.opt_true) << ',' << format_number(r.g_hat) << ','
        << format_number(r.percent_error) << ',' << r.h_max << ','
        << (r.runtime_seconds ? format_number(*r.runtime_seconds) : "") << '\n';
  }
}

SecurityCompareOptions::SecurityCompareOptions() {
  exotic.budget = 1000000;
  exotic.inner.step_size = 10.0;
}

bool SecurityCompareResult::all_orderings_hold() const {
  return std::all_of(rows.begin(), rows.end(), [](const auto& r) { return r.ordering1 && r.ordering2; });
}

SecurityCompareResult run_security_compare(const GameSpec& game, const SecurityCompareOptions& o) {
  game.validate();
  if (o.runs < 0) throw ConfigError("security-compare: runs must be >= 0");
  const MinMaxProblem problem = security_game_problem(game);
  SecurityCompareResult res;
  ExoticConfig e = o.exotic;
  e.threads = o.threads;
  const RunReport rep = run_exotic(problem, e);
  res.exotic_estimate = rep.value;
  res.x_exotic = rep.x;
  res.exotic_security = worst_case_response(game, rep.x).value;
  const SecurityValue exact = security_value_exact(game);
  res.exact_value = exact.value;
  res.exact_strategy = exact.strategy;

  // Opponent strategies from a flat y, in player order.
  auto strategies = [&](const Vector& x, const Vector& y) {
    std::vector<Vector> s;
    std::size_t off = 0;
    for (std::size_t p = 0; p < game.num_players(); ++p) {
      if (p == game.protected_player) {
        s.push_back(x);
        continue;
      }
      const auto m = game.action_counts[p];
      s.emplace_back(y.begin() + static_cast<std::ptrdiff_t>(off), y.begin() + static_cast<std::ptrdiff_t>(off + m));
      off += m;
    }
    return s;
  };

  for (auto kind : {BaselineKind::Gda, BaselineKind::Agp}) {
    for (const SweepRow& sw : run_sweep(kind, problem, o.baseline, o.runs, o.seed, o.threads)) {
      SecurityCompareRow row;
      row.algorithm = to_string(kind);
      row.seed = sw.seed;
      row.x_alg = sw.x;
      row.y_alg = sw.y;
      row.exotic_vs_alg = expected_cost(game, strategies(res.x_exotic, sw.y));
      row.alg_vs_worst = worst_case_response(game, sw.x).value;
      row.ordering1 = row.exotic_vs_alg <= res.exotic_security + o.tolerance;
      row.ordering2 = res.exotic_security <= row.alg_vs_worst + o.tolerance;
      res.rows.push_back(std::move(row));
    }
  }
  return res;
}

void write_security_csv(std::ostream& out, const SecurityCompareResult& r) {
  out << "algorithm,seed,x_alg,y_alg,exotic_value,exotic_vs_alg,alg_vs_worst,ordering1,ordering2\n";
  for (const auto& row : r.rows) {
    out << row.algorithm << ',' << row.seed << ',' << format_vector(row.x_alg) << ',' << format_vector(row.y_alg)
        << ',' << format_number(r.exotic_security) << ',' << format_number(row.exotic_vs_alg) << ','
        << format_number(row.alg_vs_worst) << ',' << (row.ordering1 ? "true" : "false") << ','
        << (row.ordering2 ? "true" : "false") << '\n';
  }
}

std::vector<BoundsRow> run_bounds(const BoundsOptions& o) {
  o.params.validate();
  std::vector<BoundsRow> rows(o.budgets.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    TheoryParams p = o.params;
    p.budget = o.budgets[i];
    const GapBound s = gap_bound_sublinear(p);
    const GapBound l = gap_bound_linear(p, o.linear_form);
    rows[i] = {p.budget, std::nullopt, s.value, s.condition_holds, l.value, l.condition_holds};
  }
  if (o.empirical) {
    const double c = o.c.value_or(handcrafted_default_c(o.dx, o.dy));
    const MinMaxProblem prob = handcrafted_problem(o.dx, o.dy, c);
    const double opt = handcrafted_optimum(o.dx, o.dy).value;
    parallel_for(rows.size(), resolve_threads(o.threads), [&](std::size_t i) {
      ExoticConfig e;
      e.budget = rows[i].n;
      e.arity = o.params.arity;
      e.inner = o.inner;
      rows[i].empirical_gap = std::abs(opt - run_exotic(prob, e).value);
    });
  }
  return rows;
}

void write_bounds_csv(std::ostream& out, const std::vector<BoundsRow>& rows) {
  out << "n,empirical_gap,sublinear_bound,linear_bound,sublinear_branch,linear_branch\n";
  for (const auto& r : rows) {
    out << r.n << ',' << (r.empirical_gap ? format_number(*r.empirical_gap) : "") << ','
        << format_number(r.sublinear) << ',' << format_number(r.linear) << ','
        << (r.sublinear_condition ? "first" : "second") << ',' << (r.linear_condition ? "first" : "second") << '\n';
  }
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) v = 0.0;  // drop the sign of -0
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string format_vector(std::span<const double> v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ';';
    s += format_number(v[i]);
  }
  return s;
}

}  // namespace exotic
