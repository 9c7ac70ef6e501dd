#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "exotic/errors.hpp"
#include "exotic/experiments.hpp"

using namespace exotic;
using nlohmann::json;

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

bool is_number(const std::string& s) {
  if (s.empty()) return false;
  char* end = nullptr;
  std::strtod(s.c_str(), &end);
  return end == s.c_str() + s.size();
}

bool is_vector(const std::string& s) {
  for (const auto& part : split(s, ';'))
    if (!is_number(part)) return false;
  return true;
}

enum class Col { Number, OptNumber, Vector, Text, Bool };

// Parses a CSV document against an expected header and per-column kinds.
// Returns the number of data rows.
int check_csv(const std::string& text, const std::string& header, const std::vector<Col>& kinds) {
  std::istringstream in(text);
  std::string line;
  REQUIRE(std::getline(in, line));
  CHECK(line == header);
  REQUIRE(split(header, ',').size() == kinds.size());
  int rows = 0;
  while (std::getline(in, line)) {
    const auto cells = split(line, ',');
    REQUIRE(cells.size() == kinds.size());
    for (std::size_t i = 0; i < cells.size(); ++i) {
      const auto& c = cells[i];
      switch (kinds[i]) {
        case Col::Number: CHECK_MESSAGE(is_number(c), header, " col ", i, " '", c, "'"); break;
        case Col::OptNumber: CHECK_MESSAGE((c.empty() || is_number(c)), header, " col ", i); break;
        case Col::Vector: CHECK_MESSAGE(is_vector(c), header, " col ", i, " '", c, "'"); break;
        case Col::Bool: CHECK((c == "true" || c == "false")); break;
        case Col::Text: CHECK_FALSE(c.empty()); break;
      }
    }
    ++rows;
  }
  return rows;
}

struct Cli {
  int code;
  std::string out;
};

Cli cli(const std::string& args) {
  const auto tmp = std::filesystem::temp_directory_path() / "exotic_cli_test_out.txt";
  const std::string cmd = std::string(EXOTIC_CLI_PATH) + " " + args + " > " + tmp.string() + " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  std::ifstream f(tmp);
  std::stringstream ss;
  ss << f.rdbuf();
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, ss.str()};
}

}  // namespace

TEST_CASE("config parsing is strict") {
  auto c = experiment_from_json(json::parse(R"({"problem": "handcrafted", "params": {"dx": 1, "dy": 2, "c": 13},
      "algorithm": "exotic", "exotic": {"h_max": 40, "arity": 2, "step_size": 0.5, "kink_probe": false},
      "repetitions": 2, "seed": 9, "timing": false})"));
  CHECK(c.exotic.h_max == 40);
  CHECK_FALSE(c.exotic.budget.has_value());
  CHECK(c.exotic.arity == 2);
  CHECK(c.exotic.inner.step_size == 0.5);
  CHECK_FALSE(c.exotic.inner.kink_probe);
  CHECK(c.repetitions == 2);
  CHECK_FALSE(c.timing);
  CHECK(make_problem(c).dy() == 2);

  const auto back = experiment_from_json(experiment_to_json(c));
  CHECK(experiment_to_json(back) == experiment_to_json(c));

  CHECK_THROWS_AS(experiment_from_json(json::parse(R"({"problme": "x"})")), ConfigError);
  CHECK_THROWS_AS(experiment_from_json(json::parse(R"({"exotic": {"depth": 3}})")), ConfigError);
  // Problem parameters and value ranges are checked once the config is complete.
  CHECK_THROWS_AS(make_problem(experiment_from_json(json::parse(R"({"params": {"dx": 1, "e": 2}})"))), ConfigError);
  CHECK_THROWS_AS(experiment_from_json(json::parse(R"({"algorithm": "newton"})")), ConfigError);
  CHECK_THROWS_AS(experiment_from_json(json::parse(R"({"format": "xml"})")).validate(), ConfigError);
  CHECK_THROWS_AS(experiment_from_json(json::parse(R"({"repetitions": "two"})")), ConfigError);
  ExperimentConfig d;
  CHECK(d.exotic.budget == 100000);
}

TEST_CASE("merge applies on top of a base") {
  ExperimentConfig c;
  merge_experiment_json(c, json::parse(R"({"exotic": {"h_max": 20}})"));
  CHECK(c.exotic.h_max == 20);
  CHECK_FALSE(c.exotic.budget.has_value());
  merge_experiment_json(c, json::parse(R"({"seed": 3})"));
  CHECK(c.seed == 3);
  CHECK(c.exotic.h_max == 20);
}

TEST_CASE("solve reports") {
  ExperimentConfig c;
  c.params = json::parse(R"({"dx": 1, "dy": 1, "c": 4})");
  c.exotic.budget.reset();
  c.exotic.h_max = 100;
  c.timing = false;
  const auto r = run_solve(c);
  CHECK(std::abs(r["value"].get<double>() - 0.25) <= 1e-3);
  CHECK(r["opt_true"].get<double>() == 0.25);
  CHECK(r["runs"][0]["time"].is_null());
  CHECK(r.dump() == run_solve(c).dump());

  c.problem = "security";
  c.params = json::object();
  c.algorithm = Algorithm::Oracle;
  CHECK(run_solve(c)["value"].get<double>() == doctest::Approx(11.7 / 7));

  c.problem = "bilinear";
  c.algorithm = Algorithm::Gda;
  c.repetitions = 3;
  c.baseline.iterations = 100;
  const auto g = run_solve(c);
  REQUIRE(g["runs"].size() == 3);
  CHECK(g["runs"][2]["seed"].get<int>() == 2);
  std::ostringstream csv;
  write_solve_csv(csv, g);
  CHECK(check_csv(csv.str(), "repetition,seed,algorithm,value,x,y,iterations,time",
                  {Col::Number, Col::Number, Col::Text, Col::Number, Col::Vector, Col::Vector, Col::OptNumber,
                   Col::OptNumber}) == 3);

  c.problem = "nonexistent";
  CHECK_THROWS_AS(run_solve(c), ConfigError);
}

TEST_CASE("trace dumps") {
  ExperimentConfig c;
  c.exotic.budget.reset();
  c.exotic.h_max = 5;
  c.timing = false;
  const auto t = run_trace_dump(c);
  CHECK(t["tree"]["nodes"].size() == t["report"]["nodes"].get<std::size_t>());
  c.algorithm = Algorithm::Agp;
  c.baseline.iterations = 7;
  CHECK(run_trace_dump(c)["trace"].size() == 7);
}

TEST_CASE("table 1 rows and schema") {
  const auto all = table1_all_rows();
  CHECK(all.size() == 13);
  int desk = 0;
  for (const auto& r : all) desk += table1_is_desk_scale(r);
  CHECK(desk == 6);
  Table1Options o;
  o.timing = false;
  o.threads = 2;
  const auto rows = run_table1({{1, 1, 100}, {1, 2, 200}}, o);
  REQUIRE(rows.size() == 2);
  CHECK(rows[1].opt_true == 2.0);
  CHECK(rows[0].percent_error <= 0.01);
  std::ostringstream csv;
  write_table1_csv(csv, rows);
  CHECK(check_csv(csv.str(), "dx,dy,Opt_true,G_hat,percent_error,h_max,runtime_s",
                  {Col::Number, Col::Number, Col::Number, Col::Number, Col::Number, Col::Number, Col::OptNumber}) ==
        2);
  CHECK_THROWS_AS(run_table1({{5, 5, 1600}}, o), ConfigError);
}

TEST_CASE("security comparison schema") {
  SecurityCompareOptions o;
  o.runs = 3;
  o.exotic.budget = 100000;
  o.baseline.iterations = 2000;
  o.threads = 2;
  const auto r = run_security_compare(table3_game(), o);
  CHECK(r.rows.size() == 6);
  CHECK(r.exact_value == doctest::Approx(11.7 / 7));
  std::ostringstream csv;
  write_security_csv(csv, r);
  CHECK(check_csv(csv.str(), "algorithm,seed,x_alg,y_alg,exotic_value,exotic_vs_alg,alg_vs_worst,ordering1,ordering2",
                  {Col::Text, Col::Number, Col::Vector, Col::Vector, Col::Number, Col::Number, Col::Number, Col::Bool,
                   Col::Bool}) == 6);
}

TEST_CASE("bounds schema") {
  BoundsOptions o;
  o.budgets = {1000, 10000};
  o.threads = 2;
  const auto rows = run_bounds(o);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].empirical_gap.has_value());
  std::ostringstream csv;
  write_bounds_csv(csv, rows);
  const std::string header = "n,empirical_gap,sublinear_bound,linear_bound,sublinear_branch,linear_branch";
  CHECK(check_csv(csv.str(), header,
                  {Col::Number, Col::OptNumber, Col::Number, Col::Number, Col::Text, Col::Text}) == 2);
  o.empirical = false;
  std::ostringstream csv2;
  write_bounds_csv(csv2, run_bounds(o));
  CHECK(csv2.str().find("\n1000,,") != std::string::npos);
}

TEST_CASE("number formatting") {
  CHECK(format_number(0.25) == "0.25");
  CHECK(format_number(-0.0) == "0");
  CHECK(format_number(1.0 / 3) == "0.3333333333333333");
  CHECK(std::strtod(format_number(11.7 / 7).c_str(), nullptr) == 11.7 / 7);
  const Vector v{1, 0.5};
  CHECK(format_vector(v) == "1;0.5");
}

TEST_CASE("command line") {
  auto r = cli("solve --problem handcrafted --dx 1 --dy 1 --c 4 --alg exotic --hmax 100 --no-timing");
  REQUIRE(r.code == 0);
  CHECK(std::abs(json::parse(r.out)["value"].get<double>() - 0.25) <= 1e-3);
  CHECK(cli("solve --problem handcrafted --dx 1 --dy 1 --c 4 --alg exotic --hmax 100 --no-timing").out == r.out);

  r = cli("solve --problem bilinear --alg oracle --grid 101");
  CHECK(r.code == 0);
  CHECK(json::parse(r.out)["value"].get<double>() == 0.0);

  r = cli("solve --problem security --alg oracle");
  CHECK(r.code == 0);
  CHECK(json::parse(r.out)["value"].get<double>() == doctest::Approx(11.7 / 7));

  CHECK(cli("solve --budget 10").code == 2);
  CHECK(cli("solve --problem security --game /nonexistent/game.json").code == 2);
  CHECK(cli("solve --no-such-flag").code == 2);
  CHECK(cli("table1 --rows 5x5").code == 2);
  CHECK(cli("solve --problem bilinear --alg oracle --grid 100000").code == 2);

  const auto cfg = std::filesystem::temp_directory_path() / "exotic_cli_test_cfg.json";
  {
    std::ofstream f(cfg);
    f << R"({"problem": "handcrafted", "exotic": {"h_max": 30}, "timing": false, "format": "csv"})";
  }
  r = cli("solve --config " + cfg.string());
  CHECK(r.code == 0);
  CHECK(r.out.rfind("repetition,seed,algorithm", 0) == 0);
  {
    std::ofstream f(cfg);
    f << R"({"problem": "handcrafted", "unknown": 1})";
  }
  CHECK(cli("solve --config " + cfg.string()).code == 2);

  r = cli("table1 --rows 1x1,1x2 --no-timing");
  CHECK(r.code == 0);
  CHECK(r.out == cli("table1 --rows 1x1,1x2 --no-timing").out);
  CHECK(cli("bounds --budgets 1000,100000 --no-empirical").code == 0);
  r = cli("trace-dump --problem bilinear --alg gda --iterations 3 --no-timing");
  CHECK(r.code == 0);
  CHECK(json::parse(r.out)["trace"].size() == 3);
}
