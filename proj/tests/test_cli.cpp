#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "doctest.h"
#include "nct/config.hpp"
#include "nct/grid.hpp"
#include "nct/report.hpp"
#include "nct/suites.hpp"

using namespace nct;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "nct_cli_test";
  fs::create_directories(dir);
  return dir / name;
}

int run(const std::string& args) {
  const std::string cmd = std::string(VERIFY_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

RunConfig parse(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

}  // namespace

TEST_CASE("checked-in config equals the defaults") {
  const auto cfg = load_config(std::string(CONFIG_DIR) + "/default.toml");
  CHECK(cfg.canonical() == default_config().canonical());
  CHECK(cfg.hash() == default_config().hash());
  CHECK_NOTHROW(validate_config(cfg));
}

TEST_CASE("config hash") {
  const auto a = default_config();
  CHECK(a.hash().size() == 16);
  CHECK(a.hash() == default_config().hash());
  auto b = a;
  b.grid_h = 0.125;
  CHECK(b.hash() != a.hash());
}

TEST_CASE("config overlays and errors") {
  const auto cfg = parse("[grid]\nh = 0.125\n[run]\ngroups = [Z2, Z4]\n");
  CHECK(cfg.grid_h == 0.125);
  CHECK(cfg.grid_L == 8.0);
  CHECK(cfg.groups == std::vector<int>{2, 4});
  CHECK_THROWS_AS(parse("[grid]\nL = wide\n"), ConfigError);
  CHECK_THROWS_AS(parse("[grid]\nstep = 0.5\n"), ConfigError);
  CHECK_THROWS_AS(parse("[tolerances]\nmystery = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse("[grid\nL = 1\n"), ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/config.toml"), ConfigError);
  CHECK_THROWS_AS(validate_config(parse("[tolerances]\ninvariance = -1\n")), ConfigError);
  CHECK_THROWS_AS(validate_config(parse("[run]\ngroups = [5]\n")), ConfigError);
  CHECK_THROWS_AS(validate_config(parse("[run]\nsuites = [\"warp\"]\n")), ConfigError);
  CHECK_THROWS_AS(run_suite("warp", default_config()), ConfigError);
  CHECK(default_config().tol("star_phase") == 1e-4);
  CHECK_THROWS_AS(default_config().tol("warp"), ConfigError);
}

TEST_CASE("suite expansion") {
  CHECK(expand_suites({"all"}) == registered_suites());
  CHECK(expand_suites({"chi", "hp-dims", "chi"}) == std::vector<std::string>{"hp-dims", "chi"});
}

TEST_CASE("float formatting") {
  CHECK(format_double(1.0) == "1.000000000000e+00");
  CHECK(format_double(-0.00025) == "-2.500000000000e-04");
  CHECK(format_double(INFINITY) == "inf");
  CHECK(format_double(-INFINITY) == "-inf");
  CHECK(format_double(NAN) == "nan");
  const nlohmann::json doc = {{"b", 1}, {"a", {{"d", 0.5}, {"c", "x"}}}};
  const auto text = canonical_json(doc);
  CHECK(text.find("\"a\"") < text.find("\"b\""));
  CHECK(text.find("\"c\"") < text.find("\"d\""));
  CHECK(text.find("5.000000000000e-01") != std::string::npos);
}

TEST_CASE("empty results write nothing") {
  const auto path = scratch("empty.json");
  fs::remove(path);
  CHECK_THROWS_AS(emit_report({}, ReportFormat::Json, path.string(), "0"), std::invalid_argument);
  CHECK(!fs::exists(path));
  SuiteResult r;
  r.suite = "x";
  r.checks.push_back(make_check("c", 0.0, "<=", 1.0));
  CHECK_THROWS_AS(emit_report({r}, ReportFormat::Json, "/nonexistent/dir/out.json", "0"), std::runtime_error);
}

TEST_CASE("reports are byte identical across runs") {
  const auto cfg = default_config();
  for (auto format : {ReportFormat::Json, ReportFormat::Csv}) {
    const auto a = scratch("a.out"), b = scratch("b.out");
    emit_report(run_suites({"hp-dims", "clifford"}, cfg), format, a.string(), cfg.hash());
    emit_report(run_suites({"hp-dims", "clifford"}, cfg), format, b.string(), cfg.hash());
    CHECK(slurp(a) == slurp(b));
    CHECK(!slurp(a).empty());
  }
}

TEST_CASE("hp-dims report content") {
  const auto res = run_suite("hp-dims", default_config());
  CHECK(res.pass());
  const auto doc = report_document({res}, "abc");
  CHECK(doc["config_hash"] == "abc");
  std::vector<long> hp0;
  for (const auto& row : doc["suites"][0]["data"]["groups"]) hp0.push_back(row["hp0"].get<long>());
  CHECK(hp0 == std::vector<long>{2, 6, 8, 9, 10});
}

TEST_CASE("decay tables round trip through csv") {
  const GridSpec g(1, 8.0, 0.125);
  const auto f = GridFunction::sample_scalar(g, [](std::span<const double> x) { return cplx(std::pow(1.0 + std::abs(x[0]), -3.0)); });
  SuiteResult r;
  r.suite = "decay";
  r.checks.push_back(make_check("order", 3.0, ">=", 2.0));
  r.tables.emplace_back("f", decay_csv(decay_order(f, 1.0, 7.0)));
  const auto path = scratch("decay.csv");
  emit_report({r}, ReportFormat::Csv, path.string(), "0");
  std::ifstream in(scratch("decay.decay.f.csv"));
  REQUIRE(in.good());
  std::string header, line;
  std::getline(in, header);
  CHECK(header == "radius,value,fit_residual");
  int rows = 0;
  while (std::getline(in, line)) {
    double a, b, c;
    CHECK(std::sscanf(line.c_str(), "%lf,%lf,%lf", &a, &b, &c) == 3);
    ++rows;
  }
  CHECK(rows >= 6);
  CHECK(slurp(path).rfind("suite,check,value,relation,threshold,pass", 0) == 0);
}

TEST_CASE("verify exit codes") {
  CHECK(run("hp-dims") == 0);
  CHECK(run("--suite clifford --group Z2") == 0);
  CHECK(run("warp") == 2);
  CHECK(run("--config /nonexistent.toml hp-dims") == 2);
  CHECK(run("--format yaml hp-dims") == 2);
  CHECK(run("--refine 9 hp-dims") == 2);
  const auto strict = scratch("strict.toml");
  std::ofstream(strict) << "[tolerances]\nclifford_wave = 1e-300\n";
  CHECK(run("--config " + strict.string() + " clifford") == 1);
  const auto out = scratch("cli.json");
  fs::remove(out);
  CHECK(run("hp-dims --out " + out.string()) == 0);
  const auto doc = nlohmann::json::parse(slurp(out));
  CHECK(doc["pass"] == true);
  auto effective = default_config();
  effective.suites = {"hp-dims"};
  CHECK(doc["config_hash"].get<std::string>() == effective.hash());
}
