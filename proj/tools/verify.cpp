// verify: runs the verification suites and writes a report.
//
//   verify all
//   verify hp-dims --group Z4
//   verify takai --refine 3 --format csv --out takai.csv
//
// Exit status: 0 all checks pass, 1 some check fails, 2 configuration error.

#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "nct/config.hpp"
#include "nct/report.hpp"
#include "nct/suites.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Verification suites for the noncommutative-torus workbench"};
  std::string config_path, out_path, format = "json";
  std::vector<std::string> positional, suites, groups;
  double grid_L = 0.0, grid_h = 0.0;
  int refine = 0, n = 0;
  app.add_option("suites", positional, "Suites to run (or 'all')");
  app.add_option("--config", config_path, "Configuration file")->check(CLI::ExistingFile);
  app.add_option("--suite", suites, "Suite to run (repeatable)");
  app.add_option("--grid-L", grid_L, "Grid half width");
  app.add_option("--grid-h", grid_h, "Grid step");
  app.add_option("--group", groups, "Restrict to the group Zk (repeatable)");
  app.add_option("--refine", refine, "Resolutions in refinement tables");
  app.add_option("--n", n, "Dimension for sigma-decay");
  app.add_option("--out", out_path, "Report path (stdout when omitted)");
  app.add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  nct::RunConfig cfg;
  std::vector<std::string> names;
  try {
    cfg = config_path.empty() ? nct::default_config() : nct::load_config(config_path);
    if (grid_L != 0.0) cfg.grid_L = grid_L;
    if (grid_h != 0.0) cfg.grid_h = grid_h;
    if (refine != 0) cfg.refine = refine;
    if (n != 0) cfg.n = n;
    if (!groups.empty()) {
      cfg.groups.clear();
      for (auto g : groups) {
        if (!g.empty() && (g.front() == 'Z' || g.front() == 'z')) g.erase(0, 1);
        std::size_t used = 0;
        const int k = std::stoi(g, &used);
        if (used != g.size()) throw nct::ConfigError("bad group: " + g);
        cfg.groups.push_back(k);
      }
    }
    suites.insert(suites.end(), positional.begin(), positional.end());
    if (!suites.empty()) cfg.suites = suites;
    nct::validate_config(cfg);
    names = nct::expand_suites(cfg.suites);
  } catch (const std::exception& e) {
    std::cerr << "verify: " << e.what() << "\n";
    return 2;
  }

  std::vector<nct::SuiteResult> results;
  try {
    results = nct::run_suites(names, cfg);
  } catch (const nct::ConfigError& e) {
    std::cerr << "verify: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "verify: suite error: " << e.what() << "\n";
    return 1;
  }
  try {
    nct::emit_report(results, format == "csv" ? nct::ReportFormat::Csv : nct::ReportFormat::Json, out_path,
                     cfg.hash());
  } catch (const std::exception& e) {
    std::cerr << "verify: " << e.what() << "\n";
    return 2;
  }
  for (const auto& r : results)
    if (!r.pass()) return 1;
  return 0;
}
