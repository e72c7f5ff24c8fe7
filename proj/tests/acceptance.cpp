// Acceptance criteria: one PASS/FAIL line each, tolerances pinned here.

#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "nct/clifford.hpp"
#include "nct/config.hpp"
#include "nct/orbifold_hp.hpp"
#include "nct/suites.hpp"
#include "oracles.hpp"

using namespace nct;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

RunConfig pinned_config() {
  RunConfig cfg = default_config();
  cfg.tolerances = {{"adjoint_pairing", 1e-4},  {"chi_odd", 1e-12},          {"chi_tail", 10.0},
                    {"clifford_wave", 1e-10},   {"decay_order", 4.0},        {"invariance", 1e-6},
                    {"refinement_floor", 1e-10}, {"refinement_ratio", 1.8},  {"rho_stabilization", 1e-12},
                    {"star_phase", 1e-4},       {"takai_defect", 1e-3},      {"theta_defect", 1e-3},
                    {"theta_identity", 1e-8}};
  cfg.groups = {1, 2, 3, 4, 6};
  cfg.refine = 3;
  cfg.n = 2;
  return cfg;
}

struct Timed {
  SuiteResult result;
  double seconds = 0.0;
};

const Timed& suite(const std::string& name) {
  static std::map<std::string, Timed> cache;
  auto it = cache.find(name);
  if (it == cache.end()) {
    const auto t0 = std::chrono::steady_clock::now();
    Timed t{run_suite(name, pinned_config()), 0.0};
    t.seconds = seconds_since(t0);
    it = cache.emplace(name, std::move(t)).first;
  }
  return it->second;
}

/// Checks of a suite whose name starts with one of the prefixes (all when empty).
Outcome from_suite(const std::string& name, const std::vector<std::string>& prefixes, double max_seconds = 0.0) {
  const auto& t = suite(name);
  Outcome out{true, ""};
  int used = 0;
  for (const auto& c : t.result.checks) {
    bool wanted = prefixes.empty();
    for (const auto& p : prefixes) wanted = wanted || c.name.rfind(p, 0) == 0;
    if (!wanted) continue;
    ++used;
    if (!c.pass) {
      out.pass = false;
      out.detail += " " + c.name + "=" + format_double(c.value) + " (" + c.relation + " " + format_double(c.threshold) + ")";
    }
  }
  if (used == 0) {
    out.pass = false;
    out.detail += " no checks matched";
  }
  if (max_seconds > 0.0 && t.seconds >= max_seconds) {
    out.pass = false;
    out.detail += " runtime " + std::to_string(t.seconds) + " s";
  }
  if (out.pass) out.detail = " " + std::to_string(used) + " checks, " + std::to_string(t.seconds) + " s";
  return out;
}

Outcome hp_constants() {
  const auto t0 = std::chrono::steady_clock::now();
  const std::map<int, std::pair<long, long>> expected{{1, {2, 2}}, {2, {6, 0}}, {3, {8, 0}}, {4, {9, 0}}, {6, {10, 0}}};
  Outcome out{true, ""};
  for (const auto& [k, dims] : expected) {
    const auto G = CyclicAction::standard(k);
    const auto hp = hp_dimensions(G);
    const auto K = k_ranks(G);
    out.detail += " Z" + std::to_string(k) + "=(" + std::to_string(hp.even) + "," + std::to_string(hp.odd) + ")";
    if (hp.even != dims.first || hp.odd != dims.second || K.k0 != hp.even || K.k1 != hp.odd) out.pass = false;
  }
  const double s = seconds_since(t0);
  if (s >= 1.0) out.pass = false;
  out.detail += " in " + std::to_string(s) + " s";
  return out;
}

Outcome k_constants() {
  const std::map<int, long> expected{{2, 6}, {3, 8}, {4, 9}, {6, 10}};
  Outcome out{true, ""};
  for (const auto& [k, k0] : expected) {
    const auto K = k_ranks(CyclicAction::standard(k));
    out.detail += " Z" + std::to_string(k) + "=(" + std::to_string(K.k0) + "," + std::to_string(K.k1) + ")";
    if (K.k0 != k0 || K.k1 != 0) out.pass = false;
  }
  return out;
}

Outcome clifford_closed_form() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937 rng(2024);
  std::uniform_real_distribution<double> X(-10.0, 10.0), S(-5.0, 5.0);
  double worst = 0.0;
  for (int n = 1; n <= 3; ++n)
    for (int i = 0; i < 100; ++i) {
      std::vector<double> xi(n);
      for (double& v : xi) v = X(rng);
      const double s = S(rng);
      worst = std::max(worst, (oracle::represent(wave_operator(s, xi)) - oracle::wave(s, xi)).cwiseAbs().maxCoeff());
    }
  const double sec = seconds_since(t0);
  return {worst <= 1e-10 && sec < 5.0, " max error " + format_double(worst) + " in " + std::to_string(sec) + " s"};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"HP constants", hp_constants},
      {"K constants", k_constants},
      {"Clifford closed form", clifford_closed_form},
      {"normalizing function", [] { return from_suite("chi", {"odd", "positive", "bounded_by_one", "schwartz_tail"}, 10.0); }},
      {"Sigma decay", [] { return from_suite("sigma-decay", {}, 60.0); }},
      {"Dirac lemmas", [] { return from_suite("dirac-lemmas", {"commutator", "defect"}, 120.0); }},
      {"G-invariance of D", [] { return from_suite("dirac-lemmas", {"Z"}); }},
      {"star product", [] { return from_suite("star-product", {"associativity", "oracle", "beta"}); }},
      {"Theta_J", [] { return from_suite("theta-j", {}, 300.0); }},
      {"Takesaki-Takai", [] { return from_suite("takai", {}); }},
      {"G-index", [] { return from_suite("rg-index", {}); }},
      {"composition and adjoint", [] { return from_suite("dirac-lemmas", {"compose", "adjoint"}); }},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string(" error: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::printf("%s %2zu %s:%s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria pass\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
