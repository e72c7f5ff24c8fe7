#include "nct/config.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <boost/algorithm/string.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "nct/report.hpp"

namespace nct {

namespace {

const std::map<std::string, double>& default_tolerances() {
  static const std::map<std::string, double> t{
      {"adjoint_pairing", 1e-4},    {"chi_odd", 1e-12},          {"chi_tail", 10.0},
      {"clifford_wave", 1e-10},     {"decay_order", 4.0},        {"invariance", 1e-6},
      {"refinement_floor", 1e-10},  {"refinement_ratio", 1.8},   {"rho_stabilization", 1e-12},
      {"star_phase", 1e-4},         {"takai_defect", 1e-3},      {"theta_defect", 1e-3},
      {"theta_identity", 1e-8},
  };
  return t;
}

std::string unquote(std::string s) {
  boost::algorithm::trim(s);
  if (s.size() >= 2 && (s.front() == '"' || s.front() == '\'') && s.back() == s.front())
    s = s.substr(1, s.size() - 2);
  return s;
}

std::vector<std::string> split_list(std::string s) {
  s = unquote(s);
  if (!s.empty() && s.front() == '[') s.erase(0, 1);
  if (!s.empty() && s.back() == ']') s.pop_back();
  std::vector<std::string> parts, out;
  boost::algorithm::split(parts, s, boost::is_any_of(","));
  for (auto& p : parts) {
    p = unquote(p);
    if (!p.empty()) out.push_back(p);
  }
  return out;
}

double to_real(const std::string& key, const std::string& text) {
  try {
    std::size_t used = 0;
    const std::string t = unquote(text);
    const double v = std::stod(t, &used);
    if (used != t.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config: " + key + " is not a number: " + text);
  }
}

int to_int(const std::string& key, const std::string& text) {
  const double v = to_real(key, text);
  if (v != static_cast<int>(v)) throw ConfigError("config: " + key + " is not an integer: " + text);
  return static_cast<int>(v);
}

std::string join_reals(const std::vector<double>& v) {
  std::string s;
  for (double x : v) s += (s.empty() ? "" : ",") + format_double(x);
  return s;
}

}  // namespace

double RunConfig::tol(const std::string& name) const {
  const auto it = tolerances.find(name);
  if (it == tolerances.end()) throw ConfigError("config: unknown tolerance " + name);
  return it->second;
}

std::string RunConfig::canonical() const {
  std::map<std::string, std::string> kv;
  kv["chi.sigma"] = format_double(chi_sigma);
  kv["grid.L"] = format_double(grid_L);
  kv["grid.h"] = format_double(grid_h);
  kv["quadrature.epsilon"] = join_reals(quad.epsilon_sequence);
  kv["quadrature.richardson_order"] = std::to_string(quad.richardson_order);
  kv["quadrature.mode"] = quad.mode == Extrapolation::Value ? "value" : "log";
  kv["quadrature.s_nodes"] = std::to_string(quad.s_nodes);
  std::string g;
  for (int k : groups) g += (g.empty() ? "" : ",") + std::to_string(k);
  kv["run.groups"] = g;
  kv["run.suites"] = boost::algorithm::join(suites, ",");
  kv["run.refine"] = std::to_string(refine);
  kv["run.n"] = std::to_string(n);
  kv["takai.L"] = format_double(takai_L);
  kv["takai.h"] = format_double(takai_h);
  for (const auto& [k, v] : tolerances) kv["tolerances." + k] = format_double(v);
  std::string out;
  for (const auto& [k, v] : kv) out += k + "=" + v + "\n";
  return out;
}

std::string RunConfig::hash() const {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(canonical())));
  return buf;
}

RunConfig default_config() {
  RunConfig cfg;
  cfg.tolerances = default_tolerances();
  return cfg;
}

RunConfig parse_config(std::istream& in) {
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  RunConfig cfg = default_config();
  for (const auto& [section, body] : tree) {
    if (body.empty() && !body.data().empty()) throw ConfigError("config: key outside a section: " + section);
    for (const auto& [key, node] : body) {
      const std::string name = section + "." + key;
      const std::string v = node.data();
      if (name == "grid.L") cfg.grid_L = to_real(name, v);
      else if (name == "grid.h") cfg.grid_h = to_real(name, v);
      else if (name == "chi.sigma") cfg.chi_sigma = to_real(name, v);
      else if (name == "takai.L") cfg.takai_L = to_real(name, v);
      else if (name == "takai.h") cfg.takai_h = to_real(name, v);
      else if (name == "quadrature.epsilon") {
        cfg.quad.epsilon_sequence.clear();
        for (const auto& p : split_list(v)) cfg.quad.epsilon_sequence.push_back(to_real(name, p));
      } else if (name == "quadrature.richardson_order") cfg.quad.richardson_order = to_int(name, v);
      else if (name == "quadrature.s_nodes") cfg.quad.s_nodes = to_int(name, v);
      else if (name == "quadrature.mode") {
        const auto m = unquote(v);
        if (m == "value") cfg.quad.mode = Extrapolation::Value;
        else if (m == "log") cfg.quad.mode = Extrapolation::Log;
        else throw ConfigError("config: quadrature.mode must be value or log");
      } else if (name == "run.groups") {
        cfg.groups.clear();
        for (const auto& p : split_list(v)) {
          auto t = p;
          if (!t.empty() && (t.front() == 'Z' || t.front() == 'z')) t.erase(0, 1);
          cfg.groups.push_back(to_int(name, t));
        }
      } else if (name == "run.suites") cfg.suites = split_list(v);
      else if (name == "run.refine") cfg.refine = to_int(name, v);
      else if (name == "run.n") cfg.n = to_int(name, v);
      else if (section == "tolerances") {
        if (!default_tolerances().count(key)) throw ConfigError("config: unknown tolerance " + key);
        cfg.tolerances[key] = to_real(name, v);
      } else {
        throw ConfigError("config: unknown key " + name);
      }
    }
  }
  validate_config(cfg);
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path);
  return parse_config(in);
}

void validate_config(const RunConfig& cfg) {
  try {
    GridSpec(2, cfg.grid_L, cfg.grid_h);
    GridSpec(1, cfg.takai_L, cfg.takai_h);
    cfg.quad.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  if (!(cfg.chi_sigma > 0.0)) throw ConfigError("config: chi.sigma must be positive");
  if (cfg.quad.s_nodes < 16) throw ConfigError("config: quadrature.s_nodes must be at least 16");
  for (const auto& [k, v] : cfg.tolerances)
    if (!(v > 0.0)) throw ConfigError("config: tolerance " + k + " must be positive");
  for (const auto& [k, v] : default_tolerances())
    if (!cfg.tolerances.count(k)) throw ConfigError("config: missing tolerance " + k);
  if (cfg.groups.empty()) throw ConfigError("config: run.groups is empty");
  for (int k : cfg.groups)
    if (k != 1 && k != 2 && k != 3 && k != 4 && k != 6)
      throw ConfigError("config: no cyclic subgroup of SL_2(Z) of order " + std::to_string(k));
  if (cfg.refine < 2 || cfg.refine > 4) throw ConfigError("config: run.refine must be in [2, 4]");
  if (cfg.n < 1 || cfg.n > 3) throw ConfigError("config: run.n must be 1, 2 or 3");
  if (cfg.suites.empty()) throw ConfigError("config: run.suites is empty");
  expand_suites(cfg.suites);
}

const std::vector<std::string>& registered_suites() {
  static const std::vector<std::string> names{"hp-dims", "clifford",     "chi",       "star-product",
                                              "crossed-g", "rg-index",   "theta-j",   "takai",
                                              "sigma-decay", "dirac-lemmas"};
  return names;
}

std::vector<std::string> expand_suites(const std::vector<std::string>& names) {
  std::set<std::string> wanted;
  for (const auto& n : names) {
    if (n == "all") {
      wanted.insert(registered_suites().begin(), registered_suites().end());
      continue;
    }
    if (std::find(registered_suites().begin(), registered_suites().end(), n) == registered_suites().end())
      throw ConfigError("unknown suite: " + n);
    wanted.insert(n);
  }
  std::vector<std::string> out;
  for (const auto& n : registered_suites())
    if (wanted.count(n)) out.push_back(n);
  return out;
}

}  // namespace nct
