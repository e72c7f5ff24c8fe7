#include "nct/report.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

namespace nct {

namespace {

void write_json(std::ostringstream& os, const nlohmann::json& v, int indent) {
  const std::string pad(2 * (indent + 1), ' '), close(2 * indent, ' ');
  switch (v.type()) {
    case nlohmann::json::value_t::object: {
      if (v.empty()) {
        os << "{}";
        return;
      }
      os << "{\n";
      bool first = true;
      for (auto it = v.begin(); it != v.end(); ++it) {  // std::map keeps keys sorted
        if (!first) os << ",\n";
        first = false;
        os << pad << nlohmann::json(it.key()).dump() << ": ";
        write_json(os, it.value(), indent + 1);
      }
      os << "\n" << close << "}";
      return;
    }
    case nlohmann::json::value_t::array: {
      if (v.empty()) {
        os << "[]";
        return;
      }
      os << "[\n";
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) os << ",\n";
        os << pad;
        write_json(os, v[i], indent + 1);
      }
      os << "\n" << close << "]";
      return;
    }
    case nlohmann::json::value_t::number_float: {
      const double d = v.get<double>();
      if (std::isfinite(d))
        os << format_double(d);
      else
        os << '"' << format_double(d) << '"';
      return;
    }
    default:
      os << v.dump();
  }
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += (c == '"') ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("emit_report: cannot write " + path);
  out << text;
  if (!out.flush()) throw std::runtime_error("emit_report: write failed for " + path);
}

}  // namespace

Check make_check(std::string name, double value, std::string relation, double threshold) {
  Check c{std::move(name), value, threshold, std::move(relation), false};
  if (c.relation == "<=")
    c.pass = value <= threshold;
  else if (c.relation == ">=")
    c.pass = value >= threshold;
  else if (c.relation == ">")
    c.pass = value > threshold;
  else if (c.relation == "==")
    c.pass = value == threshold;
  else
    throw std::invalid_argument("make_check: unknown relation " + c.relation);
  return c;
}

bool SuiteResult::pass() const {
  if (checks.empty()) return false;
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12e", v);
  return buf;
}

std::string canonical_json(const nlohmann::json& doc) {
  std::ostringstream os;
  write_json(os, doc, 0);
  os << "\n";
  return os.str();
}

nlohmann::json report_document(const std::vector<SuiteResult>& results, const std::string& config_hash) {
  nlohmann::json doc;
  doc["config_hash"] = config_hash;
  bool all = true;
  nlohmann::json suites = nlohmann::json::array();
  for (const auto& r : results) {
    nlohmann::json s;
    s["suite"] = r.suite;
    s["pass"] = r.pass();
    nlohmann::json checks = nlohmann::json::array();
    for (const auto& c : r.checks)
      checks.push_back({{"name", c.name}, {"value", c.value}, {"relation", c.relation},
                        {"threshold", c.threshold}, {"pass", c.pass}});
    s["checks"] = checks;
    s["data"] = r.data;
    s["warnings"] = r.warnings;
    suites.push_back(s);
    all = all && r.pass();
  }
  doc["pass"] = all;
  doc["suites"] = suites;
  return doc;
}

std::string checks_csv(const std::vector<SuiteResult>& results) {
  std::string out = "suite,check,value,relation,threshold,pass\n";
  for (const auto& r : results)
    for (const auto& c : r.checks)
      out += csv_field(r.suite) + "," + csv_field(c.name) + "," + format_double(c.value) + "," + c.relation +
             "," + format_double(c.threshold) + "," + (c.pass ? "1" : "0") + "\n";
  return out;
}

void emit_report(const std::vector<SuiteResult>& results, ReportFormat format, const std::string& path,
                 const std::string& config_hash) {
  if (results.empty()) throw std::invalid_argument("emit_report: no results");
  const std::string text = format == ReportFormat::Json
                               ? canonical_json(report_document(results, config_hash))
                               : checks_csv(results);
  if (path.empty()) {
    std::cout << text;
    return;
  }
  write_file(path, text);
  if (format != ReportFormat::Csv) return;
  const std::filesystem::path p(path);
  const auto stem = (p.parent_path() / p.stem()).string();
  for (const auto& r : results)
    for (const auto& [name, csv] : r.tables) write_file(stem + "." + r.suite + "." + name + ".csv", csv);
}

std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace nct
