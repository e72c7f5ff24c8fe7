#pragma once

// Run configuration: a plain key-value file with [sections], overlaid on the
// defaults below.

#include <istream>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "nct/grid.hpp"

namespace nct {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  double grid_L = 8.0;
  double grid_h = 0.25;
  QuadratureSpec quad;
  double chi_sigma = 8.0;
  std::map<std::string, double> tolerances;
  std::vector<int> groups{1, 2, 3, 4, 6};
  std::vector<std::string> suites{"all"};
  int refine = 3;  // resolutions in refinement tables
  int n = 2;       // dimension for sigma-decay
  double takai_L = 3.0;
  double takai_h = 0.125;

  /// Throws ConfigError for an unknown tolerance name.
  double tol(const std::string& name) const;
  /// Sorted key=value lines covering every field.
  std::string canonical() const;
  /// FNV-1a of canonical(), 16 hex digits.
  std::string hash() const;
};

RunConfig default_config();
RunConfig parse_config(std::istream& in);
/// Throws ConfigError when the file is missing or malformed.
RunConfig load_config(const std::string& path);
/// Suites exist, tolerances positive, grids well formed.
void validate_config(const RunConfig& cfg);

/// Suite names accepted by run_suite, in execution order.
const std::vector<std::string>& registered_suites();
/// Expands "all" and removes duplicates, keeping registry order.
std::vector<std::string> expand_suites(const std::vector<std::string>& names);

}  // namespace nct
