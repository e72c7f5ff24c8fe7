#pragma once

// Verification suites driven by a RunConfig, and the measurement helpers they
// share with the tests.

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "nct/config.hpp"
#include "nct/grid.hpp"
#include "nct/nctorus.hpp"
#include "nct/report.hpp"

namespace nct {

/// Runs one registered suite. Throws ConfigError for an unknown name.
SuiteResult run_suite(const std::string& name, const RunConfig& cfg);
/// Runs the suites concurrently; results keep the order of `names`.
std::vector<SuiteResult> run_suites(const std::vector<std::string>& names, const RunConfig& cfg);

struct RefinementRow {
  double h = 0.0;
  double defect = 0.0;
};

struct RefinementTable {
  std::vector<RefinementRow> rows;  // coarse to fine
  std::vector<double> ratios;       // defect(coarser) / defect(finer)
  /// Every step shrinks by `ratio`, or lands below `floor`.
  bool contract = false;
};

/// Steps h0 * 2^{1-i}, i = 0..count-1, so the default step is the second row.
RefinementTable refinement_table(double h0, int count, const std::function<double(double)>& defect,
                                 double ratio, double floor);
nlohmann::json to_json(const RefinementTable& t);

struct StarOracleReport {
  std::vector<std::pair<Mode, Mode>> pairs;
  std::vector<cplx> values;      // extrapolated integral for U_m x_J U_n
  double max_phase_error = 0.0;  // | arg(value) - 2 pi <Jm, n> | wrapped
  double max_modulus_error = 0.0;
  bool converged = true;
};

/// U_m x_J U_n = int int alpha_{Jx}(U_m) alpha_y(U_n) e(x.y) dx dy on R^2 x R^2,
/// by Gaussian-regularized trapezoidal sums per coordinate and log-Richardson
/// extrapolation, for all m, n with max |m_i|, |n_i| <= radius.
StarOracleReport star_product_oracle(const DeformationMatrix& J, int radius);

}  // namespace nct
