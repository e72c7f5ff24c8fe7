#pragma once

// Fixed-point and orbit counting for Z_k inside SL_2(Z) acting on T^2, giving
// the even/odd periodic cyclic homology ranks and the K-theory ranks of
// A_theta x| G. Everything here is exact integer or rational arithmetic.

#include <array>
#include <complex>
#include <vector>

#include "nct/clifford.hpp"
#include "nct/finite_group.hpp"

namespace nct {

using TorusPoint = std::array<Rational, 2>;

struct FixedPointData {
  int element = 0;  // power r of the generator
  IntMatrix2 g;
  std::vector<TorusPoint> points;  // representatives in [0, 1)^2
  long count = 0;                  // |det(g - I)|
};

/// Solutions of (g - I) x in Z^2 inside [0, 1)^2. Throws std::invalid_argument
/// for the identity element or when det(g - I) = 0.
FixedPointData fixed_points(const CyclicAction& G, int r);

/// g x reduced into [0, 1)^2.
TorusPoint act_on_torus(const IntMatrix2& g, const TorusPoint& x);

struct Stratum {
  int element = 0;
  long fixed_points = 0;
  long orbits = 0;
};

struct HPDims {
  long even = 0;
  long odd = 0;
  std::vector<Stratum> strata;  // one per non-identity element
};

/// even = 2 + sum_{g != e} #(G-orbits on Fix(g)); odd = rank of the averaging
/// projector on H^1(T^2) = C^2.
HPDims hp_dimensions(const CyclicAction& G);

/// (1/|G|) sum over commuting pairs (g, h) of the Euler characteristic of
/// Fix(g) cap Fix(h), by brute-force enumeration of the common fixed points.
Rational orbifold_euler(const CyclicAction& G);

struct KRanks {
  long k0 = 0;
  long k1 = 0;
};

/// K_1 from the character average (1/|G|) sum tr(rho_g), K_0 = orbifold Euler
/// number + K_1. Independent of the orbit count in hp_dimensions.
KRanks k_ranks(const CyclicAction& G);

struct ThetaRow {
  double theta = 0.0;
  HPDims dims;
  double beta_defect = 0.0;        // max |beta_g(a x b) - beta_g a x beta_g b| over test modes
  std::complex<double> idempotent_trace;
  double idempotent_defect = 0.0;  // |p * p - p| for p = (1/|G|) sum (1, g)
  std::complex<double> pairing;    // tau(a x_theta b) for fixed small a, b
};

struct ThetaReport {
  std::vector<ThetaRow> rows;
  bool constant = false;  // counted ranks and exact invariants agree at every theta
};

ThetaReport theta_independence_regression(const std::vector<double>& thetas, const CyclicAction& G);

}  // namespace nct
