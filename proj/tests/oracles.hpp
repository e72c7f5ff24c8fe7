#pragma once

// Independent reference computations for the tests: a faithful matrix model
// of C_n, brute-force sums and finite differences.

#include <complex>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

#include "nct/clifford.hpp"

namespace oracle {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;

inline Mat pauli(int which) {
  Mat s(2, 2);
  if (which == 0) s << 1, 0, 0, 1;
  if (which == 1) s << 0, 1, 1, 0;
  if (which == 2) s << 0, cplx(0, -1), cplx(0, 1), 0;
  if (which == 3) s << 1, 0, 0, -1;
  return s;
}

/// Generators of C_n, n <= 3, on C^{2^ceil(n/2)} (n = 3 uses a 4x4 model so
/// that e1 e2 e3 is not scalar).
inline std::vector<Mat> generators(int n) {
  if (n <= 2) {
    std::vector<Mat> g{pauli(1), pauli(2)};
    g.resize(n);
    return g;
  }
  return {Eigen::kroneckerProduct(pauli(1), pauli(0)).eval(), Eigen::kroneckerProduct(pauli(2), pauli(0)).eval(),
          Eigen::kroneckerProduct(pauli(3), pauli(3)).eval()};
}

inline Mat represent(const nct::CliffordElement& a) {
  const auto gens = generators(a.rank());
  const auto dim = gens.front().rows();
  Mat out = Mat::Zero(dim, dim);
  for (unsigned mask = 0; mask < a.size(); ++mask) {
    Mat blade = Mat::Identity(dim, dim);
    for (int i = 0; i < a.rank(); ++i)
      if (mask & (1u << i)) blade = blade * gens[i];
    out += a[mask] * blade;
  }
  return out;
}

inline Mat clifford_vector(const std::vector<double>& xi) {
  const auto gens = generators(static_cast<int>(xi.size()));
  Mat c = Mat::Zero(gens.front().rows(), gens.front().cols());
  for (std::size_t i = 0; i < xi.size(); ++i) c += xi[i] * gens[i];
  return c;
}

/// exp(i s c(xi)) by Eigen's matrix exponential.
inline Mat wave(double s, const std::vector<double>& xi) {
  const Mat a = cplx(0, s) * clifford_vector(xi);
  return a.exp();
}

}  // namespace oracle
