#pragma once

// Fourier-coefficient model of the smooth torus algebra and its Rieffel
// deformations. U_m is the basis element delta_m; the deformed algebra A_J
// shares the coefficient space and only swaps the product.

#include <complex>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <boost/rational.hpp>

namespace nct {

using cplx = std::complex<double>;
using Mode = std::vector<int>;

/// Phase constant in U_m x_J U_n = e(kStarPhaseSign <Jm, n>) U_{m+n}, pinned by
/// the oscillatory-integral oracle.
inline constexpr int kStarPhaseSign = 1;
/// theta_jk = kThetaPerJ * J_jk in the relation U_k U_j = e(theta_jk) U_j U_k.
inline constexpr int kThetaPerJ = 2;

class TorusElement {
 public:
  explicit TorusElement(int n = 2);

  static TorusElement basis(const Mode& m, cplx value = 1.0);
  static TorusElement unit(int n) { return basis(Mode(n, 0)); }

  int dim() const { return n_; }
  const std::map<Mode, cplx>& coeffs() const { return coeffs_; }
  cplx coeff(const Mode& m) const;
  /// Adds value to the coefficient of U_m (entries are kept even when zero).
  void add(const Mode& m, cplx value);
  bool empty() const { return coeffs_.empty(); }

  TorusElement& operator+=(const TorusElement& other);
  TorusElement& operator-=(const TorusElement& other);
  TorusElement& operator*=(cplx s);

  /// (a*)_m = conj(a_{-m}).
  TorusElement adjoint() const;
  /// sup_m |a_m|.
  double max_abs() const;
  /// Drops coefficients with |a_m| <= tol.
  TorusElement pruned(double tol = 0.0) const;

  bool operator==(const TorusElement& other) const = default;

 private:
  int n_;
  std::map<Mode, cplx> coeffs_;
};

TorusElement operator+(TorusElement a, const TorusElement& b);
TorusElement operator-(TorusElement a, const TorusElement& b);
TorusElement operator*(cplx s, TorusElement a);

/// Real antisymmetric n x n matrix.
class DeformationMatrix {
 public:
  explicit DeformationMatrix(Eigen::MatrixXd J);
  static DeformationMatrix zero(int n) { return DeformationMatrix(Eigen::MatrixXd::Zero(n, n)); }
  /// [[0, j], [-j, 0]].
  static DeformationMatrix planar(double j);

  int dim() const { return static_cast<int>(J_.rows()); }
  const Eigen::MatrixXd& matrix() const { return J_; }
  double operator()(int i, int j) const { return J_(i, j); }

 private:
  Eigen::MatrixXd J_;
};

/// <Jm, n> = sum_{i<j} J_ij (m_j n_i - m_i n_j), integer cross terms first so
/// that modes related by an SL_2(Z) change of basis give bit-identical phases.
double star_exponent(const DeformationMatrix& J, const Mode& m, const Mode& n);

/// Same bilinear form over an exact scalar type (rationals in tests).
template <class T>
T star_exponent_exact(const std::vector<std::vector<T>>& J, const Mode& m, const Mode& n) {
  T acc(0);
  const std::size_t d = m.size();
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i + 1; j < d; ++j)
      acc += J[i][j] * T(static_cast<long>(m[j]) * n[i] - static_cast<long>(m[i]) * n[j]);
  return acc;
}

/// a x_J b; supports add. Throws std::invalid_argument on dimension mismatch.
TorusElement star_J(const TorusElement& a, const TorusElement& b, const DeformationMatrix& J);
/// Undeformed product.
TorusElement star_0(const TorusElement& a, const TorusElement& b);

/// (alpha_x a)_m = e(-<x, m>) a_m.
TorusElement alpha(std::span<const double> x, const TorusElement& a);
/// alpha_{s x}(a), s in [0, 1].
TorusElement scaled_alpha(double s, std::span<const double> x, const TorusElement& a);
/// (delta_j a)_m = -2 pi i m_j a_m; axis is 0-based.
TorusElement derivation(int axis, const TorusElement& a);
/// Iterated derivation delta^k = prod_j delta_j^{k_j}.
TorusElement derivation(std::span<const int> multi_index, const TorusElement& a);

/// Canonical trace a_0.
cplx trace(const TorusElement& a);

/// sup_m (1 + |m|)^i |a_m|.
double smooth_seminorm(const TorusElement& a, int order);

std::string to_json(const TorusElement& a);
TorusElement torus_from_json(const std::string& text);

}  // namespace nct
