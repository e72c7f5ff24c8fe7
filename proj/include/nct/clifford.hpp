#pragma once

// Complexified Clifford algebra C_n on generators e_1..e_n with the relations
// e_i e_j + e_j e_i = 2 delta_ij. Generators square to +1, so the Clifford
// multiplication c(xi) = sum_j xi_j e_j satisfies c(xi)^2 = |xi|^2 * 1.

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>
#include <boost/rational.hpp>

namespace nct {

using cplx = std::complex<double>;

class NormalizingFunction;
struct QuadratureSpec;

/// Element of C_n stored as 2^n blade coefficients. Blade index is a bitmask:
/// bit i set means e_{i+1} appears (in increasing order).
class CliffordElement {
 public:
  explicit CliffordElement(int n);

  static CliffordElement scalar(int n, cplx value);
  static CliffordElement generator(int n, int axis);  // axis is 0-based
  static CliffordElement blade(int n, unsigned mask, cplx value = 1.0);

  int rank() const { return n_; }
  std::size_t size() const { return coeffs_.size(); }

  cplx operator[](unsigned mask) const { return coeffs_[mask]; }
  cplx& operator[](unsigned mask) { return coeffs_[mask]; }
  std::span<const cplx> coeffs() const { return coeffs_; }

  CliffordElement& operator+=(const CliffordElement& other);
  CliffordElement& operator-=(const CliffordElement& other);
  CliffordElement& operator*=(cplx s);

  /// Grading involution epsilon: e_A -> (-1)^{|A|} e_A.
  CliffordElement grade_involution() const;
  /// Star involution with self-adjoint generators (conjugate + reversion).
  CliffordElement adjoint() const;
  /// 0 for even, 1 for odd, nullopt for mixed parity. Zero is even.
  std::optional<int> parity(double tol = 0.0) const;
  /// Euclidean norm of the coefficient vector.
  double norm() const;

 private:
  int n_;
  std::vector<cplx> coeffs_;
};

CliffordElement operator+(CliffordElement a, const CliffordElement& b);
CliffordElement operator-(CliffordElement a, const CliffordElement& b);
CliffordElement operator*(cplx s, CliffordElement a);
CliffordElement operator*(const CliffordElement& a, const CliffordElement& b);

/// Sign of e_A e_B relative to e_{A xor B}.
int blade_sign(unsigned a, unsigned b);

/// Structure-constant product. Throws std::invalid_argument on rank mismatch.
CliffordElement clifford_mul(const CliffordElement& a, const CliffordElement& b);

/// c(xi) = sum_j xi_j e_j with n = xi.size().
CliffordElement clifford_vector(std::span<const double> xi);

/// e^{i s c(xi)} = cos(s|xi|) + i c(xi) sin(s|xi|)/|xi|; the quotient is taken
/// through its power series below |xi| = 1e-6.
CliffordElement wave_operator(double s, std::span<const double> xi);

/// Automorphism of C_n induced by an orthogonal map R of R^n (e_i -> c(R e_i)).
CliffordElement orthogonal_action(const Eigen::MatrixXd& rotation,
                                  const CliffordElement& a);

/// chi(c(xi)) := integral chi_hat(s) e^{i s c(xi)} ds, evaluated by pairing the
/// nodes s and -s of a midpoint rule on the support of chi_hat. Throws
/// std::domain_error if the s-step cannot resolve the frequency |xi|.
CliffordElement chi_of_clifford(const NormalizingFunction& chi,
                                std::span<const double> xi,
                                const QuadratureSpec& quad);

// ---------------------------------------------------------------------------
// Derivatives of h(y) = sin(y)/y.

using Rational = boost::rational<std::int64_t>;

/// d^n h / dy^n = (sin(y) phi_n(y) + cos(y) psi_n(y)) / y^{n+1}.
/// Coefficients are stored lowest degree first.
struct PolyPair {
  int order = 0;
  std::vector<Rational> phi;
  std::vector<Rational> psi;
};

PolyPair h_derivative_polys(int order);

/// Evaluates the closed form of a PolyPair at y != 0.
double evaluate_closed_form(const PolyPair& polys, double y);

/// d^n h / dy^n at any y (Taylor series near the origin, closed form outside).
double h_derivative(int order, double y);

}  // namespace nct
