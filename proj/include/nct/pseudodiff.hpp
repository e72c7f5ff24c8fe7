#pragma once

// Normalizing function, the dual-Dirac symbol Sigma(xi) = chi(c(xi)), torus
// symbols and the operators D_rho on S(R^n, A) x| R^n.

#include <functional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "nct/clifford.hpp"
#include "nct/crossed_rn.hpp"
#include "nct/finite_group.hpp"
#include "nct/grid.hpp"
#include "nct/nctorus.hpp"

namespace nct {

/// chi(lambda) = int g(s) sin(lambda s)/s ds with the even profile
/// g(s) = (1/pi) exp(-s^2/(2 tau^2)) exp(1 - 1/(1 - (s/sigma)^2)), tau = sigma/8,
/// supported on [-sigma, sigma]. Then chi_hat(s) = -i g(s)/s.
class NormalizingFunction {
 public:
  NormalizingFunction(double sigma, int nodes);

  double sigma() const { return sigma_; }
  double tau() const { return sigma_ / 8.0; }
  int nodes() const { return nodes_; }

  double profile(double s) const;
  /// -i g(s)/s; the principal value at s = 0 is reported as 0.
  cplx chi_hat(double s) const;
  /// chi(lambda), odd by construction.
  double value(double lambda) const;
  /// d^k chi / d lambda^k = int g(s) s^{k-1} d^k/dlambda^k sin(lambda s) ds.
  double derivative(double lambda, int order = 1) const;

 private:
  double sigma_;
  int nodes_;
  std::vector<double> s_;  // positive midpoint nodes
  std::vector<double> w_;  // 2 g(s) ds
};

/// Builds chi and checks its invariants: oddness, |chi| <= 1 and chi > 0 on a
/// dense sample of (0, lambda_test]. Throws std::domain_error on failure.
NormalizingFunction build_chi(double sigma = 8.0, double lambda_test = 50.0, int nodes = 8192);

// ---------------------------------------------------------------------------

template <class V>
struct Symbol {
  double order = 0.0;
  int n = 1;
  std::function<V(std::span<const double>)> eval;
  /// Optional analytic derivative d^k/dxi^k.
  std::function<V(std::span<const double>, std::span<const int>)> deriv;
};

using CliffordSymbol = Symbol<CliffordElement>;
using TorusSymbol = Symbol<TorusElement>;

/// Sigma(xi) = chi(c(xi)) in the Euclidean metric, evaluated by chi_of_clifford.
CliffordSymbol sigma_symbol(const NormalizingFunction& chi, int n, const QuadratureSpec& quad);
/// Sigma in the metric |xi|_Q = |Q xi| (dual invariant metric M^{-1} = Q^T Q).
CliffordSymbol sigma_symbol(const NormalizingFunction& chi, const Eigen::MatrixXd& Q,
                            const QuadratureSpec& quad);
/// chi(|xi|) c(xi) / |xi|.
CliffordElement sigma_closed_form(const NormalizingFunction& chi, std::span<const double> xi);

/// d Sigma / d xi_j = int g(s) (e_j H + c(xi) d_j H) ds with H = h(s|xi|),
/// obtained by differentiating e^{isc(xi)} under the chi_hat integral.
CliffordElement sigma_derivative(const NormalizingFunction& chi, std::span<const double> xi, int axis,
                                 const QuadratureSpec& quad);

/// Decay report of xi -> || d Sigma / d xi_j || over [r_min, r_max] on `grid`.
DecayReport symbol_derivative_decay(const NormalizingFunction& chi, const GridSpec& grid, int axis,
                                    double r_min, double r_max, const QuadratureSpec& quad);

/// |xi|^l int g(s) d^J H ds at |xi| = r along the axis e_1 (J multi-index).
double boundedness_probe(const NormalizingFunction& chi, double r, int l, std::span<const int> J,
                         const QuadratureSpec& quad);

struct SymbolClassReport {
  double order = 0.0;
  std::vector<std::vector<int>> multi_indices;
  std::vector<double> seminorms;       // sup (1+|xi|)^{|j|-m} ||d^j rho||
  std::vector<double> growth_ratios;   // outer-half sup / inner-half sup
  bool bounded = false;
};

/// Samples the symbol-class seminorms for |j| <= j_max on shells in
/// [r_min, r_max] (central differences with step `delta` unless an analytic
/// derivative is supplied). A seminorm counts as bounded when its outer-half
/// sup does not exceed twice its inner-half sup.
template <class V>
SymbolClassReport check_symbol_class(const Symbol<V>& rho, int j_max, double r_min, double r_max,
                                     const std::function<double(const V&)>& norm, double delta = 1e-3);

struct PrincipalPartReport {
  std::vector<double> cauchy_steps;  // per ray: max(|p(8)-p(4)|, |p(16)-p(8)|)
  bool converging = false;
};

/// lambda^{-m} rho(lambda omega) along 8 rays at lambda in {4, 8, 16}: the
/// step 8->16 must not exceed the step 4->8 and must be below tol.
template <class V>
PrincipalPartReport principal_part_check(const Symbol<V>& rho,
                                         const std::function<double(const V&)>& norm, double tol);

// ---------------------------------------------------------------------------
// Kernels of the Dirac lemmas (n = 2).

struct KernelGrid {
  double xi_half_width = 16.0;  // L of the xi grid
  double x_half_width = 12.0;   // L of the x grid; xi step = 1/(2 x_half_width)
};

struct DiracKernel {
  GridFunction kernel;    // x grid; components Clifford blade (x) torus mode
  ModeBasis modes;
  double error_estimate;  // Richardson spread
  bool converged;
};

/// x -> Sigma_hat(x) (alpha_x(a) - a) with Sigma_hat the epsilon-regularized
/// transform of Sigma, extrapolated to epsilon = 0.
DiracKernel dirac_commutator_kernel(const TorusElement& a, const NormalizingFunction& chi,
                                    const KernelGrid& grid, const QuadratureSpec& quad);
/// Fourier transform of xi -> a (1 - chi(|xi|)^2).
DiracKernel dirac_defect_kernel(const TorusElement& a, const NormalizingFunction& chi,
                                const KernelGrid& grid, const QuadratureSpec& quad);

struct InvarianceReport {
  std::vector<double> pointwise_defects;  // per group element: max_xi ||beta_g Sigma(g^T xi) - Sigma(xi)||
  std::vector<double> transform_defects;  // per group element: ||Sigma_hat(g x) - beta_g Sigma_hat(x)||
  double max_defect = 0.0;
};

/// Clifford image of g: orthogonal_action(O^T) with O = Q g^T Q^{-1}.
CliffordElement clifford_beta(const CyclicAction& G, int r, const CliffordElement& v);
/// Q with Q^T Q = M^{-1}, M the invariant Gram matrix.
Eigen::MatrixXd dual_metric_factor(const CyclicAction& G);

InvarianceReport check_D_invariance(const NormalizingFunction& chi, const CyclicAction& G,
                                    std::span<const std::vector<double>> xi_samples,
                                    const QuadratureSpec& quad);

// ---------------------------------------------------------------------------
// Torus-valued symbols and D_rho.

/// D_rho(u)_p(t) = sum_{m+n=p} e(c <t, m>) F^{-1}[rho_m(-xi) u_hat_n(xi)](t).
RnCrossedElement apply_D(const TorusSymbol& rho, const RnCrossedElement& u);

/// Truncated expansion sum_{|k|<=N} (2 pi i)^{-|k|}/k! d^k rho1 delta^k(rho2)
/// with delta = c * derivation for the action factor c.
TorusSymbol symbol_compose(const TorusSymbol& rho1, const TorusSymbol& rho2, int N,
                           const ActionDescriptor& action);
/// Truncated expansion sum_{|k|<=N} (2 pi i)^{-|k|}/k! delta^k((d^k rho)(xi)*).
TorusSymbol symbol_adjoint(const TorusSymbol& rho, int N, const ActionDescriptor& action);

/// Exact composite symbol sum a_m(xi - c n) b_n(xi) U_{m+n}.
TorusSymbol symbol_compose_exact(const TorusSymbol& a, const TorusSymbol& b,
                                 const ActionDescriptor& action);

/// Gaussian torus symbol sum_m coeff_m exp(-pi |xi - center|^2 / W^2) U_m with
/// analytic derivatives.
TorusSymbol gaussian_symbol(const TorusElement& coeffs, std::vector<double> center, double width);
/// Constant symbol xi -> a.
TorusSymbol constant_symbol(const TorusElement& a, int n);

/// Grid l^2 pairing sum_t sum_m conj(u_m(t)) v_m(t) h^n.
cplx crossed_pairing(const RnCrossedElement& u, const RnCrossedElement& v);

}  // namespace nct

#include "nct/pseudodiff_impl.hpp"
