#pragma once

// Grid model of S(R^n, A) x| R^n for A = C or the torus algebra: twisted
// convolution, the dual action, the Takesaki-Takai map onto smoothing kernels,
// Neshveyev's Theta_J and the translation group gamma.
//
// Variable ordering: functions on R_n x R^n are sampled as (dual, primal), so
// F(t, s) has t first; kernels k(s, r) keep (row, column) order.

#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "nct/finite_group.hpp"
#include "nct/grid.hpp"
#include "nct/nctorus.hpp"

namespace nct {

/// Finite list of torus modes carried by a grid function, one component each.
class ModeBasis {
 public:
  explicit ModeBasis(std::vector<Mode> modes);
  /// The single mode 0 in dimension n (scalar coefficients).
  static ModeBasis scalar(int n);
  /// All modes with max |m_i| <= radius.
  static ModeBasis box(int n, int radius);
  /// Smallest set containing `seed` and closed under m -> g^{-T} m.
  static ModeBasis orbit_closure(const std::vector<Mode>& seed, const CyclicAction& G);

  int torus_dim() const { return n_; }
  std::size_t size() const { return modes_.size(); }
  const Mode& operator[](std::size_t i) const { return modes_[i]; }
  const std::vector<Mode>& modes() const { return modes_; }
  /// Index of a mode or npos.
  std::size_t find(const Mode& m) const;
  bool operator==(const ModeBasis& o) const { return modes_ == o.modes_; }

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

 private:
  int n_;
  std::vector<Mode> modes_;
  std::map<Mode, std::size_t> index_;
};

/// alpha_x (translation), alpha_{s x} (scaled) or the trivial action.
struct ActionDescriptor {
  enum class Kind { Trivial, Translation, Scaled } kind = Kind::Translation;
  double scale = 1.0;

  static ActionDescriptor trivial() { return {Kind::Trivial, 0.0}; }
  static ActionDescriptor translation() { return {Kind::Translation, 1.0}; }
  static ActionDescriptor scaled(double s) { return {Kind::Scaled, s}; }
  /// Effective multiplier of x in alpha_x.
  double factor() const { return kind == Kind::Trivial ? 0.0 : scale; }
  bool operator==(const ActionDescriptor& o) const {
    return kind == o.kind && factor() == o.factor();
  }
};

class RnCrossedElement {
 public:
  RnCrossedElement(GridFunction data, ModeBasis modes, ActionDescriptor action);

  /// Samples fn(x)_m for every mode of the basis.
  static RnCrossedElement sample(const GridSpec& spec, const ModeBasis& modes,
                                 ActionDescriptor action,
                                 const std::function<cplx(std::span<const double>, const Mode&)>& fn);

  const GridFunction& data() const { return data_; }
  GridFunction& data() { return data_; }
  const ModeBasis& modes() const { return modes_; }
  const ActionDescriptor& action() const { return action_; }
  const GridSpec& spec() const { return data_.spec(); }

  /// Coefficients dropped at the box boundary or outside the mode basis.
  std::vector<std::string> warnings;

  /// Max over grid and modes of the absolute difference.
  double distance(const RnCrossedElement& other) const;
  RnCrossedElement operator-(const RnCrossedElement& other) const;

 private:
  GridFunction data_;
  ModeBasis modes_;
  ActionDescriptor action_;
};

/// (f * f')_p(x) = sum_{m+n=p} e(<Jm, n>) int f_m(y) e(-c <y, n>) f'_n(x - y) dy,
/// c the action factor; J = 0 gives the product of A itself. Modes of the
/// product outside the basis are dropped with a warning.
RnCrossedElement twisted_conv(const RnCrossedElement& f, const RnCrossedElement& g);
RnCrossedElement twisted_conv(const RnCrossedElement& f, const RnCrossedElement& g,
                              const DeformationMatrix& J);

/// (hat-alpha_x f)(s) = e(<x, s>) f(s).
RnCrossedElement dual_action(std::span<const double> x, const RnCrossedElement& f);

/// (gamma_t f)(s) = f(s - t): index shift when t is on the lattice, multilinear
/// interpolation otherwise. Mass shifted out of the box is dropped with a warning.
RnCrossedElement gamma_action(std::span<const double> t, const RnCrossedElement& f);

/// Theta_J(f)(x) = int alpha_{Jy}(f_hat(y)) e(<x, y>) dy, evaluated as the
/// spectral shift Theta_J(f)_m(x) = f_m(x + Jm).
RnCrossedElement theta_J(const RnCrossedElement& f, const DeformationMatrix& J);

/// beta_g applied pointwise together with x -> g x on the grid:
/// (g f)(x) = beta_g(f(g^{-1} x)).
RnCrossedElement group_action(const IntMatrix2& g, const RnCrossedElement& f);

// ---------------------------------------------------------------------------
// Double crossed product and kernels.

/// Element of (A x| R^n) x| R_n: grid over R_n x R^n (dim 2n) with torus modes.
struct DoubleCrossed {
  GridFunction data;  // points (t, s)
  ModeBasis modes;
  ActionDescriptor action;
};

/// Smoothing-kernel stand-in k(s, r) on R^n x R^n with torus-mode values.
struct SmoothKernel {
  GridFunction data;  // points (s, r)
  ModeBasis modes;
};

/// Phi(F)(s, r) = alpha_r^{-1} int F(t, s) e(<r - s, t>) dt.
SmoothKernel takai_map(const DoubleCrossed& F);

/// (F * F')(t, s) = int int F(tau, sigma) alpha_sigma(F'(t - tau, s - sigma))
/// e(<tau, s - sigma>) dtau dsigma (torus product undeformed).
DoubleCrossed double_crossed_mul(const DoubleCrossed& F, const DoubleCrossed& G);

/// Product matching Phi(F * F') = Phi(F) o Phi(F'):
/// (k o k')(s, r) = int k(sigma, r) k'(s - sigma, r - sigma) dsigma.
SmoothKernel kernel_compose(const SmoothKernel& k, const SmoothKernel& kp);

/// (g F)(t, s) = beta_g(F(g^T t, g^{-1} s)).
DoubleCrossed double_group_action(const IntMatrix2& g, const DoubleCrossed& F);
/// (g k)(s, r) = beta_g(k(g^{-1} s, g^{-1} r)).
SmoothKernel kernel_group_action(const IntMatrix2& g, const SmoothKernel& k);

/// Max absolute difference of two grid functions on the same grid.
double max_difference(const GridFunction& a, const GridFunction& b);

/// JSON verification record {lemma_id, grid: {L, h}, defect, refinement_ratios, pass}.
struct VerificationRecord {
  std::string lemma_id;
  double L = 0.0;
  double h = 0.0;
  double defect = 0.0;
  std::vector<double> refinement_ratios;
  bool pass = false;
};

}  // namespace nct
