#pragma once

// Cyclic subgroups of SL_2(Z) acting on the torus algebra, smooth crossed
// products A x| G, the 2-cocycle omega_theta, the representation ring R(Z_k),
// G-indices of equivariant matrices and the [rho] stabilization morphism.

#include <complex>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "nct/nctorus.hpp"

namespace nct {

using IntMatrix2 = Eigen::Matrix2i;

/// Z_k inside SL_2(Z). Elements are indexed by the power r of the generator.
class CyclicAction {
 public:
  /// Fixed generators: k=1 I, k=2 -I, k=3 [[0,-1],[1,-1]], k=4 [[0,-1],[1,0]],
  /// k=6 [[1,-1],[1,0]]. Throws std::invalid_argument for other k.
  static CyclicAction standard(int k);
  /// Validates det(gen) = 1 and multiplicative order exactly k.
  CyclicAction(int k, const IntMatrix2& gen);

  int order() const { return k_; }
  const IntMatrix2& generator() const { return gen_; }
  /// rho(g^r), r taken mod k.
  IntMatrix2 element(int r) const;
  int inverse(int r) const { return ((k_ - r % k_) % k_); }
  int compose(int r, int s) const { return (r + s) % k_; }
  /// Invariant inner product (1/k) sum_g g^T g.
  Eigen::Matrix2d gram() const;
  std::string name() const { return "Z" + std::to_string(k_); }

 private:
  int k_;
  IntMatrix2 gen_;
  std::vector<IntMatrix2> powers_;
};

std::string to_json(const CyclicAction& G);
CyclicAction cyclic_from_json(const std::string& text);

/// (beta_g a)_m = a_{g^T m} for any integer matrix with det = +-1.
TorusElement beta_matrix(const IntMatrix2& g, const TorusElement& a);
TorusElement beta(const CyclicAction& G, int r, const TorusElement& a);

/// beta_g(a x_J b) - beta_g(a) x_J beta_g(b).
TorusElement beta_respects_star(const IntMatrix2& g, const TorusElement& a, const TorusElement& b,
                                const DeformationMatrix& J);

// ---------------------------------------------------------------------------
// Crossed products by a finite cyclic group.

/// Finite sum of (a_g, g); carrier[r] is the coefficient at g^r.
template <class A>
struct GroupCrossedElement {
  std::vector<A> carrier;
  int order() const { return static_cast<int>(carrier.size()); }
};

/// (a, g)(a', g') = (a g(a'), g g'), extended bilinearly. `act(r, a)` is the
/// action of g^r, `zero` is the additive identity of A.
template <class A, class Mul, class Act>
GroupCrossedElement<A> crossed_mul(const GroupCrossedElement<A>& x, const GroupCrossedElement<A>& y,
                                   const Mul& mul, const Act& act, const A& zero) {
  if (x.order() != y.order()) throw std::invalid_argument("crossed_mul: group mismatch");
  const int k = x.order();
  GroupCrossedElement<A> out{std::vector<A>(k, zero)};
  for (int r = 0; r < k; ++r)
    for (int s = 0; s < k; ++s) out.carrier[(r + s) % k] += mul(x.carrier[r], act(r, y.carrier[s]));
  return out;
}

using TorusCrossed = GroupCrossedElement<TorusElement>;
using MatrixCrossed = GroupCrossedElement<Eigen::MatrixXcd>;

TorusCrossed torus_crossed_zero(const CyclicAction& G, int n = 2);
/// (a, g^r) as a crossed element.
TorusCrossed torus_crossed_term(const CyclicAction& G, const TorusElement& a, int r);
/// Product in A_J^infty x| G with the beta action.
TorusCrossed crossed_mul(const TorusCrossed& x, const TorusCrossed& y, const CyclicAction& G,
                         const DeformationMatrix& J);
/// C sum_g p_i(g^{-1}(a_g)).
double crossed_seminorm(const TorusCrossed& x, const CyclicAction& G, int order, double C = 1.0);
/// Trace tau(a_e) of the identity component.
cplx crossed_trace(const TorusCrossed& x);

/// Matrix coefficient algebra with g^r acting by conjugation u^r a u^{-r}.
MatrixCrossed crossed_mul(const MatrixCrossed& x, const MatrixCrossed& y,
                          const Eigen::MatrixXcd& u);

// ---------------------------------------------------------------------------
// Twisted group algebra of Z^2.

/// omega_theta(x, y) = e(theta (x1 y2 - x2 y1)).
cplx cocycle_omega(double theta, const Mode& x, const Mode& y);
/// The deformation matrix with U_x x_J U_y = omega_theta(x, y) U_{x+y}.
DeformationMatrix cocycle_deformation(double theta);

// ---------------------------------------------------------------------------
// Representation ring R(Z_k).

/// Virtual character sum_j mult_j chi_j with chi_j(g^r) = e(j r / k).
class RGClass {
 public:
  explicit RGClass(int k);
  RGClass(int k, std::vector<long> multiplicities);
  static RGClass character(int k, int j);
  static RGClass regular(int k);

  int order() const { return k_; }
  const std::vector<long>& multiplicities() const { return mult_; }
  long dim() const;
  std::complex<double> trace(int r) const;

  RGClass& operator+=(const RGClass& o);
  RGClass& operator-=(const RGClass& o);
  bool operator==(const RGClass& o) const = default;

 private:
  int k_;
  std::vector<long> mult_;
};

RGClass operator+(RGClass a, const RGClass& b);
RGClass operator-(RGClass a, const RGClass& b);
RGClass operator*(const RGClass& a, const RGClass& b);
std::string to_json(const RGClass& c);

/// Finite-dimensional representation of Z_k given by rho(g^r) = gen^r.
class Representation {
 public:
  Representation(int k, Eigen::MatrixXcd gen);
  /// Diagonal representation with the listed characters.
  static Representation from_characters(int k, const std::vector<int>& labels);
  /// Throws std::invalid_argument unless rho(e) = 1 and rho(g)rho(h) = rho(gh).
  static Representation from_elements(std::vector<Eigen::MatrixXcd> elements, double tol = 1e-12);

  int order() const { return static_cast<int>(elements_.size()); }
  int dim() const { return static_cast<int>(elements_.front().rows()); }
  const Eigen::MatrixXcd& operator()(int r) const { return elements_[r % order()]; }
  /// Character decomposition of the whole representation.
  RGClass rg_class(double tol = 1e-8) const;

 private:
  Representation() = default;
  std::vector<Eigen::MatrixXcd> elements_;
};

struct KernelCokernel {
  RGClass kernel;
  RGClass cokernel;
};

/// Characters of ker T and coker T. Throws std::invalid_argument when T does
/// not intertwine the representations to within `tol`.
KernelCokernel kernel_cokernel(const Eigen::MatrixXcd& T, const Representation& dom,
                               const Representation& cod, double tol = 1e-9);
/// [ker T] - [coker T].
RGClass g_index(const Eigen::MatrixXcd& T, const Representation& dom, const Representation& cod,
                double tol = 1e-9);

/// Phi_V(x)_g = rho_g (x) a_g (Kronecker product), an element of
/// M_l(A x| G) = (M_l (x) A) x| G with the action id (x) g.
MatrixCrossed rho_stabilization(const Representation& rho, const MatrixCrossed& x);

// ---------------------------------------------------------------------------

struct DegenerateSplit {
  Eigen::MatrixXd V;  // orthonormal basis of ker J (columns)
  Eigen::MatrixXd W;  // orthonormal basis of the complement
};

DegenerateSplit split_degenerate(const DeformationMatrix& J, double tol = 1e-12);
/// max over g of the component of g V outside span V.
double split_invariance_defect(const DegenerateSplit& split, const Eigen::MatrixXd& g);

}  // namespace nct
