#include "nct/clifford.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "nct/grid.hpp"
#include "nct/pseudodiff.hpp"

namespace nct {

CliffordElement::CliffordElement(int n) : n_(n) {
  if (n < 0 || n > 16) throw std::invalid_argument("clifford rank out of range: " + std::to_string(n));
  coeffs_.assign(std::size_t{1} << n, cplx{});
}

CliffordElement CliffordElement::scalar(int n, cplx value) {
  CliffordElement out(n);
  out.coeffs_[0] = value;
  return out;
}

CliffordElement CliffordElement::generator(int n, int axis) {
  if (axis < 0 || axis >= n) throw std::invalid_argument("generator index out of range");
  return blade(n, 1u << axis);
}

CliffordElement CliffordElement::blade(int n, unsigned mask, cplx value) {
  CliffordElement out(n);
  if (mask >= out.size()) throw std::invalid_argument("blade mask out of range");
  out.coeffs_[mask] = value;
  return out;
}

CliffordElement& CliffordElement::operator+=(const CliffordElement& other) {
  if (other.n_ != n_) throw std::invalid_argument("clifford rank mismatch");
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += other.coeffs_[i];
  return *this;
}

CliffordElement& CliffordElement::operator-=(const CliffordElement& other) {
  if (other.n_ != n_) throw std::invalid_argument("clifford rank mismatch");
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= other.coeffs_[i];
  return *this;
}

CliffordElement& CliffordElement::operator*=(cplx s) {
  for (auto& c : coeffs_) c *= s;
  return *this;
}

CliffordElement CliffordElement::grade_involution() const {
  CliffordElement out(*this);
  for (unsigned m = 0; m < out.size(); ++m)
    if (std::popcount(m) % 2 == 1) out.coeffs_[m] = -out.coeffs_[m];
  return out;
}

CliffordElement CliffordElement::adjoint() const {
  CliffordElement out(n_);
  for (unsigned m = 0; m < size(); ++m) {
    // reversing k generators contributes (-1)^{k(k-1)/2}
    const int k = std::popcount(m);
    const double rev = ((k * (k - 1) / 2) % 2 == 0) ? 1.0 : -1.0;
    out.coeffs_[m] = rev * std::conj(coeffs_[m]);
  }
  return out;
}

std::optional<int> CliffordElement::parity(double tol) const {
  bool even = false, odd = false;
  for (unsigned m = 0; m < size(); ++m) {
    if (std::abs(coeffs_[m]) <= tol) continue;
    (std::popcount(m) % 2 == 0 ? even : odd) = true;
  }
  if (even && odd) return std::nullopt;
  return odd ? 1 : 0;
}

double CliffordElement::norm() const {
  double s = 0.0;
  for (const auto& c : coeffs_) s += std::norm(c);
  return std::sqrt(s);
}

CliffordElement operator+(CliffordElement a, const CliffordElement& b) { return a += b; }
CliffordElement operator-(CliffordElement a, const CliffordElement& b) { return a -= b; }
CliffordElement operator*(cplx s, CliffordElement a) { return a *= s; }
CliffordElement operator*(const CliffordElement& a, const CliffordElement& b) {
  return clifford_mul(a, b);
}

int blade_sign(unsigned a, unsigned b) {
  // moving each generator of b left past the larger generators of a
  int swaps = 0;
  for (unsigned rest = a >> 1; rest != 0; rest >>= 1) swaps += std::popcount(rest & b);
  return (swaps % 2 == 0) ? 1 : -1;
}

CliffordElement clifford_mul(const CliffordElement& a, const CliffordElement& b) {
  if (a.rank() != b.rank()) throw std::invalid_argument("clifford rank mismatch");
  CliffordElement out(a.rank());
  const unsigned size = static_cast<unsigned>(a.size());
  for (unsigned i = 0; i < size; ++i) {
    if (a[i] == cplx{}) continue;
    for (unsigned j = 0; j < size; ++j) {
      if (b[j] == cplx{}) continue;
      out[i ^ j] += static_cast<double>(blade_sign(i, j)) * a[i] * b[j];
    }
  }
  return out;
}

CliffordElement clifford_vector(std::span<const double> xi) {
  const int n = static_cast<int>(xi.size());
  CliffordElement out(n);
  for (int j = 0; j < n; ++j) out[1u << j] = xi[j];
  return out;
}

namespace {

double euclid(std::span<const double> xi) {
  double s = 0.0;
  for (double v : xi) s += v * v;
  return std::sqrt(s);
}

// sin(s r) / r, continuous at r = 0
double sinc_ratio(double s, double r) {
  if (r < 1e-6) {
    const double t = s * r;
    return s * (1.0 - t * t / 6.0 + t * t * t * t / 120.0);
  }
  return std::sin(s * r) / r;
}

}  // namespace

CliffordElement wave_operator(double s, std::span<const double> xi) {
  const double r = euclid(xi);
  CliffordElement out = clifford_vector(xi);
  out *= cplx(0.0, sinc_ratio(s, r));
  out[0] = std::cos(s * r);
  return out;
}

CliffordElement orthogonal_action(const Eigen::MatrixXd& rotation, const CliffordElement& a) {
  const int n = a.rank();
  if (rotation.rows() != n || rotation.cols() != n)
    throw std::invalid_argument("orthogonal_action: matrix size does not match clifford rank");
  std::vector<CliffordElement> images;
  images.reserve(n);
  for (int i = 0; i < n; ++i) {
    std::vector<double> col(rotation.col(i).data(), rotation.col(i).data() + n);
    images.push_back(clifford_vector(col));
  }
  CliffordElement out(n);
  for (unsigned m = 0; m < a.size(); ++m) {
    if (a[m] == cplx{}) continue;
    CliffordElement term = CliffordElement::scalar(n, a[m]);
    for (int i = 0; i < n; ++i)
      if (m & (1u << i)) term = term * images[i];
    out += term;
  }
  return out;
}

CliffordElement chi_of_clifford(const NormalizingFunction& chi, std::span<const double> xi,
                                const QuadratureSpec& quad) {
  const int nodes = quad.s_nodes;
  if (nodes < 2 || nodes % 2 != 0)
    throw std::invalid_argument("chi_of_clifford: s_nodes must be a positive even integer");
  const double sigma = chi.sigma();
  const double ds = 2.0 * sigma / nodes;
  const double r = euclid(xi);
  if (ds * r > std::numbers::pi / 4.0)
    throw std::domain_error("chi_of_clifford: s-step " + std::to_string(ds) +
                            " cannot resolve frequency |xi| = " + std::to_string(r) +
                            " (need step*|xi| <= pi/4)");
  // pair s and -s: chi_hat(s) e^{isc} + chi_hat(-s) e^{-isc}
  cplx scalar_part{}, vector_part{};
  for (int k = nodes / 2; k < nodes; ++k) {
    const double s = -sigma + (k + 0.5) * ds;
    const cplx plus = chi.chi_hat(s), minus = chi.chi_hat(-s);
    scalar_part += (plus + minus) * std::cos(s * r);
    vector_part += cplx(0.0, 1.0) * (plus - minus) * sinc_ratio(s, r);
  }
  CliffordElement out = clifford_vector(xi);
  out *= vector_part * ds;
  out[0] = scalar_part * ds;
  return out;
}

PolyPair h_derivative_polys(int order) {
  if (order < 0) throw std::invalid_argument("h_derivative_polys: negative order");
  PolyPair p;
  p.phi = {Rational(1)};
  p.psi = {Rational(0)};
  for (int n = 0; n < order; ++n) {
    const std::size_t deg = n + 2;
    std::vector<Rational> phi(deg, Rational(0)), psi(deg, Rational(0));
    const Rational shift(-(n + 1));
    for (std::size_t d = 0; d < p.phi.size(); ++d) {
      // y * phi' keeps degree d, y * phi raises it
      phi[d] += Rational(static_cast<std::int64_t>(d)) * p.phi[d] + shift * p.phi[d];
      psi[d + 1] += p.phi[d];
    }
    for (std::size_t d = 0; d < p.psi.size(); ++d) {
      psi[d] += Rational(static_cast<std::int64_t>(d)) * p.psi[d] + shift * p.psi[d];
      phi[d + 1] -= p.psi[d];
    }
    while (phi.size() > 1 && phi.back() == Rational(0)) phi.pop_back();
    while (psi.size() > 1 && psi.back() == Rational(0)) psi.pop_back();
    p.phi = std::move(phi);
    p.psi = std::move(psi);
  }
  p.order = order;
  return p;
}

namespace {

double horner(const std::vector<Rational>& c, double y) {
  double acc = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * y + boost::rational_cast<double>(*it);
  return acc;
}

}  // namespace

double evaluate_closed_form(const PolyPair& polys, double y) {
  if (y == 0.0) throw std::domain_error("evaluate_closed_form: y = 0");
  const double num = std::sin(y) * horner(polys.phi, y) + std::cos(y) * horner(polys.psi, y);
  return num / std::pow(y, polys.order + 1);
}

double h_derivative(int order, double y) {
  if (order < 0) throw std::invalid_argument("h_derivative: negative order");
  if (std::abs(y) >= 4.0) {
    thread_local std::vector<PolyPair> cache;
    while (static_cast<int>(cache.size()) <= order)
      cache.push_back(h_derivative_polys(static_cast<int>(cache.size())));
    return evaluate_closed_form(cache[order], y);
  }
  // h(y) = sum_k (-1)^k y^{2k} / (2k+1)!, differentiated termwise
  double sum = 0.0;
  const int k0 = (order + 1) / 2;
  for (int k = k0; k < k0 + 60; ++k) {
    const int p = 2 * k - order;
    double term = (k % 2 == 0 ? 1.0 : -1.0) / (2.0 * k + 1.0);
    for (int i = 1; i <= p; ++i) term *= y / i;
    sum += term;
    if (k > k0 + 4 && std::abs(term) < 1e-18 * std::max(1.0, std::abs(sum))) break;
  }
  return sum;
}

}  // namespace nct
