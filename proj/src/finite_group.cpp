#include "nct/finite_group.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <unsupported/Eigen/KroneckerProduct>

#include <json.hpp>

#include "nct/grid.hpp"

namespace nct {

CyclicAction CyclicAction::standard(int k) {
  IntMatrix2 g;
  switch (k) {
    case 1: g << 1, 0, 0, 1; break;
    case 2: g << -1, 0, 0, -1; break;
    case 3: g << 0, -1, 1, -1; break;
    case 4: g << 0, -1, 1, 0; break;
    case 6: g << 1, -1, 1, 0; break;
    default: throw std::invalid_argument("unsupported cyclic group order " + std::to_string(k));
  }
  return CyclicAction(k, g);
}

CyclicAction::CyclicAction(int k, const IntMatrix2& gen) : k_(k), gen_(gen) {
  if (k < 1) throw std::invalid_argument("CyclicAction: order must be positive");
  const int det = gen(0, 0) * gen(1, 1) - gen(0, 1) * gen(1, 0);
  if (det != 1) throw std::invalid_argument("CyclicAction: generator must have determinant 1");
  IntMatrix2 p = IntMatrix2::Identity();
  for (int r = 0; r < k; ++r) {
    if (r > 0 && p == IntMatrix2::Identity())
      throw std::invalid_argument("CyclicAction: generator order is smaller than k");
    powers_.push_back(p);
    p = p * gen;
  }
  if (p != IntMatrix2::Identity())
    throw std::invalid_argument("CyclicAction: generator^k is not the identity");
}

IntMatrix2 CyclicAction::element(int r) const { return powers_[((r % k_) + k_) % k_]; }

Eigen::Matrix2d CyclicAction::gram() const {
  Eigen::Matrix2d m = Eigen::Matrix2d::Zero();
  for (const auto& g : powers_) {
    const Eigen::Matrix2d gd = g.cast<double>();
    m += gd.transpose() * gd;
  }
  return m / static_cast<double>(k_);
}

std::string to_json(const CyclicAction& G) {
  const auto& g = G.generator();
  nlohmann::json j;
  j["k"] = G.order();
  j["gen"] = {{g(0, 0), g(0, 1)}, {g(1, 0), g(1, 1)}};
  return j.dump();
}

CyclicAction cyclic_from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  IntMatrix2 g;
  const auto& rows = j.at("gen");
  g << rows.at(0).at(0).get<int>(), rows.at(0).at(1).get<int>(), rows.at(1).at(0).get<int>(),
      rows.at(1).at(1).get<int>();
  return CyclicAction(j.at("k").get<int>(), g);
}

TorusElement beta_matrix(const IntMatrix2& g, const TorusElement& a) {
  if (a.dim() != 2) throw std::invalid_argument("beta: torus dimension must be 2");
  const int det = g(0, 0) * g(1, 1) - g(0, 1) * g(1, 0);
  if (det != 1 && det != -1) throw std::invalid_argument("beta: matrix is not unimodular");
  // the coefficient a_m moves to the mode m' with g^T m' = m, i.e. m' = g^{-T} m
  IntMatrix2 inv_t;
  inv_t << g(1, 1), -g(0, 1), -g(1, 0), g(0, 0);
  inv_t = (det * inv_t).transpose().eval();
  TorusElement out(2);
  for (const auto& [m, v] : a.coeffs()) {
    Mode mp{inv_t(0, 0) * m[0] + inv_t(0, 1) * m[1], inv_t(1, 0) * m[0] + inv_t(1, 1) * m[1]};
    out.add(mp, v);
  }
  return out;
}

TorusElement beta(const CyclicAction& G, int r, const TorusElement& a) {
  return beta_matrix(G.element(r), a);
}

TorusElement beta_respects_star(const IntMatrix2& g, const TorusElement& a, const TorusElement& b,
                                const DeformationMatrix& J) {
  return beta_matrix(g, star_J(a, b, J)) - star_J(beta_matrix(g, a), beta_matrix(g, b), J);
}

TorusCrossed torus_crossed_zero(const CyclicAction& G, int n) {
  return TorusCrossed{std::vector<TorusElement>(G.order(), TorusElement(n))};
}

TorusCrossed torus_crossed_term(const CyclicAction& G, const TorusElement& a, int r) {
  TorusCrossed x = torus_crossed_zero(G, a.dim());
  x.carrier[G.compose(r, G.order())] += a;
  return x;
}

TorusCrossed crossed_mul(const TorusCrossed& x, const TorusCrossed& y, const CyclicAction& G,
                         const DeformationMatrix& J) {
  if (x.order() != G.order()) throw std::invalid_argument("crossed_mul: group mismatch");
  const int n = x.carrier.empty() ? 2 : x.carrier.front().dim();
  return crossed_mul(
      x, y, [&](const TorusElement& a, const TorusElement& b) { return star_J(a, b, J); },
      [&](int r, const TorusElement& a) { return beta(G, r, a); }, TorusElement(n));
}

double crossed_seminorm(const TorusCrossed& x, const CyclicAction& G, int order, double C) {
  double total = 0.0;
  for (int r = 0; r < x.order(); ++r)
    total += smooth_seminorm(beta(G, G.inverse(r), x.carrier[r]), order);
  return C * total;
}

cplx crossed_trace(const TorusCrossed& x) { return trace(x.carrier.front()); }

MatrixCrossed crossed_mul(const MatrixCrossed& x, const MatrixCrossed& y, const Eigen::MatrixXcd& u) {
  const Eigen::Index d = u.rows();
  std::vector<Eigen::MatrixXcd> up(x.order());
  std::vector<Eigen::MatrixXcd> down(x.order());
  up[0] = Eigen::MatrixXcd::Identity(d, d);
  const Eigen::MatrixXcd uinv = u.inverse();
  down[0] = up[0];
  for (int r = 1; r < x.order(); ++r) {
    up[r] = up[r - 1] * u;
    down[r] = down[r - 1] * uinv;
  }
  const Eigen::Index rows = x.carrier.front().rows();
  if (rows != d) throw std::invalid_argument("crossed_mul: coefficient size mismatch");
  return crossed_mul(
      x, y, [](const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) -> Eigen::MatrixXcd { return a * b; },
      [&](int r, const Eigen::MatrixXcd& a) -> Eigen::MatrixXcd { return up[r] * a * down[r]; },
      Eigen::MatrixXcd::Zero(d, d).eval());
}

cplx cocycle_omega(double theta, const Mode& x, const Mode& y) {
  const long cross = static_cast<long>(x[0]) * y[1] - static_cast<long>(x[1]) * y[0];
  return e_phase(theta * static_cast<double>(cross));
}

DeformationMatrix cocycle_deformation(double theta) { return DeformationMatrix::planar(-theta); }

RGClass::RGClass(int k) : k_(k), mult_(k, 0) {
  if (k < 1) throw std::invalid_argument("RGClass: group order must be positive");
}

RGClass::RGClass(int k, std::vector<long> multiplicities) : k_(k), mult_(std::move(multiplicities)) {
  if (static_cast<int>(mult_.size()) != k) throw std::invalid_argument("RGClass: wrong length");
}

RGClass RGClass::character(int k, int j) {
  RGClass c(k);
  c.mult_[((j % k) + k) % k] = 1;
  return c;
}

RGClass RGClass::regular(int k) { return RGClass(k, std::vector<long>(k, 1)); }

long RGClass::dim() const {
  long d = 0;
  for (long m : mult_) d += m;
  return d;
}

std::complex<double> RGClass::trace(int r) const {
  std::complex<double> t{};
  for (int j = 0; j < k_; ++j)
    t += static_cast<double>(mult_[j]) * e_phase(static_cast<double>((j * r) % k_) / k_);
  return t;
}

RGClass& RGClass::operator+=(const RGClass& o) {
  if (o.k_ != k_) throw std::invalid_argument("RGClass: group mismatch");
  for (int j = 0; j < k_; ++j) mult_[j] += o.mult_[j];
  return *this;
}

RGClass& RGClass::operator-=(const RGClass& o) {
  if (o.k_ != k_) throw std::invalid_argument("RGClass: group mismatch");
  for (int j = 0; j < k_; ++j) mult_[j] -= o.mult_[j];
  return *this;
}

RGClass operator+(RGClass a, const RGClass& b) { return a += b; }
RGClass operator-(RGClass a, const RGClass& b) { return a -= b; }

RGClass operator*(const RGClass& a, const RGClass& b) {
  if (a.order() != b.order()) throw std::invalid_argument("RGClass: group mismatch");
  const int k = a.order();
  std::vector<long> m(k, 0);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) m[(i + j) % k] += a.multiplicities()[i] * b.multiplicities()[j];
  return RGClass(k, m);
}

std::string to_json(const RGClass& c) {
  nlohmann::json j;
  std::vector<std::string> header;
  for (int i = 0; i < c.order(); ++i) header.push_back("chi_" + std::to_string(i));
  j["k"] = c.order();
  j["characters"] = header;
  j["multiplicities"] = c.multiplicities();
  return j.dump();
}

Representation::Representation(int k, Eigen::MatrixXcd gen) {
  if (gen.rows() != gen.cols()) throw std::invalid_argument("Representation: generator not square");
  Eigen::MatrixXcd p = Eigen::MatrixXcd::Identity(gen.rows(), gen.cols());
  for (int r = 0; r < k; ++r) {
    elements_.push_back(p);
    p = p * gen;
  }
  const double scale = std::max(1.0, gen.cwiseAbs().maxCoeff());
  if ((p - elements_.front()).cwiseAbs().maxCoeff() > 1e-10 * scale)
    throw std::invalid_argument("Representation: gen^k is not the identity");
}

Representation Representation::from_characters(int k, const std::vector<int>& labels) {
  Eigen::MatrixXcd gen = Eigen::MatrixXcd::Zero(labels.size(), labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i)
    gen(i, i) = e_phase(static_cast<double>(((labels[i] % k) + k) % k) / k);
  return Representation(k, gen);
}

Representation Representation::from_elements(std::vector<Eigen::MatrixXcd> elements, double tol) {
  if (elements.empty()) throw std::invalid_argument("Representation: no elements");
  const int k = static_cast<int>(elements.size());
  const Eigen::Index d = elements.front().rows();
  if ((elements.front() - Eigen::MatrixXcd::Identity(d, d)).cwiseAbs().maxCoeff() > tol)
    throw std::invalid_argument("Representation: rho(e) is not the identity");
  for (int r = 0; r < k; ++r)
    for (int s = 0; s < k; ++s)
      if ((elements[r] * elements[s] - elements[(r + s) % k]).cwiseAbs().maxCoeff() > tol)
        throw std::invalid_argument("Representation: rho(g) rho(h) != rho(gh) at (" +
                                    std::to_string(r) + ", " + std::to_string(s) + ")");
  Representation rep;
  rep.elements_ = std::move(elements);
  return rep;
}

namespace {

// multiplicities from traces t_r of g^r: (1/k) sum_r conj(chi_j(g^r)) t_r
RGClass decompose(int k, const std::vector<std::complex<double>>& traces, double tol) {
  RGClass out(k);
  std::vector<long> m(k);
  for (int j = 0; j < k; ++j) {
    std::complex<double> s{};
    for (int r = 0; r < k; ++r)
      s += std::conj(e_phase(static_cast<double>((j * r) % k) / k)) * traces[r];
    s /= static_cast<double>(k);
    const double rounded = std::round(s.real());
    if (std::abs(s - rounded) > tol)
      throw std::runtime_error("character multiplicity is not an integer: " + std::to_string(s.real()));
    m[j] = static_cast<long>(rounded);
  }
  return RGClass(k, m);
}

int numeric_rank(const Eigen::JacobiSVD<Eigen::MatrixXcd>& svd, double tol) {
  const auto& s = svd.singularValues();
  if (s.size() == 0) return 0;
  const double cut = tol * std::max(1.0, s(0));
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > cut) ++r;
  return r;
}

}  // namespace

RGClass Representation::rg_class(double tol) const {
  std::vector<std::complex<double>> t;
  for (const auto& e : elements_) t.push_back(e.trace());
  return decompose(order(), t, tol);
}

KernelCokernel kernel_cokernel(const Eigen::MatrixXcd& T, const Representation& dom,
                               const Representation& cod, double tol) {
  if (dom.order() != cod.order()) throw std::invalid_argument("g_index: group mismatch");
  if (T.cols() != dom.dim() || T.rows() != cod.dim())
    throw std::invalid_argument("g_index: operator shape does not match representations");
  const int k = dom.order();
  const double scale = std::max(1.0, T.size() ? T.cwiseAbs().maxCoeff() : 1.0);
  for (int r = 0; r < k; ++r) {
    const double defect = (cod(r) * T - T * dom(r)).cwiseAbs().maxCoeff();
    if (defect > tol * scale)
      throw std::invalid_argument("g_index: operator is not equivariant (defect " +
                                  std::to_string(defect) + " at g^" + std::to_string(r) + ")");
  }
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(T, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const int rank = numeric_rank(svd, 1e-10);
  const Eigen::MatrixXcd K = svd.matrixV().rightCols(T.cols() - rank);
  const Eigen::MatrixXcd R = svd.matrixU().leftCols(rank);
  std::vector<std::complex<double>> tk(k), tc(k);
  for (int r = 0; r < k; ++r) {
    // restriction to the invariant subspaces through their orthonormal bases
    tk[r] = (K.adjoint() * dom(r) * K).trace();
    tc[r] = cod(r).trace() - (R.adjoint() * cod(r) * R).trace();
  }
  return {decompose(k, tk, 1e-6), decompose(k, tc, 1e-6)};
}

RGClass g_index(const Eigen::MatrixXcd& T, const Representation& dom, const Representation& cod,
                double tol) {
  const auto kc = kernel_cokernel(T, dom, cod, tol);
  return kc.kernel - kc.cokernel;
}

MatrixCrossed rho_stabilization(const Representation& rho, const MatrixCrossed& x) {
  if (rho.order() != x.order()) throw std::invalid_argument("rho_stabilization: group mismatch");
  MatrixCrossed out;
  for (int r = 0; r < x.order(); ++r)
    out.carrier.push_back(Eigen::kroneckerProduct(rho(r), x.carrier[r]).eval());
  return out;
}

DegenerateSplit split_degenerate(const DeformationMatrix& J, double tol) {
  const Eigen::MatrixXd& M = J.matrix();
  const int n = J.dim();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(M.transpose() * M);
  const auto& vals = eig.eigenvalues();
  const double top = std::max(vals.cwiseAbs().maxCoeff(), 0.0);
  std::vector<int> ker, rest;
  for (int i = 0; i < n; ++i) (vals(i) <= tol * std::max(1.0, top) ? ker : rest).push_back(i);
  DegenerateSplit s;
  s.V.resize(n, static_cast<Eigen::Index>(ker.size()));
  s.W.resize(n, static_cast<Eigen::Index>(rest.size()));
  for (std::size_t i = 0; i < ker.size(); ++i) s.V.col(i) = eig.eigenvectors().col(ker[i]);
  for (std::size_t i = 0; i < rest.size(); ++i) s.W.col(i) = eig.eigenvectors().col(rest[i]);
  return s;
}

double split_invariance_defect(const DegenerateSplit& split, const Eigen::MatrixXd& g) {
  if (split.V.cols() == 0) return 0.0;
  const Eigen::MatrixXd image = g * split.V;
  const Eigen::MatrixXd outside = image - split.V * (split.V.transpose() * image);
  return outside.cwiseAbs().maxCoeff();
}

}  // namespace nct
