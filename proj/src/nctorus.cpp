#include "nct/nctorus.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include <json.hpp>

#include "nct/grid.hpp"

namespace nct {

TorusElement::TorusElement(int n) : n_(n) {
  if (n < 1) throw std::invalid_argument("TorusElement: dimension must be positive");
}

TorusElement TorusElement::basis(const Mode& m, cplx value) {
  TorusElement out(static_cast<int>(m.size()));
  out.coeffs_[m] = value;
  return out;
}

cplx TorusElement::coeff(const Mode& m) const {
  auto it = coeffs_.find(m);
  return it == coeffs_.end() ? cplx{} : it->second;
}

void TorusElement::add(const Mode& m, cplx value) {
  if (static_cast<int>(m.size()) != n_) throw std::invalid_argument("TorusElement: mode dimension mismatch");
  coeffs_[m] += value;
}

TorusElement& TorusElement::operator+=(const TorusElement& other) {
  if (other.n_ != n_) throw std::invalid_argument("TorusElement: dimension mismatch");
  for (const auto& [m, v] : other.coeffs_) coeffs_[m] += v;
  return *this;
}

TorusElement& TorusElement::operator-=(const TorusElement& other) {
  if (other.n_ != n_) throw std::invalid_argument("TorusElement: dimension mismatch");
  for (const auto& [m, v] : other.coeffs_) coeffs_[m] -= v;
  return *this;
}

TorusElement& TorusElement::operator*=(cplx s) {
  for (auto& [m, v] : coeffs_) v *= s;
  return *this;
}

TorusElement TorusElement::adjoint() const {
  TorusElement out(n_);
  for (const auto& [m, v] : coeffs_) {
    Mode neg(m);
    for (auto& c : neg) c = -c;
    out.coeffs_[neg] = std::conj(v);
  }
  return out;
}

double TorusElement::max_abs() const {
  double best = 0.0;
  for (const auto& [m, v] : coeffs_) best = std::max(best, std::abs(v));
  return best;
}

TorusElement TorusElement::pruned(double tol) const {
  TorusElement out(n_);
  for (const auto& [m, v] : coeffs_)
    if (std::abs(v) > tol) out.coeffs_[m] = v;
  return out;
}

TorusElement operator+(TorusElement a, const TorusElement& b) { return a += b; }
TorusElement operator-(TorusElement a, const TorusElement& b) { return a -= b; }
TorusElement operator*(cplx s, TorusElement a) { return a *= s; }

DeformationMatrix::DeformationMatrix(Eigen::MatrixXd J) : J_(std::move(J)) {
  if (J_.rows() != J_.cols() || J_.rows() < 1)
    throw std::invalid_argument("DeformationMatrix: must be square");
  if ((J_ + J_.transpose()).cwiseAbs().maxCoeff() != 0.0)
    throw std::invalid_argument("DeformationMatrix: must be antisymmetric");
}

DeformationMatrix DeformationMatrix::planar(double j) {
  Eigen::MatrixXd J(2, 2);
  J << 0.0, j, -j, 0.0;
  return DeformationMatrix(J);
}

double star_exponent(const DeformationMatrix& J, const Mode& m, const Mode& n) {
  const int d = J.dim();
  double acc = 0.0;
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) {
      const long cross = static_cast<long>(m[j]) * n[i] - static_cast<long>(m[i]) * n[j];
      acc += J(i, j) * static_cast<double>(cross);
    }
  return acc;
}

TorusElement star_J(const TorusElement& a, const TorusElement& b, const DeformationMatrix& J) {
  if (a.dim() != b.dim() || a.dim() != J.dim())
    throw std::invalid_argument("star_J: dimension mismatch");
  TorusElement out(a.dim());
  Mode sum(a.dim());
  for (const auto& [m, x] : a.coeffs())
    for (const auto& [n, y] : b.coeffs()) {
      for (int i = 0; i < a.dim(); ++i) sum[i] = m[i] + n[i];
      out.add(sum, e_phase(kStarPhaseSign * star_exponent(J, m, n)) * x * y);
    }
  return out;
}

TorusElement star_0(const TorusElement& a, const TorusElement& b) {
  return star_J(a, b, DeformationMatrix::zero(a.dim()));
}

TorusElement alpha(std::span<const double> x, const TorusElement& a) {
  if (static_cast<int>(x.size()) != a.dim()) throw std::invalid_argument("alpha: dimension mismatch");
  TorusElement out(a.dim());
  for (const auto& [m, v] : a.coeffs()) {
    double dot = 0.0;
    for (int i = 0; i < a.dim(); ++i) dot += x[i] * m[i];
    out.add(m, e_phase(-dot) * v);
  }
  return out;
}

TorusElement scaled_alpha(double s, std::span<const double> x, const TorusElement& a) {
  std::vector<double> sx(x.begin(), x.end());
  for (auto& v : sx) v *= s;
  return alpha(sx, a);
}

TorusElement derivation(int axis, const TorusElement& a) {
  if (axis < 0 || axis >= a.dim()) throw std::invalid_argument("derivation: axis out of range");
  TorusElement out(a.dim());
  for (const auto& [m, v] : a.coeffs())
    out.add(m, cplx(0.0, -2.0 * std::numbers::pi * m[axis]) * v);
  return out;
}

TorusElement derivation(std::span<const int> multi_index, const TorusElement& a) {
  if (static_cast<int>(multi_index.size()) != a.dim())
    throw std::invalid_argument("derivation: multi-index length mismatch");
  TorusElement out = a;
  for (int j = 0; j < a.dim(); ++j)
    for (int r = 0; r < multi_index[j]; ++r) out = derivation(j, out);
  return out;
}

cplx trace(const TorusElement& a) { return a.coeff(Mode(a.dim(), 0)); }

double smooth_seminorm(const TorusElement& a, int order) {
  double best = 0.0;
  for (const auto& [m, v] : a.coeffs()) {
    double r2 = 0.0;
    for (int c : m) r2 += static_cast<double>(c) * c;
    best = std::max(best, std::pow(1.0 + std::sqrt(r2), order) * std::abs(v));
  }
  return best;
}

std::string to_json(const TorusElement& a) {
  nlohmann::json j;
  j["n"] = a.dim();
  j["coeffs"] = nlohmann::json::array();
  for (const auto& [m, v] : a.coeffs())
    j["coeffs"].push_back({{"m", m}, {"re", v.real()}, {"im", v.imag()}});
  return j.dump();
}

TorusElement torus_from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  TorusElement out(j.at("n").get<int>());
  for (const auto& c : j.at("coeffs"))
    out.add(c.at("m").get<Mode>(), cplx(c.at("re").get<double>(), c.at("im").get<double>()));
  return out;
}

}  // namespace nct
