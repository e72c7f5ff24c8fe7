#pragma once

#include <cmath>
#include <numbers>
#include <optional>

namespace nct {
namespace detail {

inline std::vector<std::vector<double>> probe_directions(int n, int count) {
  std::vector<std::vector<double>> dirs;
  for (int k = 0; k < count; ++k) {
    std::vector<double> d(n, 0.0);
    if (n == 1) {
      d[0] = (k % 2 == 0) ? 1.0 : -1.0;
    } else {
      const double a = std::numbers::pi * k / 4.0 + 0.1;
      d[0] = std::cos(a);
      d[1] = std::sin(a);
      for (int i = 2; i < n; ++i) d[i] = 0.3 * std::sin(a * (i + 1));
      double norm = 0.0;
      for (double v : d) norm += v * v;
      for (double& v : d) v /= std::sqrt(norm);
    }
    dirs.push_back(d);
  }
  return dirs;
}

inline std::vector<std::vector<int>> multi_indices_up_to(int n, int j_max) {
  std::vector<std::vector<int>> out;
  std::vector<int> j(n, 0);
  while (true) {
    int total = 0;
    for (int v : j) total += v;
    if (total <= j_max) out.push_back(j);
    int a = n - 1;
    while (a >= 0 && j[a] == j_max) j[a--] = 0;
    if (a < 0) break;
    ++j[a];
  }
  return out;
}

// ((S - S^{-1}) / (2 delta))^k along each axis, applied to f at xi
template <class V>
V central_derivative(const std::function<V(std::span<const double>)>& f, std::span<const double> xi,
                     std::span<const int> j, double delta) {
  const int n = static_cast<int>(xi.size());
  std::vector<std::pair<std::vector<int>, double>> taps{{std::vector<int>(n, 0), 1.0}};
  for (int a = 0; a < n; ++a) {
    std::vector<std::pair<std::vector<int>, double>> next;
    const int k = j[a];
    double binom = 1.0;
    for (int l = 0; l <= k; ++l) {
      const double c = ((l % 2 == 0) ? 1.0 : -1.0) * binom * std::pow(2.0 * delta, -k);
      for (const auto& [off, w] : taps) {
        auto v = off;
        v[a] = k - 2 * l;
        next.emplace_back(std::move(v), w * c);
      }
      binom = binom * (k - l) / (l + 1);
    }
    taps = std::move(next);
  }
  std::vector<double> p(xi.begin(), xi.end());
  std::optional<V> acc;
  for (const auto& [off, w] : taps) {
    for (int a = 0; a < n; ++a) p[a] = xi[a] + off[a] * delta;
    V term = cplx(w) * f(p);
    if (acc)
      *acc += term;
    else
      acc.emplace(std::move(term));
  }
  return std::move(*acc);
}

}  // namespace detail

template <class V>
SymbolClassReport check_symbol_class(const Symbol<V>& rho, int j_max, double r_min, double r_max,
                                     const std::function<double(const V&)>& norm, double delta) {
  SymbolClassReport rep;
  rep.order = rho.order;
  rep.multi_indices = detail::multi_indices_up_to(rho.n, j_max);
  const auto dirs = detail::probe_directions(rho.n, 8);
  const int radii = 24;
  const double mid = std::sqrt(r_min * r_max);
  rep.bounded = true;
  for (const auto& j : rep.multi_indices) {
    int total = 0;
    for (int v : j) total += v;
    double inner = 0.0, outer = 0.0;
    for (int q = 0; q < radii; ++q) {
      const double r = r_min * std::pow(r_max / r_min, static_cast<double>(q) / (radii - 1));
      for (const auto& d : dirs) {
        std::vector<double> xi(d);
        for (double& v : xi) v *= r;
        V val = (rho.deriv && total > 0) ? rho.deriv(xi, j)
                : total == 0            ? rho.eval(xi)
                                        : detail::central_derivative<V>(rho.eval, xi, j, delta);
        const double w = std::pow(1.0 + r, total - rho.order) * norm(val);
        (r <= mid ? inner : outer) = std::max(r <= mid ? inner : outer, w);
      }
    }
    const double sup = std::max(inner, outer);
    rep.seminorms.push_back(sup);
    const double ratio = inner > 0.0 ? outer / inner : (outer > 0.0 ? INFINITY : 0.0);
    rep.growth_ratios.push_back(ratio);
    if (!std::isfinite(sup) || !(ratio <= 2.0)) rep.bounded = false;
  }
  return rep;
}

template <class V>
PrincipalPartReport principal_part_check(const Symbol<V>& rho,
                                         const std::function<double(const V&)>& norm, double tol) {
  PrincipalPartReport rep;
  rep.converging = true;
  for (const auto& d : detail::probe_directions(rho.n, 8)) {
    auto at = [&](double lambda) {
      std::vector<double> xi(d);
      for (double& v : xi) v *= lambda;
      V val = rho.eval(xi);
      val *= cplx(std::pow(lambda, -rho.order));
      return val;
    };
    const V p4 = at(4.0), p8 = at(8.0), p16 = at(16.0);
    V d1 = p8;
    d1 -= p4;
    V d2 = p16;
    d2 -= p8;
    const double s1 = norm(d1), s2 = norm(d2);
    rep.cauchy_steps.push_back(s2);
    if (!(s2 <= tol) || !(s2 <= s1 || s2 <= 1e-14)) rep.converging = false;
  }
  return rep;
}

}  // namespace nct
