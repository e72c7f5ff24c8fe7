#include "nct/orbifold_hp.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <stdexcept>

namespace nct {

namespace {

Rational frac_part(Rational x) {
  const std::int64_t fl = x.numerator() >= 0 ? x.numerator() / x.denominator()
                                             : -((-x.numerator() + x.denominator() - 1) / x.denominator());
  return x - Rational(fl);
}

long det_minus_identity(const IntMatrix2& g) {
  const IntMatrix2 A = g - IntMatrix2::Identity();
  return static_cast<long>(A(0, 0)) * A(1, 1) - static_cast<long>(A(0, 1)) * A(1, 0);
}

bool fixes(const IntMatrix2& g, const TorusPoint& x) { return act_on_torus(g, x) == x; }

}  // namespace

TorusPoint act_on_torus(const IntMatrix2& g, const TorusPoint& x) {
  TorusPoint out;
  for (int a = 0; a < 2; ++a) out[a] = frac_part(Rational(g(a, 0)) * x[0] + Rational(g(a, 1)) * x[1]);
  return out;
}

FixedPointData fixed_points(const CyclicAction& G, int r) {
  const IntMatrix2 g = G.element(r);
  if (g == IntMatrix2::Identity()) throw std::invalid_argument("fixed_points: identity element");
  const long d = std::abs(det_minus_identity(g));
  if (d == 0) throw std::invalid_argument("fixed_points: det(g - I) = 0");
  FixedPointData out;
  out.element = r % G.order();
  out.g = g;
  out.count = d;
  // (g - I) x in Z^2 forces d x in Z^2
  for (long a = 0; a < d; ++a)
    for (long b = 0; b < d; ++b) {
      const TorusPoint x{Rational(a, d), Rational(b, d)};
      if (fixes(g, x)) out.points.push_back(x);
    }
  if (static_cast<long>(out.points.size()) != d)
    throw std::logic_error("fixed_points: enumeration disagrees with |det(g - I)|");
  return out;
}

HPDims hp_dimensions(const CyclicAction& G) {
  const int k = G.order();
  HPDims out;
  out.even = 2;  // H^0 and H^2 are fixed by orientation-preserving maps
  for (int r = 1; r < k; ++r) {
    const auto fp = fixed_points(G, r);
    std::set<TorusPoint> seen;
    long orbits = 0;
    for (const auto& x : fp.points) {
      if (seen.count(x)) continue;
      ++orbits;
      for (int s = 0; s < k; ++s) seen.insert(act_on_torus(G.element(s), x));
    }
    out.strata.push_back({r, fp.count, orbits});
    out.even += orbits;
  }
  // rank of P = (1/k) sum_g g on H^1 = C^2, exactly
  std::array<std::array<Rational, 2>, 2> P{};
  for (int r = 0; r < k; ++r) {
    const IntMatrix2 g = G.element(r);
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) P[a][b] += Rational(g(a, b), k);
  }
  const Rational det = P[0][0] * P[1][1] - P[0][1] * P[1][0];
  const Rational nil(0);
  const bool zero = P[0][0] == nil && P[0][1] == nil && P[1][0] == nil && P[1][1] == nil;
  out.odd = zero ? 0 : (det != nil ? 2 : 1);
  return out;
}

Rational orbifold_euler(const CyclicAction& G) {
  const int k = G.order();
  long D = 1;
  for (int r = 1; r < k; ++r) D = std::lcm(D, std::abs(det_minus_identity(G.element(r))));
  std::vector<TorusPoint> lattice;
  for (long a = 0; a < D; ++a)
    for (long b = 0; b < D; ++b) lattice.push_back({Rational(a, D), Rational(b, D)});
  long total = 0;
  for (int r = 0; r < k; ++r)
    for (int s = 0; s < k; ++s) {
      if (r == 0 && s == 0) continue;  // chi(T^2) = 0
      const IntMatrix2 g = G.element(r), h = G.element(s);
      for (const auto& x : lattice)
        if (fixes(g, x) && fixes(h, x)) ++total;
    }
  return Rational(total, k);
}

KRanks k_ranks(const CyclicAction& G) {
  const int k = G.order();
  long trace_sum = 0;
  for (int r = 0; r < k; ++r) trace_sum += G.element(r).trace();
  if (trace_sum % k != 0) throw std::logic_error("k_ranks: non-integral character average");
  KRanks out;
  out.k1 = trace_sum / k;
  const Rational e = orbifold_euler(G);
  if (e.denominator() != 1) throw std::logic_error("k_ranks: non-integral orbifold Euler number");
  out.k0 = e.numerator() + out.k1;
  return out;
}

ThetaReport theta_independence_regression(const std::vector<double>& thetas, const CyclicAction& G) {
  ThetaReport rep;
  const int k = G.order();
  std::vector<Mode> test_modes;
  for (int i = -1; i <= 1; ++i)
    for (int j = -1; j <= 1; ++j) test_modes.push_back({i, j});
  TorusElement a(2), b(2);
  a.add({1, 0}, 1.0);
  a.add({0, 1}, cplx(0.5, 0.25));
  b.add({-1, 0}, 1.0);
  b.add({0, -1}, cplx(0.0, -0.75));

  for (double theta : thetas) {
    ThetaRow row;
    row.theta = theta;
    row.dims = hp_dimensions(G);
    const DeformationMatrix J = cocycle_deformation(theta);
    for (int r = 0; r < k; ++r)
      for (const auto& m : test_modes)
        for (const auto& n : test_modes) {
          const auto d = beta_respects_star(G.element(r), TorusElement::basis(m), TorusElement::basis(n), J);
          row.beta_defect = std::max(row.beta_defect, d.max_abs());
        }
    TorusCrossed p = torus_crossed_zero(G);
    for (int r = 0; r < k; ++r) p.carrier[r] = TorusElement::basis({0, 0}, 1.0 / k);
    row.idempotent_trace = crossed_trace(p);
    const TorusCrossed p2 = crossed_mul(p, p, G, J);
    for (int r = 0; r < k; ++r)
      row.idempotent_defect = std::max(row.idempotent_defect, (p2.carrier[r] - p.carrier[r]).max_abs());
    row.pairing = trace(star_J(a, b, J));
    rep.rows.push_back(row);
  }
  rep.constant = true;
  for (const auto& row : rep.rows) {
    const auto& first = rep.rows.front();
    if (row.dims.even != first.dims.even || row.dims.odd != first.dims.odd) rep.constant = false;
    if (row.beta_defect != 0.0 || row.idempotent_defect > 1e-14) rep.constant = false;
    if (row.idempotent_trace != first.idempotent_trace) rep.constant = false;
  }
  return rep;
}

}  // namespace nct
