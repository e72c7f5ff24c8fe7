#include "nct/suites.hpp"

#include <chrono>
#include <cmath>
#include <iostream>
#include <map>
#include <numbers>
#include <random>
#include <sstream>

#include <unsupported/Eigen/KroneckerProduct>

#include "nct/clifford.hpp"
#include "nct/crossed_rn.hpp"
#include "nct/finite_group.hpp"
#include "nct/orbifold_hp.hpp"
#include "nct/parallel.hpp"
#include "nct/pseudodiff.hpp"

namespace nct {

namespace {

constexpr double kAlgebraTol = 1e-12;
constexpr double kRoundoffTol = 1e-14;  // exact algebra identities evaluated in floating point
constexpr double kPi = std::numbers::pi;

double decay_value(const DecayReport& r) { return r.exceeds_range ? INFINITY : r.order; }

nlohmann::json decay_json(const DecayReport& r) {
  return {{"order", r.order},
          {"exceeds_range", r.exceeds_range},
          {"fitted_shells", r.fitted_shells},
          {"rms_residual", r.rms_residual}};
}

std::string group_name(int k) { return "Z" + std::to_string(k); }

std::vector<int> nontrivial_groups(const RunConfig& cfg) {
  std::vector<int> out;
  for (int k : cfg.groups)
    if (k > 1) out.push_back(k);
  return out;
}

double gaussian(std::span<const double> x, std::span<const double> c, double w) {
  double r2 = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) r2 += (x[i] - c[i]) * (x[i] - c[i]);
  return std::exp(-kPi * r2 / w);
}

TorusElement random_torus(std::mt19937& rng, int n, int radius) {
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  TorusElement a(n);
  Mode m(n, -radius);
  while (true) {
    a.add(m, cplx(U(rng), U(rng)));
    int i = n - 1;
    while (i >= 0 && m[i] == radius) m[i--] = -radius;
    if (i < 0) break;
    ++m[i];
  }
  return a;
}

std::vector<Mode> mode_box(int n, int radius) { return ModeBasis::box(n, radius).modes(); }

void add_refinement(SuiteResult& res, const std::string& name, const RefinementTable& t, double tol) {
  res.checks.push_back(make_check(name + ".default_grid", t.rows.at(1).defect, "<=", tol));
  res.checks.push_back(make_check(name + ".refinement", t.contract ? 1.0 : 0.0, "==", 1.0));
  res.data[name] = to_json(t);
}

// ---------------------------------------------------------------------------

SuiteResult suite_hp_dims(const RunConfig& cfg) {
  static const std::map<int, std::pair<long, long>> expected{
      {1, {2, 2}}, {2, {6, 0}}, {3, {8, 0}}, {4, {9, 0}}, {6, {10, 0}}};
  SuiteResult res;
  res.suite = "hp-dims";
  nlohmann::json rows = nlohmann::json::array();
  for (int k : cfg.groups) {
    const auto G = CyclicAction::standard(k);
    const HPDims d = hp_dimensions(G);
    const KRanks kr = k_ranks(G);
    nlohmann::json strata = nlohmann::json::array();
    for (const auto& s : d.strata)
      strata.push_back({{"element", s.element}, {"fixed_points", s.fixed_points}, {"orbits", s.orbits}});
    rows.push_back({{"group", group_name(k)},
                    {"hp0", d.even},
                    {"hp1", d.odd},
                    {"k0", kr.k0},
                    {"k1", kr.k1},
                    {"euler", boost::rational_cast<double>(orbifold_euler(G))},
                    {"strata", strata}});
    const auto [e0, e1] = expected.at(k);
    const std::string p = group_name(k) + ".";
    res.checks.push_back(make_check(p + "hp0", static_cast<double>(d.even), "==", static_cast<double>(e0)));
    res.checks.push_back(make_check(p + "hp1", static_cast<double>(d.odd), "==", static_cast<double>(e1)));
    res.checks.push_back(make_check(p + "k0", static_cast<double>(kr.k0), "==", static_cast<double>(e0)));
    res.checks.push_back(make_check(p + "k1", static_cast<double>(kr.k1), "==", static_cast<double>(e1)));
  }
  res.data["groups"] = rows;
  return res;
}

SuiteResult suite_clifford(const RunConfig& cfg) {
  SuiteResult res;
  res.suite = "clifford";
  const double tol = cfg.tol("clifford_wave");
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> S(-5.0, 5.0), X(-3.0, 3.0);
  double unitary = 0.0, group_law = 0.0, square = 0.0;
  for (int n = 1; n <= 3; ++n)
    for (int i = 0; i < 100; ++i) {
      std::vector<double> xi(n);
      for (double& v : xi) v = X(rng);
      const double s = S(rng), t = S(rng);
      const auto w = wave_operator(s, xi);
      unitary = std::max(unitary, (w * w.adjoint() - CliffordElement::scalar(n, 1.0)).norm());
      group_law = std::max(group_law, (w * wave_operator(t, xi) - wave_operator(s + t, xi)).norm());
      const auto c = clifford_vector(xi);
      double r2 = 0.0;
      for (double v : xi) r2 += v * v;
      square = std::max(square, (c * c - CliffordElement::scalar(n, r2)).norm());
    }
  res.checks.push_back(make_check("wave.unitary", unitary, "<=", tol));
  res.checks.push_back(make_check("wave.group_law", group_law, "<=", tol));
  res.checks.push_back(make_check("vector.square", square, "<=", tol));

  double fd = 0.0;
  const double delta = 1e-4;
  for (int k = 1; k <= 6; ++k)
    for (double y : {0.5, 2.0, 10.0}) {
      const auto polys = h_derivative_polys(k);
      const double closed = evaluate_closed_form(polys, y);
      const double diff = (h_derivative(k - 1, y + delta) - h_derivative(k - 1, y - delta)) / (2 * delta);
      fd = std::max(fd, std::abs(closed - diff) / std::max(1e-3, std::abs(closed)));
    }
  res.checks.push_back(make_check("h_derivative.finite_difference", fd, "<=", 1e-6));
  const auto p1 = h_derivative_polys(1);
  const bool first = p1.phi == std::vector<Rational>{Rational(-1)} &&
                     p1.psi == std::vector<Rational>{Rational(0), Rational(1)};
  res.checks.push_back(make_check("h_derivative.order_one", first ? 1.0 : 0.0, "==", 1.0));
  return res;
}

SuiteResult suite_chi(const RunConfig& cfg) {
  SuiteResult res;
  res.suite = "chi";
  const auto chi = build_chi(cfg.chi_sigma);
  double odd = 0.0, low = INFINITY, high = -INFINITY, tail = 0.0;
  for (int i = 1; i <= 5000; ++i) {
    const double l = 0.01 * i;
    const double v = chi.value(l);
    odd = std::max(odd, std::abs(v + chi.value(-l)));
    low = std::min(low, v);
    high = std::max(high, v);
    if (l >= 5.0) tail = std::max(tail, std::pow(1.0 + l, 6) * std::abs(v * v - 1.0));
  }
  res.checks.push_back(make_check("odd", odd, "<=", cfg.tol("chi_odd")));
  res.checks.push_back(make_check("positive", low, ">", 0.0));
  res.checks.push_back(make_check("bounded_by_one", high, "<=", 1.0 + 1e-12));
  res.checks.push_back(make_check("schwartz_tail", tail, "<=", cfg.tol("chi_tail")));

  std::mt19937 rng(5);
  std::uniform_real_distribution<double> X(-12.0, 12.0);
  double closed = 0.0;
  for (int n = 1; n <= 3; ++n)
    for (int i = 0; i < 30; ++i) {
      std::vector<double> xi(n);
      for (double& v : xi) v = X(rng);
      closed = std::max(closed, (chi_of_clifford(chi, xi, cfg.quad) - sigma_closed_form(chi, xi)).norm());
    }
  res.checks.push_back(make_check("clifford_calculus", closed, "<=", cfg.tol("clifford_wave")));
  res.data["chi_at_1"] = chi.value(1.0);
  res.data["sigma"] = chi.sigma();
  return res;
}

SuiteResult suite_sigma_decay(const RunConfig& cfg) {
  SuiteResult res;
  res.suite = "sigma-decay";
  const auto chi = build_chi(cfg.chi_sigma);
  const int n = cfg.n;
  const GridSpec grid(n, 40.0, n == 3 ? 1.0 : 0.5);
  res.data["n"] = n;
  for (int axis = 0; axis < n; ++axis) {
    const auto rep = symbol_derivative_decay(chi, grid, axis, 5.0, 40.0, cfg.quad);
    const std::string name = "axis" + std::to_string(axis);
    res.checks.push_back(make_check(name + ".decay_order", decay_value(rep), ">=", cfg.tol("decay_order")));
    res.data[name] = decay_json(rep);
    res.tables.emplace_back(name, decay_csv(rep));
  }
  return res;
}

SuiteResult suite_dirac(const RunConfig& cfg) {
  SuiteResult res;
  res.suite = "dirac-lemmas";
  const auto chi = build_chi(cfg.chi_sigma);
  const KernelGrid kg;
  const double order_tol = cfg.tol("decay_order");

  const auto comm = dirac_commutator_kernel(TorusElement::basis({1, 0}), chi, kg, cfg.quad);
  const auto comm_rep = decay_order(comm.kernel, 5.0, kg.x_half_width, 1e-12 * comm.kernel.sup_norm());
  res.checks.push_back(make_check("commutator.decay_order", decay_value(comm_rep), ">=", order_tol));
  res.data["commutator"] = decay_json(comm_rep);
  res.data["commutator"]["error_estimate"] = comm.error_estimate;
  res.data["commutator"]["converged"] = comm.converged;
  res.tables.emplace_back("commutator", decay_csv(comm_rep));

  const auto def = dirac_defect_kernel(TorusElement::unit(2), chi, kg, cfg.quad);
  const auto def_rep = decay_order(def.kernel, 5.0, kg.x_half_width, 1e-12 * def.kernel.sup_norm());
  res.checks.push_back(make_check("defect.decay_order", decay_value(def_rep), ">=", order_tol));
  res.data["defect"] = decay_json(def_rep);
  res.tables.emplace_back("defect", decay_csv(def_rep));

  const auto zero = dirac_commutator_kernel(TorusElement::unit(2), chi, kg, cfg.quad);
  res.checks.push_back(make_check("commutator_unit.sup", zero.kernel.sup_norm(), "==", 0.0));

  // G-invariance of D
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> X(-30.0, 30.0);
  std::vector<std::vector<double>> samples;
  for (int i = 0; i < 100; ++i) samples.push_back({X(rng), X(rng)});
  for (int k : cfg.groups) {
    const auto rep = check_D_invariance(chi, CyclicAction::standard(k), samples, cfg.quad);
    res.checks.push_back(make_check(group_name(k) + ".invariance", rep.max_defect, "<=", cfg.tol("invariance")));
    res.data["invariance"][group_name(k)] = {{"pointwise", rep.pointwise_defects},
                                             {"transform", rep.transform_defects}};
  }

  // composition and adjoint expansions on the torus-action family
  const GridSpec grid(1, 8.0, 1.0 / 16);
  const ModeBasis basis = ModeBasis::box(1, 3);
  TorusElement ca(1), cb(1);
  ca.add({0}, 1.0);
  ca.add({1}, cplx(0.5, 0.2));
  ca.add({-1}, 0.3);
  cb.add({0}, 0.7);
  cb.add({1}, cplx(-0.4, 0.1));
  cb.add({-1}, cplx(0.2, -0.3));
  auto sample_u = [&](ActionDescriptor act) {
    return RnCrossedElement::sample(grid, basis, act, [](std::span<const double> x, const Mode& m) {
      if (std::abs(m[0]) > 1) return cplx(0.0);
      return cplx(std::exp(-kPi * x[0] * x[0] / 2.0) * (1.0 + 0.3 * m[0]),
                  0.2 * m[0] * x[0] * std::exp(-kPi * x[0] * x[0]));
    });
  };
  {
    const auto act = ActionDescriptor::translation();
    const auto u = sample_u(act);
    const auto a = gaussian_symbol(ca, {0.3}, 4.0), b = gaussian_symbol(cb, {-0.2}, 4.0);
    const auto ref = apply_D(a, apply_D(b, u));
    std::vector<double> defects;
    for (int N = 0; N <= 3; ++N) defects.push_back(apply_D(symbol_compose(a, b, N, act), u).distance(ref));
    bool monotone = true;
    for (int N = 1; N <= 3; ++N) monotone = monotone && defects[N] < defects[N - 1];
    res.checks.push_back(make_check("compose.monotone", monotone ? 1.0 : 0.0, "==", 1.0));
    res.checks.push_back(make_check("compose.exact_symbol",
                                    apply_D(symbol_compose_exact(a, b, act), u).distance(ref), "<=",
                                    kAlgebraTol));
    res.data["compose_defects"] = defects;

    const auto wide = gaussian_symbol(ca, {0.3}, 8.0);
    const auto v = RnCrossedElement::sample(grid, basis, act, [](std::span<const double> x, const Mode& m) {
      if (std::abs(m[0]) > 1) return cplx(0.0);
      return cplx(std::exp(-kPi * (x[0] - 0.5) * (x[0] - 0.5)), 0.1 * m[0]) * std::exp(-kPi * x[0] * x[0] / 3);
    });
    std::vector<double> adj;
    const cplx lhs = crossed_pairing(apply_D(wide, u), v);
    for (int N = 0; N <= 3; ++N)
      adj.push_back(std::abs(lhs - crossed_pairing(u, apply_D(symbol_adjoint(wide, N, act), v))));
    res.checks.push_back(make_check("adjoint.pairing", adj.back(), "<=", cfg.tol("adjoint_pairing")));
    res.data["adjoint_defects"] = adj;
  }
  {
    const auto act = ActionDescriptor::trivial();
    const auto u = sample_u(act);
    const auto a = gaussian_symbol(ca, {0.3}, 4.0), b = gaussian_symbol(cb, {-0.2}, 4.0);
    const auto ref = apply_D(a, apply_D(b, u));
    double worst = 0.0;
    for (int N = 0; N <= 3; ++N)
      worst = std::max(worst, apply_D(symbol_compose(a, b, N, act), u).distance(ref));
    res.checks.push_back(make_check("compose.trivial_action", worst, "<=", kAlgebraTol));
  }
  return res;
}

SuiteResult suite_star(const RunConfig& cfg) {
  SuiteResult res;
  res.suite = "star-product";
  std::mt19937 rng(23);
  std::uniform_int_distribution<int> P(-60, 60), Q(1, 97);

  // associativity: <Jm, n> + <J(m+n), p> = <Jn, p> + <Jm, n+p> in exact rationals
  long mismatches = 0;
  for (int dim : {2, 3}) {
    const int radius = dim == 2 ? 2 : 1;
    const auto modes = mode_box(dim, radius);
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<std::vector<Rational>> J(dim, std::vector<Rational>(dim, Rational(0)));
      for (int i = 0; i < dim; ++i)
        for (int j = i + 1; j < dim; ++j) {
          J[i][j] = Rational(P(rng), Q(rng));
          J[j][i] = -J[i][j];
        }
      auto add = [](const Mode& a, const Mode& b) {
        Mode c(a.size());
        for (std::size_t i = 0; i < a.size(); ++i) c[i] = a[i] + b[i];
        return c;
      };
      for (const auto& m : modes)
        for (const auto& n : modes)
          for (const auto& p : modes) {
            const Rational l = star_exponent_exact(J, m, n) + star_exponent_exact(J, add(m, n), p);
            const Rational r = star_exponent_exact(J, n, p) + star_exponent_exact(J, m, add(n, p));
            if (l != r) ++mismatches;
          }
    }
  }
  res.checks.push_back(make_check("associativity.exact_mismatches", static_cast<double>(mismatches), "==", 0.0));

  // coefficient formula against the oscillatory integral
  double phase = 0.0, modulus = 0.0;
  for (double j : {0.37, -0.11}) {
    const auto rep = star_product_oracle(DeformationMatrix::planar(j), 3);
    phase = std::max(phase, rep.max_phase_error);
    modulus = std::max(modulus, rep.max_modulus_error);
  }
  res.checks.push_back(make_check("oracle.phase_error", phase, "<=", cfg.tol("star_phase")));
  res.data["oracle_modulus_error"] = modulus;

  const auto J = DeformationMatrix::planar(0.29);
  const auto U1 = TorusElement::basis({1, 0}), U2 = TorusElement::basis({0, 1});
  const cplx ratio = star_J(U2, U1, J).coeff({1, 1}) / star_J(U1, U2, J).coeff({1, 1});
  res.checks.push_back(make_check("commutation.theta", std::abs(ratio - e_phase(kThetaPerJ * J(0, 1))), "<=",
                                  kAlgebraTol));

  // beta_g is an automorphism of every x_J
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  double beta = 0.0;
  const auto modes = mode_box(2, 2);
  for (int trial = 0; trial < 20; ++trial) {
    const auto Jr = DeformationMatrix::planar(U(rng));
    for (int k : cfg.groups) {
      const auto G = CyclicAction::standard(k);
      for (int r = 0; r < k; ++r)
        for (const auto& m : modes)
          for (const auto& n : modes)
            beta = std::max(beta, beta_respects_star(G.element(r), TorusElement::basis(m),
                                                     TorusElement::basis(n), Jr)
                                      .max_abs());
    }
  }
  res.checks.push_back(make_check("beta.automorphism_defect", beta, "==", 0.0));
  return res;
}

SuiteResult suite_crossed_g(const RunConfig& cfg) {
  SuiteResult res;
  res.suite = "crossed-g";
  std::mt19937 rng(29);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  double assoc = 0.0, idem = 0.0, trace_err = 0.0;
  for (int k : cfg.groups) {
    const auto G = CyclicAction::standard(k);
    const auto J = DeformationMatrix::planar(U(rng));
    auto random_crossed = [&] {
      TorusCrossed x = torus_crossed_zero(G);
      for (int r = 0; r < k; ++r) x.carrier[r] = random_torus(rng, 2, 1);
      return x;
    };
    const auto x = random_crossed(), y = random_crossed(), z = random_crossed();
    const auto l = crossed_mul(crossed_mul(x, y, G, J), z, G, J);
    const auto r = crossed_mul(x, crossed_mul(y, z, G, J), G, J);
    for (int s = 0; s < k; ++s) assoc = std::max(assoc, (l.carrier[s] - r.carrier[s]).max_abs());
    TorusCrossed p = torus_crossed_zero(G);
    for (int s = 0; s < k; ++s) p.carrier[s] = TorusElement::basis({0, 0}, 1.0 / k);
    const auto p2 = crossed_mul(p, p, G, J);
    for (int s = 0; s < k; ++s) idem = std::max(idem, (p2.carrier[s] - p.carrier[s]).max_abs());
    trace_err = std::max(trace_err, std::abs(crossed_trace(p) - 1.0 / k));
  }
  res.checks.push_back(make_check("associativity", assoc, "<=", kAlgebraTol));
  res.checks.push_back(make_check("averaging_idempotent", idem, "<=", kAlgebraTol));
  res.checks.push_back(make_check("averaging_trace", trace_err, "<=", kAlgebraTol));

  bool constant = true;
  nlohmann::json rows = nlohmann::json::array();
  const std::vector<double> thetas{0.0, 0.1, 0.25, 1.0 / std::numbers::sqrt2, 0.9};
  for (int k : nontrivial_groups(cfg)) {
    const auto rep = theta_independence_regression(thetas, CyclicAction::standard(k));
    constant = constant && rep.constant;
    for (const auto& row : rep.rows)
      rows.push_back({{"group", group_name(k)},
                      {"theta", row.theta},
                      {"hp0", row.dims.even},
                      {"hp1", row.dims.odd},
                      {"beta_defect", row.beta_defect},
                      {"idempotent_defect", row.idempotent_defect},
                      {"pairing", {row.pairing.real(), row.pairing.imag()}}});
  }
  res.checks.push_back(make_check("theta_independence", constant ? 1.0 : 0.0, "==", 1.0));
  res.data["theta_rows"] = rows;
  return res;
}

SuiteResult suite_rg_index(const RunConfig& cfg) {
  SuiteResult res;
  res.suite = "rg-index";
  std::mt19937 rng(31);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  std::uniform_int_distribution<int> D(1, 6);
  auto random_matrix = [&](int r, int c) {
    Eigen::MatrixXcd M(r, c);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < c; ++j) M(i, j) = cplx(U(rng), U(rng));
    return M;
  };
  long mismatches = 0, homotopy_breaks = 0;
  double stab = 0.0;
  for (int k : cfg.groups) {
    std::uniform_int_distribution<int> L(0, k - 1);
    for (int trial = 0; trial < 25; ++trial) {
      std::vector<int> dl(D(rng)), cl(D(rng));
      for (int& v : dl) v = L(rng);
      for (int& v : cl) v = L(rng);
      // equivariant operator in the character basis, with occasional rank drops
      auto equivariant = [&] {
        Eigen::MatrixXcd T0 = Eigen::MatrixXcd::Zero(static_cast<int>(cl.size()), static_cast<int>(dl.size()));
        for (std::size_t i = 0; i < cl.size(); ++i)
          for (std::size_t j = 0; j < dl.size(); ++j)
            if (cl[i] == dl[j]) T0(i, j) = cplx(U(rng), U(rng));
        if (trial % 3 == 0) T0.col(0).setZero();
        return T0;
      };
      const Eigen::MatrixXcd T0 = equivariant();
      const Eigen::MatrixXcd V = random_matrix(static_cast<int>(dl.size()), static_cast<int>(dl.size())) +
                                 3.0 * Eigen::MatrixXcd::Identity(dl.size(), dl.size());
      const Eigen::MatrixXcd W = random_matrix(static_cast<int>(cl.size()), static_cast<int>(cl.size())) +
                                 3.0 * Eigen::MatrixXcd::Identity(cl.size(), cl.size());
      auto conj_rep = [&](const std::vector<int>& labels, const Eigen::MatrixXcd& S) {
        Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(labels.size(), labels.size());
        for (std::size_t i = 0; i < labels.size(); ++i) d(i, i) = e_phase(static_cast<double>(labels[i]) / k);
        return Representation(k, S * d * S.inverse());
      };
      const auto dom = conj_rep(dl, V), cod = conj_rep(cl, W);
      const Eigen::MatrixXcd T = W * T0 * V.inverse();
      const RGClass idx = g_index(T, dom, cod);
      // block-by-block ranks in the character basis
      std::vector<long> direct(k, 0);
      for (int j = 0; j < k; ++j) {
        std::vector<int> rows, cols;
        for (std::size_t i = 0; i < cl.size(); ++i)
          if (cl[i] == j) rows.push_back(static_cast<int>(i));
        for (std::size_t i = 0; i < dl.size(); ++i)
          if (dl[i] == j) cols.push_back(static_cast<int>(i));
        long rank = 0;
        if (!rows.empty() && !cols.empty()) {
          Eigen::MatrixXcd B(rows.size(), cols.size());
          for (std::size_t a = 0; a < rows.size(); ++a)
            for (std::size_t b = 0; b < cols.size(); ++b) B(a, b) = T0(rows[a], cols[b]);
          Eigen::FullPivLU<Eigen::MatrixXcd> lu(B);
          lu.setThreshold(1e-10);
          rank = lu.rank();
        }
        direct[j] = (static_cast<long>(cols.size()) - rank) - (static_cast<long>(rows.size()) - rank);
      }
      if (idx.multiplicities() != direct) ++mismatches;
      if (idx != dom.rg_class() - cod.rg_class()) ++mismatches;

      const Eigen::MatrixXcd T1 = W * equivariant() * V.inverse();
      for (int s = 1; s <= 10; ++s) {
        const double t = 0.1 * s;
        if (g_index((1.0 - t) * T + t * T1, dom, cod) != idx) ++homotopy_breaks;
      }
    }
    // [rho] stabilization is multiplicative
    const int d = 2;
    const Eigen::MatrixXcd S = random_matrix(d, d) + 3.0 * Eigen::MatrixXcd::Identity(d, d);
    Eigen::MatrixXcd diag = Eigen::MatrixXcd::Zero(d, d);
    for (int i = 0; i < d; ++i) diag(i, i) = e_phase(static_cast<double>(L(rng)) / k);
    const Eigen::MatrixXcd u = S * diag * S.inverse();
    const auto rho = Representation::from_characters(k, {L(rng), L(rng)});
    MatrixCrossed x, y;
    for (int r = 0; r < k; ++r) {
      x.carrier.push_back(random_matrix(d, d));
      y.carrier.push_back(random_matrix(d, d));
    }
    const Eigen::MatrixXcd ul = Eigen::kroneckerProduct(Eigen::MatrixXcd::Identity(rho.dim(), rho.dim()), u).eval();
    const auto lhs = rho_stabilization(rho, crossed_mul(x, y, u));
    const auto rhs = crossed_mul(rho_stabilization(rho, x), rho_stabilization(rho, y), ul);
    for (int r = 0; r < k; ++r) stab = std::max(stab, (lhs.carrier[r] - rhs.carrier[r]).cwiseAbs().maxCoeff());
  }
  res.checks.push_back(make_check("index.mismatches", static_cast<double>(mismatches), "==", 0.0));
  res.checks.push_back(make_check("index.homotopy_breaks", static_cast<double>(homotopy_breaks), "==", 0.0));
  res.checks.push_back(make_check("rho_stabilization.homomorphism", stab, "<=", cfg.tol("rho_stabilization")));
  return res;
}

SuiteResult suite_theta(const RunConfig& cfg) {
  SuiteResult res;
  res.suite = "theta-j";
  const auto J = DeformationMatrix::planar(0.37);
  const auto act = ActionDescriptor::translation();
  const double ratio = cfg.tol("refinement_ratio"), floor = cfg.tol("refinement_floor");
  const double tol = cfg.tol("theta_defect");
  auto f_fn = [](std::span<const double> x, const Mode& m) {
    if (std::abs(m[0]) + std::abs(m[1]) > 1) return cplx(0.0);
    const double c[2] = {0.3, 0.0};
    return cplx(1.0 + 0.2 * m[0], 0.3 * m[1]) * gaussian(x, c, 1.0);
  };
  auto g_fn = [](std::span<const double> x, const Mode& m) {
    if (std::abs(m[0]) + std::abs(m[1]) > 1) return cplx(0.0);
    const double c[2] = {0.0, -0.2};
    return cplx(0.5 - 0.1 * m[1], 0.2 * m[0]) * gaussian(x, c, 1.5);
  };
  {
    const GridSpec grid(2, cfg.grid_L, cfg.grid_h);
    const auto f = RnCrossedElement::sample(grid, ModeBasis::box(2, 2), act, f_fn);
    res.checks.push_back(make_check("identity_at_zero", theta_J(f, DeformationMatrix::zero(2)).distance(f), "<=",
                                    cfg.tol("theta_identity")));
  }
  const auto hom = refinement_table(cfg.grid_h, cfg.refine, [&](double h) {
    const GridSpec grid(2, cfg.grid_L, h);
    const ModeBasis B = ModeBasis::box(2, 2);
    const auto f = RnCrossedElement::sample(grid, B, act, f_fn), g = RnCrossedElement::sample(grid, B, act, g_fn);
    return theta_J(twisted_conv(f, g, J), J).distance(twisted_conv(theta_J(f, J), theta_J(g, J)));
  }, ratio, floor);
  add_refinement(res, "homomorphism", hom, tol);

  for (int k : nontrivial_groups(cfg)) {
    const auto G = CyclicAction::standard(k);
    const ModeBasis B = ModeBasis::orbit_closure({{0, 0}, {1, 0}, {0, 1}}, G);
    const auto t = refinement_table(cfg.grid_h, cfg.refine, [&](double h) {
      const GridSpec grid(2, cfg.grid_L, h);
      const auto f = RnCrossedElement::sample(grid, B, act, [](std::span<const double> x, const Mode& m) {
        const double c[2] = {0.3, -0.2};
        return cplx(1.0 + 0.1 * m[0], 0.2 * m[1]) * gaussian(x, c, 1.0);
      });
      double worst = 0.0;
      for (int r = 1; r < k; ++r) {
        const auto g = G.element(r);
        worst = std::max(worst, group_action(g, theta_J(f, J)).distance(theta_J(group_action(g, f), J)));
      }
      return worst;
    }, ratio, floor);
    add_refinement(res, group_name(k) + ".equivariance", t, tol);
  }
  return res;
}

SuiteResult suite_takai(const RunConfig& cfg) {
  SuiteResult res;
  res.suite = "takai";
  const auto act = ActionDescriptor::translation();
  const double ratio = cfg.tol("refinement_ratio"), floor = cfg.tol("refinement_floor");
  const double tol = cfg.tol("takai_defect");

  const auto mult = refinement_table(cfg.takai_h, cfg.refine, [&](double h) {
    const GridSpec grid(2, cfg.takai_L, h);
    const ModeBasis B = ModeBasis::box(1, 2);
    auto make = [&](double a, double b, double ws) {
      return DoubleCrossed{GridFunction::sample(grid, B.size(), AlgebraKind::Torus,
                                                [&](std::span<const double> x, std::span<cplx> out) {
                                                  for (std::size_t i = 0; i < B.size(); ++i) {
                                                    const int m = B[i][0];
                                                    out[i] = std::abs(m) > 1
                                                                 ? cplx(0.0)
                                                                 : cplx(1.0 + a * m, b * m) *
                                                                       std::exp(-kPi * ((x[0] - a) * (x[0] - a) / 0.6 +
                                                                                        (x[1] - b) * (x[1] - b) / ws));
                                                  }
                                                }),
                          B, act};
    };
    const auto F = make(0.2, -0.1, 0.25), G = make(-0.3, 0.25, 0.3);
    return max_difference(takai_map(double_crossed_mul(F, G)).data,
                          kernel_compose(takai_map(F), takai_map(G)).data);
  }, ratio, floor);
  add_refinement(res, "multiplicativity", mult, tol);

  double minus_identity = 0.0;
  for (int k : nontrivial_groups(cfg)) {
    const auto Gc = CyclicAction::standard(k);
    const ModeBasis B = ModeBasis::orbit_closure({{0, 0}, {1, 0}}, Gc);
    // rows stay lattice preserving: 2 L h integral with L = 2
    const auto t = refinement_table(4.0 * cfg.takai_h, cfg.refine, [&](double h) {
      const GridSpec grid(4, 2.0, h);
      const DoubleCrossed F{GridFunction::sample(grid, B.size(), AlgebraKind::Torus,
                                                 [&](std::span<const double> x, std::span<cplx> out) {
                                                   const double c[4] = {0.2, 0.0, 0.0, -0.1};
                                                   for (std::size_t i = 0; i < B.size(); ++i)
                                                     out[i] = cplx(1.0 + 0.1 * B[i][0], 0.2 * B[i][1]) *
                                                              gaussian(x, c, 0.5);
                                                 }),
                            B, act};
      double worst = 0.0;
      for (int r = 1; r < k; ++r) {
        const auto g = Gc.element(r);
        const double d = max_difference(kernel_group_action(g, takai_map(F)).data,
                                        takai_map(double_group_action(g, F)).data);
        worst = std::max(worst, d);
        if (g == IntMatrix2(-IntMatrix2::Identity())) minus_identity = std::max(minus_identity, d);
      }
      return worst;
    }, ratio, floor);
    add_refinement(res, group_name(k) + ".equivariance", t, tol);
  }
  // no discretization error for -I; only summation order differs
  res.checks.push_back(make_check("minus_identity.exact", minus_identity, "<=", kRoundoffTol));
  return res;
}

}  // namespace

RefinementTable refinement_table(double h0, int count, const std::function<double(double)>& defect,
                                 double ratio, double floor) {
  if (count < 2) throw std::invalid_argument("refinement_table: need at least two resolutions");
  RefinementTable t;
  for (int i = 0; i < count; ++i) {
    const double h = h0 * std::ldexp(1.0, 1 - i);
    t.rows.push_back({h, defect(h)});
  }
  t.contract = true;
  for (std::size_t i = 1; i < t.rows.size(); ++i) {
    const double coarse = t.rows[i - 1].defect, fine = t.rows[i].defect;
    t.ratios.push_back(fine > 0.0 ? coarse / fine : INFINITY);
    if (!(fine <= std::max(coarse / ratio, floor))) t.contract = false;
  }
  return t;
}

nlohmann::json to_json(const RefinementTable& t) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : t.rows) rows.push_back({{"h", r.h}, {"defect", r.defect}});
  return {{"rows", rows}, {"ratios", t.ratios}, {"contract", t.contract}};
}

StarOracleReport star_product_oracle(const DeformationMatrix& J, int radius) {
  if (J.dim() != 2) throw std::invalid_argument("star_product_oracle: two-dimensional J only");
  StarOracleReport rep;
  const auto modes = mode_box(2, radius);
  for (const auto& m : modes)
    for (const auto& n : modes) rep.pairs.emplace_back(m, n);
  auto shift = [&](const Mode& m, int i) { return J(i, 0) * m[0] + J(i, 1) * m[1]; };

  // the integrand factorizes over coordinates: prod_i int int e(x (y + a_i) - y b_i)
  auto at_epsilon = [&](double eps) {
    const double h = 1.0 / 48;
    const int K = static_cast<int>(std::ceil(std::sqrt(40.0 / (kPi * eps)) / h));
    std::vector<double> w(K + 1);
    for (int i = 0; i <= K; ++i) w[i] = std::exp(-kPi * eps * (i * h) * (i * h));
    std::map<double, std::map<int, cplx>> table;
    for (const auto& [m, n] : rep.pairs)
      for (int i = 0; i < 2; ++i) table[shift(m, i)][n[i]] = 0.0;
    for (auto& [a, row] : table) {
      std::vector<double> inner(2 * K + 1);
      parallel_for(inner.size(), [&](std::size_t idx) {
        const double k = (static_cast<int>(idx) - K) * h + a;
        double s = w[0];
        for (int x = 1; x <= K; ++x) s += 2.0 * w[x] * std::cos(2.0 * kPi * x * h * k);
        inner[idx] = h * s;
      });
      for (auto& [b, value] : row) {
        cplx acc = 0.0;
        for (int y = -K; y <= K; ++y) acc += w[std::abs(y)] * inner[y + K] * e_phase(-y * h * b);
        value = h * acc;
      }
    }
    std::vector<cplx> out;
    for (const auto& [m, n] : rep.pairs) out.push_back(table[shift(m, 0)][n[0]] * table[shift(m, 1)][n[1]]);
    return out;
  };
  QuadratureSpec quad;
  quad.epsilon_sequence = {0.08, 0.04, 0.02, 0.01};
  quad.richardson_order = 3;
  quad.mode = Extrapolation::Log;
  const auto res = osc_integral(at_epsilon, quad);
  rep.values = res.value;
  rep.converged = res.converged;
  for (std::size_t i = 0; i < rep.pairs.size(); ++i) {
    const cplx r = rep.values[i] * e_phase(-star_exponent(J, rep.pairs[i].first, rep.pairs[i].second));
    rep.max_phase_error = std::max(rep.max_phase_error, std::abs(std::arg(r)));
    rep.max_modulus_error = std::max(rep.max_modulus_error, std::abs(std::abs(r) - 1.0));
  }
  return rep;
}

SuiteResult run_suite(const std::string& name, const RunConfig& cfg) {
  using Runner = SuiteResult (*)(const RunConfig&);
  static const std::map<std::string, Runner> table{
      {"hp-dims", suite_hp_dims},     {"clifford", suite_clifford},   {"chi", suite_chi},
      {"sigma-decay", suite_sigma_decay}, {"dirac-lemmas", suite_dirac}, {"star-product", suite_star},
      {"crossed-g", suite_crossed_g}, {"rg-index", suite_rg_index},   {"theta-j", suite_theta},
      {"takai", suite_takai}};
  const auto it = table.find(name);
  if (it == table.end()) throw ConfigError("unknown suite: " + name);
  const auto start = std::chrono::steady_clock::now();
  SuiteResult res = it->second(cfg);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::ostringstream msg;
  msg << "[" << name << "] " << (res.pass() ? "pass" : "FAIL") << " in " << secs << " s\n";
  std::cerr << msg.str();
  return res;
}

std::vector<SuiteResult> run_suites(const std::vector<std::string>& names, const RunConfig& cfg) {
  std::vector<SuiteResult> out(names.size());
  std::vector<std::exception_ptr> errors(names.size());
  parallel_for(names.size(), [&](std::size_t i) {
    try {
      out[i] = run_suite(names[i], cfg);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  });
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

}  // namespace nct
