#include <cmath>
#include <random>

#include "doctest.h"
#include "nct/finite_group.hpp"

using namespace nct;

namespace {

Eigen::MatrixXcd diag2(cplx a, cplx b) {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  return m;
}

Eigen::MatrixXcd swap2() {
  Eigen::MatrixXcd s(2, 2);
  s << 0, 1, 1, 0;
  return s;
}

}  // namespace

TEST_CASE("standard generators") {
  for (int k : {1, 2, 3, 4, 6}) {
    const auto G = CyclicAction::standard(k);
    CHECK(G.order() == k);
    IntMatrix2 p = IntMatrix2::Identity();
    for (int r = 0; r < k; ++r) {
      CHECK(G.element(r) == p);
      p = p * G.generator();
    }
    CHECK(p == IntMatrix2::Identity());
    CHECK(G.element(G.inverse(1)) * G.element(1) == IntMatrix2::Identity());
  }
  CHECK_THROWS_AS(CyclicAction::standard(5), std::invalid_argument);
  IntMatrix2 g;
  g << 0, -1, 1, 0;
  CHECK_THROWS_AS(CyclicAction(2, g), std::invalid_argument);
  CHECK(cyclic_from_json(to_json(CyclicAction::standard(6))).generator() == CyclicAction::standard(6).generator());
}

TEST_CASE("invariant Gram matrices") {
  CHECK((CyclicAction::standard(4).gram() - Eigen::Matrix2d::Identity()).norm() < 1e-15);
  const auto M = CyclicAction::standard(3).gram();
  for (int r = 0; r < 3; ++r) {
    const Eigen::Matrix2d g = CyclicAction::standard(3).element(r).cast<double>();
    CHECK((g.transpose() * M * g - M).norm() < 1e-14);
  }
}

TEST_CASE("beta respects every star product exactly") {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  for (int k : {2, 3, 4, 6}) {
    const auto G = CyclicAction::standard(k);
    const auto J = DeformationMatrix::planar(U(rng));
    for (int r = 0; r < k; ++r)
      for (int a = -2; a <= 2; ++a)
        for (int b = -2; b <= 2; ++b) {
          const auto d = beta_respects_star(G.element(r), TorusElement::basis({a, b}),
                                            TorusElement::basis({b - 1, a + 2}), J);
          CHECK(d.max_abs() == 0.0);
        }
  }
}

TEST_CASE("beta composes as a left action") {
  const auto G = CyclicAction::standard(6);
  TorusElement a(2);
  a.add({1, 2}, 1.0);
  a.add({-1, 0}, cplx(0, 2));
  CHECK(beta(G, 2, beta(G, 3, a)) == beta(G, 5, a));
}

TEST_CASE("Z2 acting on C^2 by swap") {
  const Eigen::MatrixXcd a0 = diag2(1.0, 2.0), a1 = diag2(3.0, cplx(0, 1));
  const Eigen::MatrixXcd b0 = diag2(-1.0, 0.5), b1 = diag2(cplx(2, 1), 4.0);
  const MatrixCrossed x{{a0, a1}}, y{{b0, b1}};
  const auto xy = crossed_mul(x, y, swap2());
  // g(diag(p, q)) = diag(q, p)
  const Eigen::MatrixXcd e = diag2(1.0 * -1.0 + 3.0 * 4.0, 2.0 * 0.5 + cplx(0, 1) * cplx(2, 1));
  const Eigen::MatrixXcd g = diag2(1.0 * cplx(2, 1) + 3.0 * 0.5, 2.0 * 4.0 + cplx(0, 1) * -1.0);
  CHECK((xy.carrier[0] - e).norm() < 1e-15);
  CHECK((xy.carrier[1] - g).norm() < 1e-15);
}

TEST_CASE("averaging idempotent in A_J x| G") {
  for (int k : {2, 3, 4, 6}) {
    const auto G = CyclicAction::standard(k);
    TorusCrossed p = torus_crossed_zero(G);
    for (int r = 0; r < k; ++r) p.carrier[r] = TorusElement::basis({0, 0}, 1.0 / k);
    const auto p2 = crossed_mul(p, p, G, DeformationMatrix::planar(0.3));
    for (int r = 0; r < k; ++r) CHECK((p2.carrier[r] - p.carrier[r]).max_abs() < 1e-15);
    CHECK(std::abs(crossed_trace(p) - 1.0 / k) < 1e-15);
  }
}

TEST_CASE("crossed seminorm weighs pulled-back coefficients") {
  const auto G = CyclicAction::standard(4);
  const auto x = torus_crossed_term(G, TorusElement::basis({2, 0}, 3.0), 1);
  CHECK(crossed_seminorm(x, G, 1, 2.0) == doctest::Approx(2.0 * 3.0 * 3.0));
}

TEST_CASE("cocycle and deformation agree") {
  const double theta = 0.23;
  const auto J = cocycle_deformation(theta);
  for (int a = -2; a <= 2; ++a)
    for (int b = -2; b <= 2; ++b) {
      const Mode x{a, b}, y{b + 1, -a};
      const auto p = star_J(TorusElement::basis(x), TorusElement::basis(y), J);
      CHECK(std::abs(p.coeff({x[0] + y[0], x[1] + y[1]}) - cocycle_omega(theta, x, y)) < 1e-14);
    }
}

TEST_CASE("representation ring arithmetic") {
  const auto c1 = RGClass::character(4, 1), c3 = RGClass::character(4, 3);
  CHECK(c1 * c3 == RGClass::character(4, 0));
  CHECK((RGClass::regular(3) * RGClass::character(3, 2)) == RGClass::regular(3));
  CHECK((c1 + c3 - c1) == c3);
  CHECK(RGClass::regular(6).dim() == 6);
  CHECK(std::abs(c1.trace(1) - cplx(0, 1)) < 1e-15);
  CHECK_THROWS_AS(c1 + RGClass::character(3, 1), std::invalid_argument);
}

TEST_CASE("G-index of hand examples") {
  // projection onto the trivial character of the regular representation of Z2
  const Representation reg(2, swap2());
  const auto triv = Representation::from_characters(2, {0});
  Eigen::MatrixXcd T(1, 2);
  T << 1, 1;
  const auto idx = g_index(T, reg, triv);
  CHECK(idx == RGClass::character(2, 1));
  const auto kc = kernel_cokernel(T, reg, triv);
  CHECK(kc.kernel == RGClass::character(2, 1));
  CHECK(kc.cokernel == RGClass(2));
  Eigen::MatrixXcd bad(1, 2);
  bad << 1, 0;
  CHECK_THROWS_AS(g_index(bad, reg, triv), std::invalid_argument);
  CHECK(reg.rg_class() == RGClass::regular(2));
}

TEST_CASE("representations from elements") {
  std::vector<Eigen::MatrixXcd> els{Eigen::MatrixXcd::Identity(2, 2), swap2()};
  CHECK(Representation::from_elements(els).dim() == 2);
  els[1] = diag2(1.0, cplx(0, 1));
  CHECK_THROWS_AS(Representation::from_elements(els), std::invalid_argument);
}

TEST_CASE("stabilization by the regular representation of Z2") {
  const Representation reg(2, swap2());
  Eigen::MatrixXcd a0(1, 1), a1(1, 1);
  a0 << cplx(2, 1);
  a1 << -3.0;
  const MatrixCrossed x{{a0, a1}};
  const auto s = rho_stabilization(reg, x);
  CHECK((s.carrier[0] - cplx(2, 1) * Eigen::MatrixXcd::Identity(2, 2)).norm() == 0.0);
  CHECK((s.carrier[1] + 3.0 * swap2()).norm() == 0.0);
}

TEST_CASE("degenerate splitting") {
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(3, 3);
  M(0, 1) = 0.5;
  M(1, 0) = -0.5;
  const auto s = split_degenerate(DeformationMatrix(M));
  CHECK(s.V.cols() == 1);
  CHECK(s.W.cols() == 2);
  CHECK(std::abs(std::abs(s.V(2, 0)) - 1.0) < 1e-12);
  Eigen::MatrixXd rot = Eigen::MatrixXd::Identity(3, 3);
  rot(0, 0) = rot(1, 1) = 0.0;
  rot(0, 1) = -1.0;
  rot(1, 0) = 1.0;
  CHECK(split_invariance_defect(s, rot) < 1e-12);
  Eigen::MatrixXd mix = Eigen::MatrixXd::Identity(3, 3);
  mix(0, 2) = 1.0;
  CHECK(split_invariance_defect(s, mix) > 0.5);
}
