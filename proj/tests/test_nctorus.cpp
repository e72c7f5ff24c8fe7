#include <cmath>
#include <random>

#include "doctest.h"
#include "nct/clifford.hpp"
#include "nct/nctorus.hpp"
#include "nct/suites.hpp"

using namespace nct;

namespace {

TorusElement random_element(std::mt19937& rng, int n, int radius) {
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  TorusElement a(n);
  for (int i = 0; i < 6; ++i) {
    Mode m(n);
    for (int& v : m) v = static_cast<int>(std::lround(U(rng) * radius));
    a.add(m, cplx(U(rng), U(rng)));
  }
  return a;
}

double gap(const TorusElement& a, const TorusElement& b) { return (a - b).max_abs(); }

}  // namespace

TEST_CASE("phase constant of the star product") {
  const auto J = DeformationMatrix::planar(0.3);
  const auto p = star_J(TorusElement::basis({1, 0}), TorusElement::basis({0, 1}), J);
  // <Jm, n> = J_12 (m_2 n_1 - m_1 n_2) = -0.3
  CHECK(kStarPhaseSign == 1);
  CHECK(std::abs(p.coeff({1, 1}) - e_phase(-0.3)) < 1e-15);
  CHECK(p.coeffs().size() == 1);
}

TEST_CASE("commutation relation of the generators") {
  const double j = 0.21;
  const auto J = DeformationMatrix::planar(j);
  const auto U1 = TorusElement::basis({1, 0}), U2 = TorusElement::basis({0, 1});
  const cplx ratio = star_J(U2, U1, J).coeff({1, 1}) / star_J(U1, U2, J).coeff({1, 1});
  CHECK(kThetaPerJ == 2);
  CHECK(std::abs(ratio - e_phase(kThetaPerJ * j)) < 1e-15);
}

TEST_CASE("oscillatory integral pins the coefficient formula") {
  const auto rep = star_product_oracle(DeformationMatrix::planar(0.37), 3);
  CHECK(rep.pairs.size() == 49u * 49u);
  CHECK(rep.max_phase_error <= 1e-4);
  CHECK(rep.max_modulus_error <= 1e-4);
}

TEST_CASE("associativity") {
  std::mt19937 rng(4);
  for (int n : {2, 3}) {
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n, n);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        M(i, j) = U(rng);
        M(j, i) = -M(i, j);
      }
    const DeformationMatrix J(M);
    for (int t = 0; t < 10; ++t) {
      const auto a = random_element(rng, n, 3), b = random_element(rng, n, 3), c = random_element(rng, n, 3);
      CHECK(gap(star_J(star_J(a, b, J), c, J), star_J(a, star_J(b, c, J), J)) < 1e-13);
    }
  }
}

TEST_CASE("exact bicharacter identity over rationals") {
  using R = Rational;
  const std::vector<std::vector<R>> J{{R(0), R(3, 7), R(-1, 5)}, {R(-3, 7), R(0), R(2, 9)}, {R(1, 5), R(-2, 9), R(0)}};
  const Mode m{1, -2, 3}, n{0, 4, -1}, p{-3, 1, 2};
  const Mode mn{1, 2, 2}, np{-3, 5, 1};
  CHECK(star_exponent_exact(J, m, n) + star_exponent_exact(J, mn, p) ==
        star_exponent_exact(J, n, p) + star_exponent_exact(J, m, np));
  CHECK(star_exponent_exact(J, m, n) == -star_exponent_exact(J, n, m));
}

TEST_CASE("J = 0 is the commutative product") {
  std::mt19937 rng(5);
  const auto a = random_element(rng, 2, 2), b = random_element(rng, 2, 2);
  CHECK(gap(star_0(a, b), star_0(b, a)) == 0.0);
  CHECK(gap(star_J(a, b, DeformationMatrix::zero(2)), star_0(a, b)) == 0.0);
}

TEST_CASE("involution and trace") {
  std::mt19937 rng(6);
  const auto J = DeformationMatrix::planar(0.17);
  const auto a = random_element(rng, 2, 2), b = random_element(rng, 2, 2);
  CHECK(gap(star_J(a, b, J).adjoint(), star_J(b.adjoint(), a.adjoint(), J)) < 1e-15);
  CHECK(std::abs(trace(star_J(a, b, J)) - trace(star_J(b, a, J))) < 1e-14);
  CHECK(gap(a.adjoint().adjoint(), a) == 0.0);
}

TEST_CASE("dimension mismatch") {
  CHECK_THROWS_AS(star_J(TorusElement(2), TorusElement(3), DeformationMatrix::zero(2)), std::invalid_argument);
  Eigen::MatrixXd M(2, 2);
  M << 0, 1, 1, 0;
  CHECK_THROWS_AS(DeformationMatrix{M}, std::invalid_argument);
}

TEST_CASE("derivation is the generator of alpha") {
  std::mt19937 rng(7);
  const auto a = random_element(rng, 2, 3);
  const double t = 1e-5;
  for (int j = 0; j < 2; ++j) {
    std::vector<double> xp(2, 0.0), xm(2, 0.0);
    xp[j] = t;
    xm[j] = -t;
    const auto fd = (1.0 / (2.0 * t)) * (alpha(xp, a) - alpha(xm, a));
    CHECK(gap(fd, derivation(j, a)) <= 1e-6);
  }
}

TEST_CASE("alpha is an automorphism of every deformation") {
  std::mt19937 rng(8);
  const auto J = DeformationMatrix::planar(0.4);
  const auto a = random_element(rng, 2, 2), b = random_element(rng, 2, 2);
  const std::vector<double> x{0.3, -0.8};
  CHECK(gap(alpha(x, star_J(a, b, J)), star_J(alpha(x, a), alpha(x, b), J)) < 1e-14);
  CHECK(gap(scaled_alpha(0.5, x, a), alpha(std::vector<double>{0.15, -0.4}, a)) < 1e-15);
  const int k[2] = {1, 2};
  CHECK(gap(derivation(k, a), derivation(0, derivation(1, derivation(1, a)))) < 1e-12);
}

TEST_CASE("seminorms and json") {
  TorusElement a(2);
  a.add({3, -4}, 2.0);
  CHECK(smooth_seminorm(a, 0) == 2.0);
  CHECK(smooth_seminorm(a, 1) == doctest::Approx(12.0));
  std::mt19937 rng(9);
  const auto b = random_element(rng, 2, 3);
  CHECK(torus_from_json(to_json(b)) == b);
}
