#include <cmath>
#include <random>

#include "doctest.h"
#include "nct/clifford.hpp"
#include "nct/grid.hpp"
#include "nct/pseudodiff.hpp"
#include "oracles.hpp"

using namespace nct;

namespace {

CliffordElement random_element(std::mt19937& rng, int n) {
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  CliffordElement a(n);
  for (unsigned m = 0; m < a.size(); ++m) a[m] = cplx(U(rng), U(rng));
  return a;
}

double matrix_gap(const CliffordElement& a, const oracle::Mat& m) {
  return (oracle::represent(a) - m).cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("generators anticommute and square to one") {
  for (int n = 1; n <= 4; ++n)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const auto ei = CliffordElement::generator(n, i), ej = CliffordElement::generator(n, j);
        const auto anti = ei * ej + ej * ei;
        CHECK((anti - CliffordElement::scalar(n, i == j ? 2.0 : 0.0)).norm() == 0.0);
      }
}

TEST_CASE("product agrees with the matrix model") {
  std::mt19937 rng(1);
  for (int n = 1; n <= 3; ++n)
    for (int t = 0; t < 20; ++t) {
      const auto a = random_element(rng, n), b = random_element(rng, n);
      CHECK(matrix_gap(a * b, oracle::represent(a) * oracle::represent(b)) < 1e-13);
      CHECK(matrix_gap(a.adjoint(), oracle::represent(a).adjoint()) < 1e-14);
    }
}

TEST_CASE("rank mismatch is rejected") {
  CHECK_THROWS_AS(clifford_mul(CliffordElement(2), CliffordElement(3)), std::invalid_argument);
}

TEST_CASE("grading and parity") {
  const auto e1 = CliffordElement::generator(3, 0), e2 = CliffordElement::generator(3, 1);
  CHECK(e1.parity() == 1);
  CHECK((e1 * e2).parity() == 0);
  CHECK(CliffordElement(3).parity() == 0);
  CHECK(!(e1 + e1 * e2).parity().has_value());
  CHECK((e1.grade_involution() + e1).norm() == 0.0);
  CHECK(((e1 * e2).grade_involution() - e1 * e2).norm() == 0.0);
}

TEST_CASE("c(xi) squares to |xi|^2") {
  const double xi[3] = {0.3, -1.2, 2.0};
  const auto c = clifford_vector(xi);
  CHECK((c * c - CliffordElement::scalar(3, 0.09 + 1.44 + 4.0)).norm() < 1e-14);
}

TEST_CASE("wave operator matches the matrix exponential") {
  std::mt19937 rng(2024);
  std::uniform_real_distribution<double> S(-5.0, 5.0), X(-3.0, 3.0);
  double worst = 0.0;
  for (int n = 1; n <= 3; ++n)
    for (int t = 0; t < 100; ++t) {
      std::vector<double> xi(n);
      for (double& v : xi) v = X(rng);
      const double s = S(rng);
      worst = std::max(worst, matrix_gap(wave_operator(s, xi), oracle::wave(s, xi)));
    }
  CHECK(worst <= 1e-10);
}

TEST_CASE("wave operator near the origin uses the series") {
  const std::vector<double> xi{1e-9, -2e-9};
  CHECK(matrix_gap(wave_operator(0.7, xi), oracle::wave(0.7, xi)) < 1e-15);
  const std::vector<double> zero{0.0, 0.0};
  CHECK((wave_operator(0.7, zero) - CliffordElement::scalar(2, 1.0)).norm() == 0.0);
}

TEST_CASE("wave operator is unitary with a group law") {
  const std::vector<double> xi{0.4, -0.9, 1.3};
  const auto a = wave_operator(1.1, xi), b = wave_operator(-0.35, xi);
  CHECK((a * a.adjoint() - CliffordElement::scalar(3, 1.0)).norm() < 1e-14);
  CHECK((a * b - wave_operator(0.75, xi)).norm() < 1e-14);
}

TEST_CASE("orthogonal action is an automorphism") {
  Eigen::MatrixXd R(2, 2);
  const double t = 0.7;
  R << std::cos(t), -std::sin(t), std::sin(t), std::cos(t);
  std::mt19937 rng(3);
  const auto a = random_element(rng, 2), b = random_element(rng, 2);
  CHECK((orthogonal_action(R, a * b) - orthogonal_action(R, a) * orthogonal_action(R, b)).norm() < 1e-14);
  const double xi[2] = {1.0, 2.0};
  const double rxi[2] = {R(0, 0) + 2 * R(0, 1), R(1, 0) + 2 * R(1, 1)};
  CHECK((orthogonal_action(R, clifford_vector(xi)) - clifford_vector(rxi)).norm() < 1e-14);
  CHECK((orthogonal_action(-Eigen::MatrixXd::Identity(2, 2), a) - a.grade_involution()).norm() == 0.0);
}

TEST_CASE("h derivative polynomials") {
  const auto p1 = h_derivative_polys(1);
  CHECK(p1.phi == std::vector<Rational>{Rational(-1)});
  CHECK(p1.psi == std::vector<Rational>{Rational(0), Rational(1)});
  const auto p0 = h_derivative_polys(0);
  CHECK(p0.phi == std::vector<Rational>{Rational(1)});
  for (const auto& c : p0.psi) CHECK(c == Rational(0));
  // d^2/dy^2 sin(y)/y = ((2 - y^2) sin y - 2 y cos y) / y^3
  const auto p2 = h_derivative_polys(2);
  CHECK(p2.phi == std::vector<Rational>{Rational(2), Rational(0), Rational(-1)});
  CHECK(p2.psi == std::vector<Rational>{Rational(0), Rational(-2)});
}

TEST_CASE("h derivative closed forms against finite differences") {
  const double d = 1e-4;
  for (int k = 1; k <= 6; ++k)
    for (double y : {0.5, 2.0, 10.0}) {
      const double closed = evaluate_closed_form(h_derivative_polys(k), y);
      const double fd = (h_derivative(k - 1, y + d) - h_derivative(k - 1, y - d)) / (2 * d);
      CHECK(std::abs(closed - fd) <= 1e-6 * std::max(1e-3, std::abs(closed)));
    }
}

TEST_CASE("h derivative is continuous across the series switch") {
  for (int k = 0; k <= 6; ++k) {
    const double y = 0.5;
    CHECK(std::abs(h_derivative(k, y) - evaluate_closed_form(h_derivative_polys(k), y)) < 1e-12);
  }
  CHECK(h_derivative(0, 0.0) == doctest::Approx(1.0));
  CHECK(h_derivative(2, 0.0) == doctest::Approx(-1.0 / 3.0));
  CHECK_THROWS_AS(evaluate_closed_form(h_derivative_polys(1), 0.0), std::domain_error);
}

TEST_CASE("chi of c(xi) is odd and self-adjoint") {
  const auto chi = build_chi();
  QuadratureSpec q;
  const std::vector<double> xi{1.5, -0.5, 2.0}, mxi{-1.5, 0.5, -2.0};
  const auto a = chi_of_clifford(chi, xi, q), b = chi_of_clifford(chi, mxi, q);
  CHECK((a + b).norm() < 1e-14);
  const auto m = oracle::represent(a);
  CHECK((m - m.adjoint()).cwiseAbs().maxCoeff() < 1e-14);
  CHECK((a - sigma_closed_form(chi, xi)).norm() < 1e-12);
}
