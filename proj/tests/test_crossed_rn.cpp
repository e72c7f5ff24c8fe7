#include <cmath>
#include <numbers>

#include "doctest.h"
#include "nct/crossed_rn.hpp"

using namespace nct;

namespace {

constexpr double kPi = std::numbers::pi;

double g2(double x, double y, double cx, double cy, double w) {
  return std::exp(-kPi * ((x - cx) * (x - cx) + (y - cy) * (y - cy)) / w);
}

RnCrossedElement sample2(const GridSpec& g, const ModeBasis& B, ActionDescriptor act, double cx, double cy) {
  return RnCrossedElement::sample(g, B, act, [&](std::span<const double> x, const Mode& m) {
    return cplx(1.0 + 0.2 * m[0], 0.1 * m[1]) * g2(x[0], x[1], cx + 0.1 * m[1], cy, 1.0);
  });
}

}  // namespace

TEST_CASE("mode bases") {
  const auto box = ModeBasis::box(2, 1);
  CHECK(box.size() == 9);
  CHECK(box.find({1, -1}) != ModeBasis::npos);
  CHECK(box.find({2, 0}) == ModeBasis::npos);
  const auto orbit = ModeBasis::orbit_closure({{1, 0}}, CyclicAction::standard(6));
  CHECK(orbit.size() == 6);
  for (const auto& m : orbit.modes()) CHECK(orbit.find(m) != ModeBasis::npos);
}

TEST_CASE("twisted convolution with trivial action is convolution") {
  const GridSpec g(2, 6.0, 0.125);
  const auto B = ModeBasis::scalar(2);
  const auto f = sample2(g, B, ActionDescriptor::trivial(), 0.3, 0.0);
  const auto h = sample2(g, B, ActionDescriptor::trivial(), -0.2, 0.4);
  const auto c = twisted_conv(f, h);
  const auto ref = convolve(f.data(), h.data());
  CHECK(max_difference(c.data(), ref) < 1e-14);
  // Gaussian oracle: e^{-pi|x-a|^2} * e^{-pi|x-b|^2} = e^{-pi|x-a-b|^2/2} / 2
  double worst = 0.0, x[2];
  for (std::size_t p = 0; p < g.size(); ++p) {
    g.point(p, x);
    worst = std::max(worst, std::abs(c.data().at(p) - 0.5 * g2(x[0], x[1], 0.1, 0.4, 2.0)));
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("twisted convolution phase on single modes") {
  // f = delta-like bump in mode m, g in mode n: the product picks up e(<Jm, n>)
  const GridSpec g(2, 6.0, 0.125);
  const ModeBasis B({{0, 0}, {1, 0}, {0, 1}, {1, 1}});
  const auto act = ActionDescriptor::translation();
  auto only = [&](Mode mode, double cx) {
    return RnCrossedElement::sample(g, B, act, [=](std::span<const double> x, const Mode& m) {
      return m == mode ? cplx(g2(x[0], x[1], cx, 0.0, 1.0)) : cplx(0.0);
    });
  };
  const auto J = DeformationMatrix::planar(0.3);
  const auto a = only({1, 0}, 0.2), b = only({0, 1}, -0.1);
  const auto undeformed = twisted_conv(a, b), deformed = twisted_conv(a, b, J);
  const std::size_t i = B.find({1, 1});
  const cplx phase = e_phase(star_exponent(J, {1, 0}, {0, 1}));
  double worst = 0.0;
  for (std::size_t p = 0; p < g.size(); ++p)
    worst = std::max(worst, std::abs(deformed.data().at(p, i) - phase * undeformed.data().at(p, i)));
  CHECK(worst < 1e-15);
}

TEST_CASE("product modes outside the basis warn") {
  const GridSpec g(1, 4.0, 0.25);
  const auto B = ModeBasis::box(1, 1);
  const auto f = RnCrossedElement::sample(g, B, ActionDescriptor::translation(),
                                          [](std::span<const double> x, const Mode&) { return cplx(std::exp(-kPi * x[0] * x[0])); });
  CHECK(!twisted_conv(f, f).warnings.empty());
}

TEST_CASE("dual action is a group action by modulation") {
  const GridSpec g(2, 4.0, 0.25);
  const auto f = sample2(g, ModeBasis::box(2, 1), ActionDescriptor::translation(), 0.0, 0.0);
  const std::vector<double> x{0.3, -0.7}, y{-0.1, 0.2}, xy{0.2, -0.5};
  CHECK(dual_action(x, dual_action(y, f)).distance(dual_action(xy, f)) < 1e-14);
}

TEST_CASE("gamma shifts on the lattice exactly") {
  const GridSpec g(2, 4.0, 0.25);
  const auto f = sample2(g, ModeBasis::scalar(2), ActionDescriptor::translation(), 0.0, 0.0);
  const std::vector<double> t{0.5, -0.25};
  const auto shifted = gamma_action(t, f);
  const auto ref = sample2(g, ModeBasis::scalar(2), ActionDescriptor::translation(), 0.5, -0.25);
  CHECK(shifted.distance(ref) < 1e-12);
  const std::vector<double> far{3.0, 0.0};
  CHECK(!gamma_action(far, f).warnings.empty());
}

TEST_CASE("Theta_J is the spectral shift") {
  const GridSpec g(2, 6.0, 0.125);
  const ModeBasis B = ModeBasis::box(2, 1);
  const auto act = ActionDescriptor::translation();
  auto make = [&](double j) {
    return RnCrossedElement::sample(g, B, act, [=](std::span<const double> x, const Mode& m) {
      // Theta_J(f)_m(x) = f_m(x + J m), J m = (j m_2, -j m_1)
      return cplx(1.0 + 0.1 * m[0], 0.2 * m[1]) * g2(x[0] + j * m[1], x[1] - j * m[0], 0.1, 0.0, 1.0);
    });
  };
  const auto f = make(0.0);
  CHECK(theta_J(f, DeformationMatrix::zero(2)).distance(f) < 1e-12);
  CHECK(theta_J(f, DeformationMatrix::planar(0.25)).distance(make(0.25)) < 1e-12);
  CHECK(theta_J(f, DeformationMatrix::planar(0.37)).distance(make(0.37)) < 1e-10);
}

TEST_CASE("Theta_J intertwines the deformed and undeformed products") {
  const GridSpec g(2, 8.0, 0.125);
  const ModeBasis B = ModeBasis::box(2, 2);
  const auto act = ActionDescriptor::translation();
  auto low = [&](double cx, double cy) {
    return RnCrossedElement::sample(g, B, act, [=](std::span<const double> x, const Mode& m) {
      if (std::abs(m[0]) + std::abs(m[1]) > 1) return cplx(0.0);
      return cplx(1.0 + 0.2 * m[0], 0.3 * m[1]) * g2(x[0], x[1], cx, cy, 1.0);
    });
  };
  const auto J = DeformationMatrix::planar(0.37);
  const auto a = low(0.3, 0.0), b = low(0.0, -0.2);
  CHECK(theta_J(twisted_conv(a, b, J), J).distance(twisted_conv(theta_J(a, J), theta_J(b, J))) < 1e-10);
}

TEST_CASE("group actions on the grid are exact for lattice maps") {
  const GridSpec g(2, 4.0, 0.25);
  const auto G = CyclicAction::standard(4);
  const auto B = ModeBasis::orbit_closure({{1, 0}, {0, 0}}, G);
  const auto f = sample2(g, B, ActionDescriptor::translation(), 0.2, -0.3);
  auto x = f;
  for (int r = 0; r < 4; ++r) x = group_action(G.generator(), x);
  CHECK(x.distance(f) == 0.0);
  const IntMatrix2 minus = -IntMatrix2::Identity();
  CHECK(group_action(minus, group_action(minus, f)).distance(f) == 0.0);
}

TEST_CASE("Takesaki-Takai map of a separable function") {
  // trivial action, F(t, s) = phi(t) psi(s): Phi(F)(s, r) = psi(s) phi_check(r - s);
  // the t step resolves |r - s| < 1/(2h), so the box is kept inside that band
  const GridSpec g(2, 3.0, 1.0 / 16);
  const auto B = ModeBasis::scalar(1);
  const DoubleCrossed F{GridFunction::sample(g, 1, AlgebraKind::Torus,
                                             [](std::span<const double> x, std::span<cplx> out) {
                                               out[0] = std::exp(-kPi * x[0] * x[0]) *
                                                        std::exp(-kPi * (x[1] - 0.5) * (x[1] - 0.5) / 2.0);
                                             }),
                        B, ActionDescriptor::trivial()};
  const auto K = takai_map(F);
  double worst = 0.0, p[2];
  for (std::size_t i = 0; i < g.size(); ++i) {
    g.point(i, p);
    const double s = p[0], r = p[1];
    const double ref = std::exp(-kPi * (s - 0.5) * (s - 0.5) / 2.0) * std::exp(-kPi * (r - s) * (r - s));
    worst = std::max(worst, std::abs(K.data.at(i) - ref));
  }
  CHECK(worst <= 1e-4);
}

TEST_CASE("Takesaki-Takai map is multiplicative") {
  const GridSpec g(2, 3.0, 0.125);
  const auto B = ModeBasis::box(1, 2);
  auto make = [&](double a, double b, double ws) {
    return DoubleCrossed{GridFunction::sample(g, B.size(), AlgebraKind::Torus,
                                              [&](std::span<const double> x, std::span<cplx> out) {
                                                for (std::size_t i = 0; i < B.size(); ++i) {
                                                  const int m = B[i][0];
                                                  out[i] = std::abs(m) > 1 ? cplx(0.0)
                                                                           : cplx(1.0 + a * m, b * m) *
                                                                                 std::exp(-kPi * ((x[0] - a) * (x[0] - a) / 0.6 +
                                                                                                  (x[1] - b) * (x[1] - b) / ws));
                                                }
                                              }),
                         B, ActionDescriptor::translation()};
  };
  const auto F = make(0.2, -0.1, 0.25), G = make(-0.3, 0.25, 0.3);
  const auto lhs = takai_map(double_crossed_mul(F, G)), rhs = kernel_compose(takai_map(F), takai_map(G));
  CHECK(max_difference(lhs.data, rhs.data) < 1e-10);
}

TEST_CASE("Takesaki-Takai map commutes with -I exactly") {
  // lattice preserving: 2 L h is an integer
  const GridSpec g(4, 2.0, 0.25);
  const auto B = ModeBasis::orbit_closure({{1, 0}, {0, 0}}, CyclicAction::standard(2));
  const DoubleCrossed F{GridFunction::sample(g, B.size(), AlgebraKind::Torus,
                                             [&](std::span<const double> x, std::span<cplx> out) {
                                               for (std::size_t i = 0; i < B.size(); ++i)
                                                 out[i] = cplx(1.0 + 0.1 * B[i][0], 0.2) *
                                                          std::exp(-kPi * (x[0] * x[0] + (x[1] - 0.2) * (x[1] - 0.2) +
                                                                           x[2] * x[2] + x[3] * x[3]));
                                             }),
                        B, ActionDescriptor::translation()};
  const IntMatrix2 minus = -IntMatrix2::Identity();
  CHECK(max_difference(kernel_group_action(minus, takai_map(F)).data, takai_map(double_group_action(minus, F)).data) <=
        1e-14);
}

TEST_CASE("Takesaki-Takai kernels are smoothing") {
  const GridSpec g(2, 3.0, 1.0 / 16);
  const DoubleCrossed F{GridFunction::sample(g, 1, AlgebraKind::Torus,
                                             [](std::span<const double> x, std::span<cplx> out) {
                                               out[0] = std::exp(-kPi * (x[0] * x[0] + x[1] * x[1]));
                                             }),
                        ModeBasis::scalar(1), ActionDescriptor::trivial()};
  const auto K = takai_map(F);
  const auto rep = decay_order(K.data, 1.0, 2.9, 1e-12 * K.data.sup_norm());
  CHECK((rep.exceeds_range || rep.order >= 4.0));
}
