#include <map>
#include <set>

#include "doctest.h"
#include "nct/orbifold_hp.hpp"

using namespace nct;

namespace {

using Cell = std::pair<int, int>;  // x = (a, b) / 12

Cell act12(const IntMatrix2& g, Cell x) {
  const auto md = [](long v) { return static_cast<int>(((v % 12) + 12) % 12); };
  return {md(static_cast<long>(g(0, 0)) * x.first + static_cast<long>(g(0, 1)) * x.second),
          md(static_cast<long>(g(1, 0)) * x.first + static_cast<long>(g(1, 1)) * x.second)};
}

std::set<Cell> fixed12(const IntMatrix2& g) {
  std::set<Cell> out;
  for (int a = 0; a < 12; ++a)
    for (int b = 0; b < 12; ++b)
      if (act12(g, {a, b}) == Cell{a, b}) out.insert({a, b});
  return out;
}

long orbits12(const CyclicAction& G, const std::set<Cell>& pts) {
  std::set<Cell> seen;
  long n = 0;
  for (const auto& p : pts) {
    if (seen.count(p)) continue;
    ++n;
    for (int r = 0; r < G.order(); ++r) seen.insert(act12(G.element(r), p));
  }
  return n;
}

}  // namespace

TEST_CASE("fixed points agree with a lattice enumeration") {
  for (int k : {2, 3, 4, 6}) {
    const auto G = CyclicAction::standard(k);
    for (int r = 1; r < k; ++r) {
      const auto fp = fixed_points(G, r);
      const auto ref = fixed12(G.element(r));
      CHECK(fp.count == static_cast<long>(ref.size()));
      std::set<Cell> got;
      for (const auto& x : fp.points) {
        REQUIRE((x[0] * Rational(12)).denominator() == 1);
        got.insert({static_cast<int>((x[0] * Rational(12)).numerator()),
                    static_cast<int>((x[1] * Rational(12)).numerator())});
      }
      CHECK(got == ref);
    }
  }
  CHECK_THROWS(fixed_points(CyclicAction::standard(2), 0));
}

TEST_CASE("orbit counts agree with the lattice enumeration") {
  for (int k : {2, 3, 4, 6}) {
    const auto G = CyclicAction::standard(k);
    const auto d = hp_dimensions(G);
    REQUIRE(d.strata.size() == static_cast<std::size_t>(k - 1));
    long even = 2;
    for (const auto& s : d.strata) {
      const long o = orbits12(G, fixed12(G.element(s.element)));
      CHECK(s.orbits == o);
      even += o;
    }
    CHECK(d.even == even);
  }
}

TEST_CASE("periodic cyclic homology and K ranks") {
  const std::map<int, std::pair<long, long>> expected{{1, {2, 2}}, {2, {6, 0}}, {3, {8, 0}}, {4, {9, 0}}, {6, {10, 0}}};
  for (const auto& [k, dims] : expected) {
    const auto G = CyclicAction::standard(k);
    const auto hp = hp_dimensions(G);
    CHECK(hp.even == dims.first);
    CHECK(hp.odd == dims.second);
    const auto K = k_ranks(G);
    CHECK(K.k0 == dims.first);
    CHECK(K.k1 == dims.second);
    CHECK(orbifold_euler(G) == Rational(dims.first - dims.second));
  }
}

TEST_CASE("torus action reduces into the unit square") {
  const IntMatrix2 g = CyclicAction::standard(6).generator();
  const TorusPoint x{Rational(1, 3), Rational(2, 3)};
  const auto y = act_on_torus(g, x);
  for (const auto& c : y) {
    CHECK(c >= Rational(0));
    CHECK(c < Rational(1));
  }
  TorusPoint z = x;
  for (int r = 0; r < 6; ++r) z = act_on_torus(g, z);
  CHECK(z == x);
}

TEST_CASE("ranks do not depend on theta") {
  const std::vector<double> thetas{0.0, 0.1, 0.25, 0.7071067811865476, 0.9};
  for (int k : {2, 3, 4, 6}) {
    const auto rep = theta_independence_regression(thetas, CyclicAction::standard(k));
    CHECK(rep.constant);
    REQUIRE(rep.rows.size() == thetas.size());
    for (const auto& row : rep.rows) {
      CHECK(row.beta_defect == 0.0);
      CHECK(std::abs(row.idempotent_trace - std::complex<double>(1.0 / k)) < 1e-15);
    }
  }
}
