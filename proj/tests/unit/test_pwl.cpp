#include <doctest.h>

#include <algorithm>

#include "support/generators.hpp"
#include "swing/oracle.hpp"
#include "swing/pwl.hpp"

using namespace swing;
using swing::testing::Rng;
using swing::testing::uniform_int;
using swing::testing::uniform_rational;

namespace {

PwlFn hinge(Rational c, Rational slope = Rational(1)) { return PwlFn::hinge(c, slope); }

// Breakpoints of both functions plus a few points between and beyond them.
std::vector<Rational> probes(const PwlFn& f, const PwlFn& g) {
  std::vector<Rational> xs = f.breakpoints();
  xs.insert(xs.end(), g.breakpoints().begin(), g.breakpoints().end());
  std::sort(xs.begin(), xs.end());
  std::vector<Rational> out = xs;
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) out.push_back((xs[i] + xs[i + 1]) / Rational(2));
  out.push_back(xs.back() + Rational(1, 3));
  out.push_back(xs.back() * Rational(3) + Rational(5));
  return out;
}

// Least minimizer over the candidate positions, found by scanning them all.
Rational least_candidate_minimizer(const PwlFn& up, const PwlFn& down, const Rational& p, const Rational& a,
                                   const Rational& b, const Rational& y) {
  const Rational lo = -y / b, hi = -y / a;
  std::vector<Rational> cands{lo, hi};
  for (const auto& x : up.breakpoints())
    if (Rational l = (x - y) / b; lo <= l && l <= hi) cands.push_back(l);
  for (const auto& x : down.breakpoints())
    if (Rational l = (x - y) / a; lo <= l && l <= hi) cands.push_back(l);
  std::sort(cands.begin(), cands.end());
  const Rational best = portfolio_candidate_min(up, down, p, a, b, y);
  for (const auto& l : cands)
    if (p * up(y + b * l) + (Rational(1) - p) * down(y + a * l) == best) return l;
  return hi;
}

}  // namespace

TEST_CASE("evaluation") {
  CHECK(PwlFn()(Rational(3)) == Rational());
  CHECK(hinge(Rational(1))(Rational(1, 2)) == Rational(1, 2));
  CHECK(hinge(Rational(1))(Rational(7)) == Rational());
  CHECK_THROWS_AS(hinge(Rational(1))(Rational(-1)), std::domain_error);
}

TEST_CASE("construction validates and canonicalizes") {
  auto f = PwlFn::from_points({Rational(), Rational(1), Rational(2), Rational(3), Rational(4)},
                              {Rational(3), Rational(2), Rational(1), Rational(), Rational()});
  CHECK(f == hinge(Rational(3)));
  CHECK(f.is_canonical_member());
  CHECK_THROWS_AS(PwlFn::from_points({Rational(), Rational(1)}, {Rational(), Rational(1)}), std::invalid_argument);
  CHECK_THROWS_AS(PwlFn::from_points({Rational(), Rational(1)}, {Rational(1), Rational(1, 2)}), std::invalid_argument);
  CHECK_THROWS_AS(PwlFn::from_points({Rational(1), Rational(2)}, {Rational(1), Rational()}), std::invalid_argument);
}

TEST_CASE("pointwise min and max") {
  auto f = hinge(Rational(1));
  CHECK(pointwise_min(f, PwlFn()) == PwlFn());
  auto half = hinge(Rational(1), Rational(1, 2));
  CHECK(pointwise_min(f, half) == half);
  auto steep = hinge(Rational(1, 2), Rational(2));
  auto m = pointwise_max(steep, half);
  CHECK(m.breakpoints() == std::vector<Rational>{Rational(), Rational(1, 3), Rational(1)});
  CHECK(m(Rational(1, 3)) == Rational(1, 3));
  CHECK(m(Rational()) == Rational(1));
}

TEST_CASE("min and max of random members stay in the class and bound both inputs") {
  Rng rng(41);
  for (int t = 0; t < 300; ++t) {
    auto f = swing::testing::random_pwl(rng), g = swing::testing::random_pwl(rng);
    auto lo = pointwise_min(f, g), hi = pointwise_max(f, g);
    CHECK(lo.is_canonical_member());
    CHECK(hi.is_canonical_member());
    for (const auto& y : probes(f, g)) {
      CHECK(lo(y) == min(f(y), g(y)));
      CHECK(hi(y) == max(f(y), g(y)));
    }
  }
}

TEST_CASE("portfolio transform examples") {
  auto z = portfolio_transform(PwlFn(), PwlFn(), Rational(1, 2), Rational(-1, 2), Rational(1));
  CHECK(z.value == PwlFn());
  CHECK(z.stock(Rational(3)) == Rational(-3));
  CHECK(z.stock(Rational()) == Rational());
  auto f = hinge(Rational(1));
  auto same = portfolio_transform(f, f, Rational(1, 2), Rational(-1, 2), Rational(1, 2));
  CHECK(same.value == f);
  auto one_sided = portfolio_transform(PwlFn(), f, Rational(1, 2), Rational(-1, 2), Rational(1));
  CHECK(one_sided.value == hinge(Rational(2, 3), Rational(3, 4)));
  CHECK(one_sided.stock(Rational(1, 2)) == Rational(-1, 2));
}

TEST_CASE("infusion transform examples") {
  auto z = infusion_transform(PwlFn(), Rational(2));
  CHECK(z.value == hinge(Rational(2)));  // pays the shortfall (A - y)^+ and nothing more
  CHECK(infusion_transform(PwlFn(), Rational()).value == PwlFn());
  CHECK(z.infusion(Rational(1, 2)) == Rational(3, 2));
  CHECK(z.infusion(Rational(5)) == Rational());
  auto f = hinge(Rational(1));
  CHECK(infusion_transform(f, Rational()).value == f);
  auto steep = hinge(Rational(1, 2), Rational(2));
  auto s = infusion_transform(steep, Rational());
  CHECK(s.value == hinge(Rational(1, 2)));
  CHECK(s.infusion(Rational(1, 8)) == Rational(3, 8));
}

TEST_CASE("infusion envelope continues below zero with slope -1") {
  auto env = InfusionEnvelope(hinge(Rational(1, 2), Rational(2)));
  CHECK(env.value(Rational(-1)) == Rational(3, 2));
  CHECK(env.amount(Rational(-1)) == Rational(3, 2));
  CHECK(env.value(Rational(1, 4)) == Rational(1, 4));
  CHECK(env.amount(Rational(1, 4)) == Rational(1, 4));
  auto shifted = env.after_payout(Rational(1));
  CHECK(shifted.value(Rational()) == env.value(Rational(-1)));
}

TEST_CASE("portfolio transform matches the candidate and grid oracles") {
  Rng rng(42);
  for (int t = 0; t < 300; ++t) {
    auto up = swing::testing::random_pwl(rng), down = swing::testing::random_pwl(rng);
    auto m = swing::testing::random_market(rng, 1);
    auto tr = portfolio_transform(up, down, m.p, m.a, m.b);
    REQUIRE(tr.value.is_canonical_member());
    const Rational lip = m.p * m.b * up.max_abs_slope() - (Rational(1) - m.p) * m.a * down.max_abs_slope();
    for (int j = 0; j < 12; ++j) {
      Rational y = swing::testing::random_wealth(rng, up.support_end() + down.support_end() + Rational(1));
      const Rational v = tr.value(y);
      CHECK(v == portfolio_candidate_min(up, down, m.p, m.a, m.b, y));
      const Rational grid = portfolio_grid_min(up, down, m.p, m.a, m.b, y, 64);
      CHECK(v <= grid);
      CHECK(grid - v <= lip * (y / m.b - y / m.a) / Rational(64));
      const Rational alpha = tr.stock(y);
      CHECK(-y / m.b <= alpha);
      CHECK(alpha <= -y / m.a);
      CHECK(alpha == least_candidate_minimizer(up, down, m.p, m.a, m.b, y));
    }
  }
}

TEST_CASE("infusion transform matches the candidate and grid oracles") {
  Rng rng(43);
  for (int t = 0; t < 300; ++t) {
    auto psi = swing::testing::random_pwl(rng);
    Rational a = uniform_rational(rng, 0, 12, 4);
    auto tr = infusion_transform(psi, a);
    REQUIRE(tr.value.is_canonical_member());
    for (int j = 0; j < 12; ++j) {
      Rational y = swing::testing::random_wealth(rng, psi.support_end() + a + Rational(1));
      const Rational v = tr.value(y);
      CHECK(v == infusion_candidate_min(psi, a, y));
      const Rational grid = infusion_grid_min(psi, a, y, 64);
      CHECK(v <= grid);
      CHECK(grid - v <= (Rational(1) + psi.max_abs_slope()) * psi(Rational()) / Rational(64));
      const Rational z = tr.infusion(y);
      CHECK(z >= positive_part(a - y));
      CHECK(z + psi(y + z - a) == v);
    }
  }
}

TEST_CASE("controls are feasible at every breakpoint and inside every segment") {
  Rng rng(44);
  for (int t = 0; t < 200; ++t) {
    auto up = swing::testing::random_pwl(rng), down = swing::testing::random_pwl(rng);
    auto m = swing::testing::random_market(rng, 1);
    auto pt = portfolio_transform(up, down, m.p, m.a, m.b);
    auto ys = pt.stock.breakpoints();
    for (std::size_t i = 0; i < ys.size(); ++i) {
      for (const Rational& y : {ys[i], i + 1 < ys.size() ? (ys[i] + ys[i + 1]) / Rational(2) : ys[i] + Rational(1)}) {
        CHECK(-y / m.b <= pt.stock(y));
        CHECK(pt.stock(y) <= -y / m.a);
      }
    }
    Rational a = uniform_rational(rng, 0, 8, 4);
    auto it = infusion_transform(up, a);
    ys = it.infusion.breakpoints();
    for (std::size_t i = 0; i < ys.size(); ++i)
      for (const Rational& y : {ys[i], i + 1 < ys.size() ? (ys[i] + ys[i + 1]) / Rational(2) : ys[i] + Rational(1)})
        CHECK(it.infusion(y) >= positive_part(a - y));
  }
}

TEST_CASE("transforms are monotone in their inputs") {
  Rng rng(45);
  for (int t = 0; t < 200; ++t) {
    auto f = swing::testing::random_pwl(rng), g = swing::testing::random_pwl(rng);
    auto f2 = pointwise_max(f, swing::testing::random_pwl(rng)), g2 = pointwise_max(g, swing::testing::random_pwl(rng));
    auto m = swing::testing::random_market(rng, 1);
    auto lo = portfolio_transform(f, g, m.p, m.a, m.b).value, hi = portfolio_transform(f2, g2, m.p, m.a, m.b).value;
    Rational a = uniform_rational(rng, 0, 8, 4);
    auto ilo = infusion_transform(f, a).value, ihi = infusion_transform(f2, a).value;
    for (const auto& y : probes(hi, ihi)) {
      CHECK(lo(y) <= hi(y));
      CHECK(ilo(y) <= ihi(y));
    }
  }
}

TEST_CASE("json round trip") {
  Rng rng(46);
  for (int t = 0; t < 50; ++t) {
    auto f = swing::testing::random_pwl(rng);
    CHECK(pwl_from_json(Json::parse(to_json(f).dump())) == f);
  }
  CHECK(to_json(hinge(Rational(1, 2))).dump() == R"([["0","1/2"],["1/2","0"]])");
}
