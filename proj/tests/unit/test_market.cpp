#include <doctest.h>

#include "support/generators.hpp"
#include "swing/errors.hpp"
#include "swing/json.hpp"
#include "swing/market.hpp"

using namespace swing;
using swing::testing::Rng;

namespace {

MarketParams params(Rational a, Rational b, int n) {
  MarketParams m;
  m.a = std::move(a);
  m.b = std::move(b);
  m.p = Rational(1, 2);
  m.horizon = n;
  return m;
}

}  // namespace

TEST_CASE("rational stays in lowest terms with positive denominator") {
  Rational r(6, -4);
  CHECK(r.numerator() == "-3");
  CHECK(r.denominator() == "2");
  CHECK(r.str() == "-3/2");
  CHECK(Rational(8, 4).str() == "2");
  CHECK(Rational::parse("-12/18") == Rational(-2, 3));
  CHECK(Rational::parse("0.125") == Rational(1, 8));
  CHECK(Rational::parse("-.5") == Rational(-1, 2));
  CHECK(Rational::parse("7") == Rational(7));
  CHECK(Rational::parse("010/08") == Rational(5, 4));  // leading zeros are decimal
  CHECK_THROWS_AS(Rational::parse("1/0"), std::invalid_argument);
  CHECK_THROWS_AS(Rational::parse("1/-2"), std::invalid_argument);
  CHECK_THROWS_AS(Rational::parse("abc"), std::invalid_argument);
  CHECK_THROWS_AS(Rational(1) / Rational(), std::domain_error);
}

TEST_CASE("decimal rendering rounds half away from zero") {
  CHECK(Rational(2, 3).decimal(4) == "0.6667");
  CHECK(Rational(-1, 8).decimal(2) == "-0.13");
  CHECK(Rational(5).decimal(0) == "5");
}

TEST_CASE("martingale probability of the worked parameter sets") {
  CHECK(martingale_prob(Rational(-1, 2), Rational(1)) == Rational(1, 3));
  CHECK(martingale_prob(Rational(-1, 2), Rational(1, 2)) == Rational(1, 2));
  CHECK(martingale_prob(Rational(-1, 4), Rational(3, 4)) == Rational(1, 4));
  CHECK_THROWS_AS(martingale_prob(Rational(1, 2), Rational(1)), SpecError);
  CHECK_THROWS_AS(martingale_prob(Rational(-1), Rational(1)), SpecError);
}

TEST_CASE("martingale probability lies strictly inside (0, 1) and centres the returns") {
  Rng rng(101);
  for (int t = 0; t < 500; ++t) {
    Rational a(-swing::testing::uniform_int(rng, 1, 99), 100);
    Rational b(swing::testing::uniform_int(rng, 1, 500), swing::testing::uniform_int(rng, 1, 100));
    Rational q = martingale_prob(a, b);
    CHECK(q > Rational());
    CHECK(q < Rational(1));
    CHECK(q * b + (Rational(1) - q) * a == Rational());
  }
}

TEST_CASE("tree prices and shape") {
  ScenarioTree t2(params(Rational(-1, 2), Rational(1), 2));
  CHECK(t2.node_count() == 7);
  CHECK(t2.price(3) == Rational(4));
  CHECK(t2.price(4) == Rational(1));
  CHECK(t2.price(5) == Rational(1));
  CHECK(t2.price(6) == Rational(1, 4));
  ScenarioTree t1(params(Rational(-1, 2), Rational(1), 1));
  CHECK(t1.node_count() == 3);
  CHECK(t1.price(1) == Rational(2));
  CHECK(t1.price(2) == Rational(1, 2));
  CHECK(t1.martingale_probability() == Rational(1, 3));
}

TEST_CASE("paths, leaves and ancestors agree") {
  ScenarioTree t(params(Rational(-1, 3), Rational(1, 2), 4));
  for (LeafId leaf = 0; leaf < t.leaf_count(); ++leaf) {
    const std::string bits = t.path_bits(leaf);
    REQUIRE(bits.size() == 4);
    for (int k = 1; k <= 4; ++k) {
      NodeId v = t.node_on_path(leaf, k);
      CHECK(ScenarioTree::level_of(v) == k);
      CHECK(ScenarioTree::parent(v) == t.node_on_path(leaf, k - 1));
      CHECK(ScenarioTree::is_up_child(v) == (bits[static_cast<std::size_t>(k - 1)] == '1'));
      CHECK(ScenarioTree::ancestor(t.node_on_path(leaf, 4), k) == v);
      CHECK(t.first_leaf(v) <= leaf);
      CHECK(leaf < t.first_leaf(v) + t.leaves_below(v));
    }
  }
  Rational total;
  for (LeafId leaf = 0; leaf < t.leaf_count(); ++leaf) total += t.path_probability(leaf, Measure::market);
  CHECK(total == Rational(1));
}

TEST_CASE("one-step expectation examples") {
  ScenarioTree t(params(Rational(-1, 2), Rational(1), 2));
  AdaptedProcess c(2, Rational(7, 3));
  auto e = one_step_expectation(t, c, 1, Measure::martingale);
  CHECK(e[1] == Rational(7, 3));
  CHECK(e[2] == Rational(7, 3));
  AdaptedProcess f(2);
  f[1] = 3;
  f[2] = 0;
  CHECK(one_step_expectation(t, f, 0, Measure::martingale)[0] == Rational(1));
  CHECK(one_step_expectation(t, f, 0, Measure::market)[0] == Rational(3, 2));
  CHECK_THROWS_AS(one_step_expectation(t, f, 2, Measure::market), std::out_of_range);
  CHECK_THROWS_AS(one_step_expectation(t, f, -1, Measure::market), std::out_of_range);
}

TEST_CASE("the stock is a martingale under the martingale measure") {
  Rng rng(202);
  for (int t = 0; t < 60; ++t) {
    auto m = swing::testing::random_market(rng, swing::testing::uniform_int(rng, 1, 6));
    ScenarioTree tree(m);
    auto s = stock_process(tree);
    for (int k = 0; k < m.horizon; ++k) {
      auto e = one_step_expectation(tree, s, k, Measure::martingale, t % 2 ? Execution::serial : Execution::parallel);
      for (NodeId v = ScenarioTree::level_begin(k); v < ScenarioTree::level_begin(k + 1); ++v) CHECK(e[v] == s[v]);
    }
  }
}

TEST_CASE("rebuilding a tree from its serialized parameters is identical") {
  Rng rng(303);
  for (int t = 0; t < 20; ++t) {
    auto m = swing::testing::random_market(rng, swing::testing::uniform_int(rng, 1, 5));
    ScenarioTree a(m);
    ScenarioTree b(market_from_json(Json::parse(to_json(m).dump())));
    CHECK(stock_process(a) == stock_process(b));
    CHECK(a.martingale_probability() == b.martingale_probability());
  }
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(ScenarioTree(params(Rational(-1), Rational(1), 2)), SpecError);
  CHECK_THROWS_AS(ScenarioTree(params(Rational(-1, 2), Rational(), 2)), SpecError);
  CHECK_THROWS_AS(ScenarioTree(params(Rational(-1, 2), Rational(1), 0)), SpecError);
  auto m = params(Rational(-1, 2), Rational(1), 2);
  m.p = Rational(1);
  CHECK_THROWS_AS(ScenarioTree{m}, SpecError);
  m.p = Rational(1, 2);
  m.s0 = Rational();
  CHECK_THROWS_AS(ScenarioTree{m}, SpecError);
  CHECK_THROWS_AS(market_from_json(Json::parse(R"({"S0":"1","a":"-1/2","b":"1","p":"1/2"})")), SpecError);
}
