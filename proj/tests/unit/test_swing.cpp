#include <doctest.h>

#include "support/generators.hpp"
#include "swing/errors.hpp"
#include "swing/oracle.hpp"
#include "swing/swing.hpp"

using namespace swing;
using swing::testing::Rng;

namespace {

std::shared_ptr<const ScenarioTree> tree(int n) {
  MarketParams m;
  m.a = Rational(-1, 2);
  m.b = 1;
  m.p = Rational(1, 2);
  m.horizon = n;
  return std::make_shared<const ScenarioTree>(m);
}

SwingContract contract_a() {
  ClaimSpec c;
  c.exercise.strike = 1;
  c.penalty.value = Rational(1, 10);
  return build_contract({c}, tree(1));
}

SwingContract contract_b() {
  ClaimSpec c;
  c.exercise.strike = 1;
  c.penalty.kind = PenaltySpec::Kind::infinite;
  return build_contract({c, c}, tree(2));
}

// Starts every claim at level 0 regardless of the window.
class Eager : public StoppingStrategy {
 public:
  explicit Eager(int horizon) : StoppingStrategy(horizon) {}
  int claim_count() const override { return 2; }
  int first_level(int, PayoffHistory) const override { return 0; }
  bool stops(int, PayoffHistory, NodeId) const override { return true; }
};

}  // namespace

TEST_CASE("worked prices agree with both exhaustive oracles") {
  auto a = contract_a();
  auto b = contract_b();
  CHECK(brute_force_value(a).upper == Rational(1, 10));
  CHECK(exhaustive_value(a).lower == Rational(1, 10));
  CHECK(brute_force_value(b).upper == Rational(2, 3));
  CHECK(brute_force_value(b).lower == Rational(2, 3));
  CHECK(exhaustive_value(b).upper == Rational(2, 3));
  CHECK(exhaustive_value(b).lower == Rational(2, 3));
  CHECK(price_swing(a).price() == Rational(1, 10));
  CHECK(price_swing(b).price() == Rational(2, 3));
  CHECK(price_swing(zero_contract(tree(3), 3)).price() == Rational());
}

TEST_CASE("optimal strategies of the worked contracts") {
  auto b = contract_b();
  auto sb = price_swing(b);
  CHECK(sb.exercise[2][0] == Rational(1, 3));
  CHECK(sb.value[2][0] == Rational(2, 3));
  auto ob = optimal_strategies(sb);
  CHECK_FALSE(ob.buyer.stops(0, {}, 0));

  auto a = contract_a();
  auto oa = optimal_strategies(price_swing(a));
  CHECK(oa.seller.stops(0, {}, 0));

  auto z = optimal_strategies(price_swing(zero_contract(tree(2), 2)));
  CHECK(z.seller.stops(0, {}, 0));
  CHECK(z.buyer.stops(0, {}, 0));
}

TEST_CASE("resolution of simple plays") {
  auto t = tree(2);
  auto now = TableStrategy::immediate(2, 2);
  auto play = resolve(*t, now, now);
  for (LeafId leaf = 0; leaf < t->leaf_count(); ++leaf) {
    CHECK(play.payoff_level(leaf, 0) == 0);
    CHECK(play.payoff_level(leaf, 1) == 1);
    CHECK(play.paid_by(leaf, 0) == 1);
    CHECK(play.paid_by(leaf, 1) == 2);
  }
  auto one = TableStrategy::immediate(2, 1);
  auto late = TableStrategy::never(2, 1);
  auto single = resolve(*t, one, late);
  for (LeafId leaf = 0; leaf < t->leaf_count(); ++leaf) {
    CHECK(single.seller_level(leaf, 0) == 0);
    CHECK(single.buyer_level(leaf, 0) == 2);
    CHECK(single.cancelled(leaf, 0));
  }
  CHECK_THROWS_AS(resolve(*t, Eager(2), now), ContractViolation);
}

TEST_CASE("game values of the worked contracts") {
  auto b = contract_b();
  auto opt = optimal_strategies(price_swing(b));
  CHECK(game_value(b, opt.seller, opt.buyer) == Rational(2, 3));
  auto play = resolve(b.tree(), opt.seller, opt.buyer);
  for (LeafId leaf = 0; leaf < b.tree().leaf_count(); ++leaf) CHECK(play.paid_by(leaf, 2) == 2);
  CHECK(game_value(b, opt.seller, TableStrategy::immediate(2, 2)) == Rational(1, 3));
  auto z = zero_contract(tree(2), 2);
  CHECK(game_value(z, TableStrategy::never(2, 2), TableStrategy::immediate(2, 2)) == Rational());
}

TEST_CASE("value stack invariants") {
  Rng rng(707);
  for (int t = 0; t < 40; ++t) {
    auto c = swing::testing::random_contract(rng, 5, 3);
    auto st = price_swing(c, t % 2 ? Execution::serial : Execution::parallel);
    const int l = c.claim_count();
    const int n = c.horizon();
    for (int k = 1; k <= l; ++k) {
      const int claim = l - k;
      for (NodeId v = 0; v < c.tree().node_count(); ++v) {
        CHECK(st.exercise[k][v] <= st.value[k][v]);
        CHECK(st.value[k][v] <= st.cancel[k][v]);
        CHECK(st.cancel[k][v] - st.exercise[k][v] == c.cancel(claim)[v] - c.exercise(claim)[v]);
      }
      for (NodeId v = ScenarioTree::level_begin(n); v < c.tree().node_count(); ++v)
        CHECK(st.value[k][v] == c.terminal_bundle(claim, v));
    }
  }
}

TEST_CASE("single claim price is the Dynkin value") {
  Rng rng(808);
  for (int t = 0; t < 30; ++t) {
    auto c = swing::testing::random_contract(rng, 5, 1);
    CHECK(price_swing(c).price() ==
          dynkin_value(c.tree(), c.cancel(0), c.exercise(0), Measure::martingale)[0]);
  }
}

TEST_CASE("duplicating a claim never lowers the price") {
  Rng rng(909);
  for (int t = 0; t < 30; ++t) {
    auto base = swing::testing::random_contract(rng, 4, 1);
    std::vector<ClaimPayoffs> claims{base.claim(0)};
    Rational last = price_swing(base).price();
    for (int l = 2; l <= 3; ++l) {
      claims.push_back(base.claim(0));
      Rational next = price_swing(SwingContract(base.tree_ptr(), claims)).price();
      CHECK(last <= next);
      last = next;
    }
  }
}

TEST_CASE("price matches the stage oracle and the optimal pair is a saddle") {
  Rng rng(1001);
  for (int t = 0; t < 25; ++t) {
    auto c = swing::testing::random_contract(rng, 3, 2);
    auto st = price_swing(c);
    auto bf = brute_force_value(c);
    CHECK(bf.upper == st.price());
    CHECK(bf.lower == st.price());
    auto opt = optimal_strategies(st);
    CHECK(game_value(c, opt.seller, opt.buyer) == st.price());
    CHECK(certify_saddle(c, opt.seller, opt.buyer).holds);
  }
}

TEST_CASE("serial and parallel pricing agree") {
  Rng rng(1102);
  for (int t = 0; t < 5; ++t) {
    auto c = swing::testing::random_contract(rng, 8, 3);
    auto a = price_swing(c, Execution::serial);
    auto b = price_swing(c, Execution::parallel);
    CHECK(a.value == b.value);
  }
}
