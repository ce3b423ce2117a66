#include <doctest.h>

#include "support/generators.hpp"
#include "swing/dynkin.hpp"
#include "swing/oracle.hpp"

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

SwingContract call(int n, PenaltySpec penalty) {
  ClaimSpec c;
  c.exercise.strike = 1;
  c.penalty = penalty;
  return build_contract({c}, tree(n));
}

PenaltySpec constant(Rational v) {
  PenaltySpec p;
  p.value = std::move(v);
  return p;
}

PenaltySpec infinite() {
  PenaltySpec p;
  p.kind = PenaltySpec::Kind::infinite;
  return p;
}

}  // namespace

TEST_CASE("contract A game: cancel at once for 1/10") {
  auto c = call(1, constant(Rational(1, 10)));
  auto sol = solve_dynkin(c.tree(), c.cancel(0), c.exercise(0), Measure::martingale);
  CHECK(sol.value[0] == Rational(1, 10));
  CHECK(sol.seller_stop.stops_at(0));
  CHECK_FALSE(sol.buyer_stop.stops_at(0));
  CHECK(sol.value[1] == Rational(1));
  CHECK(sol.value[2] == Rational());
}

TEST_CASE("zero game") {
  auto t = tree(3);
  AdaptedProcess z(3);
  auto sol = solve_dynkin(*t, z, z, Measure::martingale);
  CHECK(sol.value == z);
  CHECK(sol.seller_stop.stops_at(0));
  CHECK(sol.buyer_stop.stops_at(0));
}

TEST_CASE("american call over two periods is worth 1/3 and matches the best of the five buyer times") {
  auto c = call(2, infinite());
  auto sol = solve_dynkin(c.tree(), c.cancel(0), c.exercise(0), Measure::martingale);
  CHECK(sol.value[0] == Rational(1, 3));
  auto times = enumerate_stopping_times(c.tree(), 0);
  REQUIRE(times.size() == 5);
  StoppingTime never(2, 0);
  Rational best;
  for (const auto& tau : times)
    best = max(best, evaluate_game(c.tree(), c.cancel(0), c.exercise(0), never, tau, Measure::martingale));
  CHECK(best == Rational(1, 3));
}

TEST_CASE("game evaluation examples") {
  auto c = call(1, constant(Rational(1, 10)));
  const auto& t = c.tree();
  StoppingTime now(1, 0, true), never(1, 0);
  CHECK(evaluate_game(t, c.cancel(0), c.exercise(0), now, now, Measure::martingale) == c.exercise(0)[0]);
  CHECK(evaluate_game(t, c.cancel(0), c.exercise(0), never, never, Measure::martingale) == Rational(1, 3));
  CHECK(evaluate_game(t, c.cancel(0), c.exercise(0), now, never, Measure::martingale) == Rational(1, 10));
}

TEST_CASE("exercise above cancellation pays the exercise value") {
  auto t = tree(1);
  AdaptedProcess x(1), y(1);
  y[0] = 2;
  x[0] = 1;
  y[1] = 5;
  auto v = dynkin_value(*t, x, y, Measure::martingale);
  CHECK(v[0] == Rational(2));
  x[0] = 3;
  v = dynkin_value(*t, x, y, Measure::martingale);
  CHECK(v[0] == Rational(2));  // max(2, 5/3) under p~ = 1/3
}

TEST_CASE("saddle point of the single game against every stopping time") {
  Rng rng(404);
  for (int t = 0; t < 40; ++t) {
    auto c = swing::testing::random_contract(rng, 4, 1);
    const auto& tr = c.tree();
    const int start = swing::testing::uniform_int(rng, 0, tr.horizon());
    auto sol = solve_dynkin(tr, c.cancel(0), c.exercise(0), Measure::martingale, start);
    auto times = enumerate_stopping_times(tr, start);
    const Rational value = [&] {
      Rational v;
      for (NodeId u = ScenarioTree::level_begin(start); u < ScenarioTree::level_begin(start + 1); ++u)
        v += tr.node_probability(u, Measure::martingale) * sol.value[u];
      return v;
    }();
    for (const auto& tau : times) {
      CHECK(evaluate_game(tr, c.cancel(0), c.exercise(0), sol.seller_stop, tau, Measure::martingale) <= value);
      CHECK(value <= evaluate_game(tr, c.cancel(0), c.exercise(0), tau, sol.buyer_stop, Measure::martingale));
    }
    CHECK(evaluate_game(tr, c.cancel(0), c.exercise(0), sol.seller_stop, sol.buyer_stop, Measure::martingale) == value);
  }
}

TEST_CASE("value lies between the payoffs and stopped processes are (super/sub)martingales") {
  Rng rng(505);
  for (int t = 0; t < 60; ++t) {
    auto c = swing::testing::random_contract(rng, 5, 1);
    const auto m = t % 2 ? Measure::market : Measure::martingale;
    auto sol = solve_dynkin(c.tree(), c.cancel(0), c.exercise(0), m);
    for (NodeId v = 0; v < c.tree().node_count(); ++v) {
      CHECK(c.exercise(0)[v] <= sol.value[v]);
      CHECK(sol.value[v] <= c.cancel(0)[v]);
    }
    for (NodeId v = ScenarioTree::level_begin(c.horizon()); v < c.tree().node_count(); ++v)
      CHECK(sol.value[v] == c.exercise(0)[v]);
    CHECK(check_stopped_processes(c.tree(), sol, m).holds());
  }
}

TEST_CASE("a wrong value process fails the stopped-process check") {
  auto c = call(2, infinite());
  auto sol = solve_dynkin(c.tree(), c.cancel(0), c.exercise(0), Measure::martingale);
  sol.value[1] += Rational(1, 100);  // both players are still in the game at the root
  auto report = check_stopped_processes(c.tree(), sol, Measure::martingale);
  CHECK_FALSE(report.holds());
  CHECK(report.first_violation.has_value());
}

TEST_CASE("serial and parallel kernels agree") {
  Rng rng(606);
  for (int t = 0; t < 10; ++t) {
    auto c = swing::testing::random_contract(rng, 8, 1);
    auto a = dynkin_value(c.tree(), c.cancel(0), c.exercise(0), Measure::martingale, Execution::serial);
    auto b = dynkin_value(c.tree(), c.cancel(0), c.exercise(0), Measure::martingale, Execution::parallel);
    CHECK(a == b);
  }
}
