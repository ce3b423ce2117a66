#include "swing/dynkin.hpp"

#include <stdexcept>

namespace swing {

StoppingTime::StoppingTime(int horizon, int start, bool stop_everywhere)
    : horizon_(horizon), start_(start),
      stop_(static_cast<std::size_t>(ScenarioTree::level_begin(horizon + 1)), stop_everywhere ? 1 : 0) {
  if (start < 0 || start > horizon) throw std::out_of_range("stopping time start outside [0, N]");
}

bool StoppingTime::stops_at(NodeId v) const {
  int k = ScenarioTree::level_of(v);
  return k >= start_ && (k == horizon_ || flag(v));
}

int StoppingTime::stop_level(const ScenarioTree& tree, LeafId leaf) const {
  for (int k = start_; k < horizon_; ++k)
    if (flag(tree.node_on_path(leaf, k))) return k;
  return horizon_;
}

namespace {

void check_shapes(const ScenarioTree& tree, const AdaptedProcess& x, const AdaptedProcess& y) {
  if (x.horizon() != tree.horizon() || y.horizon() != tree.horizon())
    throw std::invalid_argument("payoff process horizon does not match the tree");
}

Rational dynkin_step(const Rational& x, const Rational& y, const Rational& continuation) {
  if (y > x) return y;
  return min(x, max(y, continuation));
}

}  // namespace

AdaptedProcess dynkin_value(const ScenarioTree& tree, const AdaptedProcess& cancel, const AdaptedProcess& exercise,
                            Measure measure, Execution exec) {
  check_shapes(tree, cancel, exercise);
  const int n = tree.horizon();
  const Rational& q = tree.probability(measure);
  AdaptedProcess v(n);
  for (NodeId u = ScenarioTree::level_begin(n); u < tree.node_count(); ++u) v[u] = exercise[u];
  for (int k = n - 1; k >= 0; --k)
    for_each_index(ScenarioTree::level_begin(k), ScenarioTree::level_size(k), exec, [&](NodeId u) {
      v[u] = dynkin_step(cancel[u], exercise[u], expect_children(v, u, q));
    });
  return v;
}

DynkinSolution solve_dynkin(const ScenarioTree& tree, const AdaptedProcess& cancel, const AdaptedProcess& exercise,
                            Measure measure, int start_level, Execution exec) {
  DynkinSolution sol{dynkin_value(tree, cancel, exercise, measure, exec),
                     StoppingTime(tree.horizon(), start_level), StoppingTime(tree.horizon(), start_level)};
  for (NodeId u = 0; u < tree.node_count(); ++u) {
    sol.seller_stop.set(u, cancel[u] <= sol.value[u]);
    sol.buyer_stop.set(u, exercise[u] == sol.value[u]);
  }
  return sol;
}

Rational evaluate_game(const ScenarioTree& tree, const AdaptedProcess& cancel, const AdaptedProcess& exercise,
                       const StoppingTime& sigma, const StoppingTime& tau, Measure measure) {
  check_shapes(tree, cancel, exercise);
  Rational total;
  for (LeafId leaf = 0; leaf < tree.leaf_count(); ++leaf) {
    int s = sigma.stop_level(tree, leaf), t = tau.stop_level(tree, leaf);
    NodeId u = tree.node_on_path(leaf, std::min(s, t));
    total += tree.path_probability(leaf, measure) * (s < t ? cancel[u] : exercise[u]);
  }
  return total;
}

StoppedProcessReport check_stopped_processes(const ScenarioTree& tree, const DynkinSolution& sol, Measure measure) {
  StoppedProcessReport report;
  const Rational& q = tree.probability(measure);
  const int start = sol.seller_stop.start();
  auto note = [&](bool& flag, NodeId u) {
    flag = false;
    if (!report.first_violation) report.first_violation = u;
  };
  // Whether the time has already stopped strictly before reaching u.
  auto stopped_before = [&](const StoppingTime& t, NodeId u) {
    for (int k = start; k < ScenarioTree::level_of(u); ++k)
      if (t.stops_at(ScenarioTree::ancestor(u, k))) return true;
    return false;
  };
  for (int k = start; k < tree.horizon(); ++k) {
    for (NodeId u = ScenarioTree::level_begin(k); u < ScenarioTree::level_begin(k + 1); ++u) {
      bool seller_live = !stopped_before(sol.seller_stop, u) && !sol.seller_stop.stops_at(u);
      bool buyer_live = !stopped_before(sol.buyer_stop, u) && !sol.buyer_stop.stops_at(u);
      // A stopped process is frozen, so its one-step increment vanishes.
      if (!seller_live && !buyer_live) continue;
      Rational next = expect_children(sol.value, u, q);
      if (seller_live && next > sol.value[u]) note(report.supermartingale, u);
      if (buyer_live && next < sol.value[u]) note(report.submartingale, u);
      if (seller_live && buyer_live && next != sol.value[u]) note(report.martingale, u);
    }
  }
  return report;
}

}  // namespace swing
