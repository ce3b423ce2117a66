#include "swing/swing.hpp"

#include <stdexcept>
#include <string>

#include "swing/errors.hpp"

namespace swing {

int window_start(int horizon, PayoffHistory history) {
  if (history.empty()) return 0;
  return std::min(horizon, history.back().level + 1);
}

int StoppingStrategy::first_level(int, PayoffHistory history) const { return window_start(horizon_, history); }

TableStrategy::TableStrategy(int horizon, std::vector<std::vector<std::uint8_t>> tables)
    : StoppingStrategy(horizon), tables_(std::move(tables)) {
  const auto nodes = static_cast<std::size_t>(ScenarioTree::level_begin(horizon + 1));
  if (tables_.empty()) throw std::invalid_argument("strategy needs at least one claim");
  for (const auto& t : tables_)
    if (t.size() != nodes) throw std::invalid_argument("strategy table size does not match the tree");
}

TableStrategy TableStrategy::immediate(int horizon, int claims) {
  const auto nodes = static_cast<std::size_t>(ScenarioTree::level_begin(horizon + 1));
  return TableStrategy(horizon, std::vector<std::vector<std::uint8_t>>(static_cast<std::size_t>(claims),
                                                                       std::vector<std::uint8_t>(nodes, 1)));
}

TableStrategy TableStrategy::never(int horizon, int claims) {
  const auto nodes = static_cast<std::size_t>(ScenarioTree::level_begin(horizon + 1));
  return TableStrategy(horizon, std::vector<std::vector<std::uint8_t>>(static_cast<std::size_t>(claims),
                                                                       std::vector<std::uint8_t>(nodes, 0)));
}

bool TableStrategy::stops(int claim, PayoffHistory, NodeId node) const {
  return table(claim)[static_cast<std::size_t>(node)] != 0;
}

FixedLevelStrategy::FixedLevelStrategy(int horizon, std::vector<int> levels)
    : StoppingStrategy(horizon), levels_(std::move(levels)) {}

bool FixedLevelStrategy::stops(int claim, PayoffHistory, NodeId node) const {
  return ScenarioTree::level_of(node) >= levels_.at(static_cast<std::size_t>(claim));
}

ResolvedPlay::ResolvedPlay(int horizon, int claims, LeafId leaves)
    : horizon_(horizon), claims_(claims), leaves_(leaves),
      sigma_(static_cast<std::size_t>(leaves) * static_cast<std::size_t>(claims), horizon),
      tau_(sigma_) {}

void ResolvedPlay::set(LeafId leaf, int claim, int sigma, int tau) {
  sigma_[index(leaf, claim)] = sigma;
  tau_[index(leaf, claim)] = tau;
}

std::vector<PayoffEvent> ResolvedPlay::history(LeafId leaf) const {
  std::vector<PayoffEvent> h;
  for (int i = 0; i < claims_; ++i) h.push_back({payoff_level(leaf, i), cancelled(leaf, i)});
  return h;
}

int ResolvedPlay::paid_by(LeafId leaf, int k) const {
  int c = 0;
  for (int i = 0; i < claims_; ++i) c += payoff_level(leaf, i) <= k ? 1 : 0;
  return c;
}

int stop_level(const ScenarioTree& tree, const StoppingStrategy& strategy, int claim, PayoffHistory history,
               LeafId leaf) {
  const int n = tree.horizon();
  const int window = window_start(n, history);
  const int first = strategy.first_level(claim, history);
  if (first < window)
    throw ContractViolation("claim " + std::to_string(claim + 1) + " rule starts at level " + std::to_string(first) +
                            ", before its delay window " + std::to_string(window));
  for (int k = std::min(first, n); k < n; ++k)
    if (strategy.stops(claim, history, tree.node_on_path(leaf, k))) return k;
  return n;
}

ResolvedPlay resolve(const ScenarioTree& tree, const StoppingStrategy& seller, const StoppingStrategy& buyer) {
  const int claims = seller.claim_count();
  if (buyer.claim_count() != claims) throw std::invalid_argument("seller and buyer disagree on the claim count");
  ResolvedPlay play(tree.horizon(), claims, tree.leaf_count());
  std::vector<PayoffEvent> history;
  for (LeafId leaf = 0; leaf < tree.leaf_count(); ++leaf) {
    history.clear();
    for (int i = 0; i < claims; ++i) {
      int s = stop_level(tree, seller, i, history, leaf);
      int t = stop_level(tree, buyer, i, history, leaf);
      play.set(leaf, i, s, t);
      history.push_back({std::min(s, t), s < t});
    }
  }
  return play;
}

Rational path_payoff(const SwingContract& contract, const ResolvedPlay& play, LeafId leaf) {
  Rational total;
  for (int i = 0; i < contract.claim_count(); ++i) {
    int s = play.seller_level(leaf, i), t = play.buyer_level(leaf, i);
    total += contract.payoff_at(i, s, t, contract.tree().node_on_path(leaf, std::min(s, t)));
  }
  return total;
}

Rational game_value(const SwingContract& contract, const StoppingStrategy& seller, const StoppingStrategy& buyer,
                    Measure measure) {
  const auto& tree = contract.tree();
  ResolvedPlay play = resolve(tree, seller, buyer);
  Rational total;
  for (LeafId leaf = 0; leaf < tree.leaf_count(); ++leaf)
    total += tree.path_probability(leaf, measure) * path_payoff(contract, play, leaf);
  return total;
}

ValueStack price_swing(const SwingContract& contract, Execution exec) {
  const auto& tree = contract.tree();
  const int n = tree.horizon();
  const int claims = contract.claim_count();
  const Rational& q = tree.martingale_probability();
  ValueStack stack;
  stack.cancel.assign(1, AdaptedProcess(n));
  stack.exercise.assign(1, AdaptedProcess(n));
  stack.value.assign(1, AdaptedProcess(n));
  for (int k = 1; k <= claims; ++k) {
    const int i = claims - k;
    const AdaptedProcess& prev = stack.value[static_cast<std::size_t>(k - 1)];
    AdaptedProcess x(n), y(n);
    for (int level = 0; level <= n; ++level)
      for_each_index(ScenarioTree::level_begin(level), ScenarioTree::level_size(level), exec, [&](NodeId u) {
        // Continuation one step ahead; at the horizon all claims settle together.
        Rational cont = level < n ? expect_children(prev, u, q) : prev[u];
        x[u] = contract.cancel(i)[u] + cont;
        y[u] = contract.exercise(i)[u] + cont;
      });
    stack.value.push_back(dynkin_value(tree, x, y, Measure::martingale, exec));
    stack.cancel.push_back(std::move(x));
    stack.exercise.push_back(std::move(y));
  }
  return stack;
}

OptimalStrategies optimal_strategies(const ValueStack& stack) {
  const int claims = stack.claim_count();
  const int n = stack.value.front().horizon();
  const auto nodes = static_cast<std::size_t>(ScenarioTree::level_begin(n + 1));
  std::vector<std::vector<std::uint8_t>> seller(static_cast<std::size_t>(claims)), buyer(seller);
  for (int i = 0; i < claims; ++i) {
    const auto k = static_cast<std::size_t>(claims - i);
    seller[static_cast<std::size_t>(i)].resize(nodes);
    buyer[static_cast<std::size_t>(i)].resize(nodes);
    for (std::size_t u = 0; u < nodes; ++u) {
      auto v = static_cast<NodeId>(u);
      seller[static_cast<std::size_t>(i)][u] = stack.cancel[k][v] == stack.value[k][v];
      buyer[static_cast<std::size_t>(i)][u] = stack.exercise[k][v] == stack.value[k][v];
    }
  }
  return {TableStrategy(n, std::move(seller)), TableStrategy(n, std::move(buyer))};
}

}  // namespace swing
