#include "swing/shortfall.hpp"

#include <functional>

#include "swing/errors.hpp"
#include "swing/oracle.hpp"

namespace swing {

Rational infusion_due(const SwingContract& contract, const InfusionRule& rule, NodeId node, int claim,
                      const Rational& wealth) {
  if (ScenarioTree::level_of(node) == contract.horizon())
    return positive_part(contract.terminal_bundle(claim + 1, node) - wealth);
  const Rational floor = positive_part(-wealth);
  if (claim + 1 == contract.claim_count()) return floor;
  Rational z = rule.amount(node, claim, wealth);
  if (z < floor)
    throw ContractViolation("infusion " + z.str() + " after claim " + std::to_string(claim + 1) + " at node " +
                            std::to_string(node) + " does not cover the deficit " + floor.str());
  return z;
}

RiskStack risk_recursion(const SwingContract& contract, Execution exec) {
  return risk_recursion(contract, contract.tree().params().p, exec);
}

RiskStack risk_recursion(const SwingContract& contract, const Rational& p, Execution exec) {
  if (!(p.sign() > 0 && p < Rational(1))) throw SpecError("market probability must lie in (0, 1)");
  RiskStack stack(contract, p);
  const auto& tree = contract.tree();
  const auto& m = tree.params();
  const int n = tree.horizon();
  const int claims = contract.claim_count();
  const auto slots = static_cast<std::size_t>(claims + 1);
  stack.cells_.resize(static_cast<std::size_t>(tree.node_count()));
  for (NodeId v = ScenarioTree::level_begin(n); v < tree.node_count(); ++v) {
    auto& c = stack.cells_[static_cast<std::size_t>(v)];
    c.value.resize(slots);
    for (int r = 1; r <= claims; ++r) c.value[static_cast<std::size_t>(r)] = PwlFn::hinge(contract.terminal_bundle(claims - r, v));
  }
  for (int k = n - 1; k >= 0; --k) {
    for_each_index(ScenarioTree::level_begin(k), ScenarioTree::level_size(k), exec, [&](NodeId v) {
      auto& c = stack.cells_[static_cast<std::size_t>(v)];
      const auto& hi = stack.cells_[static_cast<std::size_t>(ScenarioTree::up(v))];
      const auto& lo = stack.cells_[static_cast<std::size_t>(ScenarioTree::down(v))];
      c.value.resize(slots);
      c.cancel.resize(slots);
      c.exercise.resize(slots);
      c.carry.resize(slots);
      c.stock.resize(slots);
      for (std::size_t r = 0; r < slots; ++r) {
        auto t = portfolio_transform(hi.value[r], lo.value[r], p, m.a, m.b);
        c.carry[r] = std::move(t.value);
        c.stock[r] = std::move(t.stock);
      }
      for (std::size_t r = 0; r + 1 < slots; ++r) c.envelope.emplace_back(c.carry[r]);
      for (int r = 1; r <= claims; ++r) {
        const int i = claims - r;
        const auto ri = static_cast<std::size_t>(r);
        const auto& env = c.envelope[ri - 1];
        c.cancel[ri] = env.after_payout(contract.cancel(i)[v]).value;
        c.exercise[ri] = env.after_payout(contract.exercise(i)[v]).value;
        c.value[ri] = pointwise_min(c.cancel[ri], pointwise_max(c.exercise[ri], c.carry[ri]));
      }
    });
  }
  return stack;
}

Rational shortfall_risk(const RiskStack& stack, const Rational& capital) {
  if (capital.sign() < 0) throw std::domain_error("capital must be nonnegative");
  return stack.value(0, stack.claim_count())(capital);
}

Rational RiskPortfolio::units(NodeId node, int claim, const Rational& wealth) const {
  return stack_->stock_control(node, stack_->claim_count() - claim)(wealth) /
         stack_->contract().tree().price(node);
}

Rational RiskInfusion::amount(NodeId node, int claim, const Rational& wealth) const {
  return stack_->envelope(node, stack_->claim_count() - claim - 1).amount(wealth);
}

Rational wealth_at(const SwingContract& contract, const PortfolioStrategy& portfolio, const InfusionRule& infusion,
                   PayoffHistory history, NodeId node) {
  const auto& tree = contract.tree();
  const int target = ScenarioTree::level_of(node);
  Rational w = portfolio.initial_capital();
  std::size_t paid = 0;
  for (int k = 0; k < target; ++k) {
    const NodeId here = ScenarioTree::ancestor(node, k);
    if (paid < history.size() && history[paid].level == k) {
      const int i = static_cast<int>(paid);
      Rational y = w - (history[paid].cancelled ? contract.cancel(i)[here] : contract.exercise(i)[here]);
      w = y + infusion_due(contract, infusion, here, i, y);
      ++paid;
    }
    if (static_cast<int>(paid) < contract.claim_count()) {
      const NodeId next = ScenarioTree::ancestor(node, k + 1);
      w += portfolio.units(here, static_cast<int>(paid), w) * (tree.price(next) - tree.price(here));
    }
  }
  return w;
}

WealthStopping::WealthStopping(std::shared_ptr<const RiskStack> stack, RiskPortfolio portfolio, RiskInfusion infusion,
                               Role role)
    : StoppingStrategy(stack->contract().horizon()), stack_(std::move(stack)), portfolio_(std::move(portfolio)),
      infusion_(std::move(infusion)), role_(role) {}

bool WealthStopping::stops(int claim, PayoffHistory history, NodeId node) const {
  if (ScenarioTree::level_of(node) == horizon_) return true;
  const Rational w = wealth_at(stack_->contract(), portfolio_, infusion_, history, node);
  const int r = stack_->claim_count() - claim;
  const Rational j = stack_->value(node, r)(w);
  return role_ == Role::seller ? j == stack_->cancel_branch(node, r)(w) : j == stack_->exercise_branch(node, r)(w);
}

OptimalHedge optimal_hedge(std::shared_ptr<const RiskStack> stack, const Rational& capital) {
  if (capital.sign() < 0) throw std::domain_error("capital must be nonnegative");
  RiskPortfolio portfolio(stack, capital);
  RiskInfusion infusion(stack);
  return {portfolio, infusion, WealthStopping(stack, portfolio, infusion, WealthStopping::Role::seller),
          WealthStopping(stack, portfolio, infusion, WealthStopping::Role::buyer)};
}

Rational InfusedTrace::expected_cost(const ScenarioTree& tree, Measure measure) const {
  Rational total;
  for (LeafId leaf = 0; leaf < tree.leaf_count(); ++leaf)
    total += tree.path_probability(leaf, measure) * cost[static_cast<std::size_t>(leaf)];
  return total;
}

namespace {

// Wealth dynamics along one path: returns the total infusion and, when the
// output arrays are given, records W, V and infusions per level.
Rational infused_path(const SwingContract& contract, const PortfolioStrategy& portfolio, const InfusionRule& infusion,
                      const ResolvedPlay& play, LeafId leaf, Rational* before, Rational* after, Rational* added) {
  const auto& tree = contract.tree();
  const int n = tree.horizon();
  const int claims = contract.claim_count();
  Rational w = portfolio.initial_capital(), cost;
  int paid = 0;
  for (int k = 0; k <= n; ++k) {
    const NodeId here = tree.node_on_path(leaf, k);
    if (before) before[k] = w;
    Rational inf;
    if (paid < claims && play.payoff_level(leaf, paid) == k) {
      const Rational h = contract.payoff_at(paid, play.seller_level(leaf, paid), play.buyer_level(leaf, paid), here);
      const Rational y = w - h;
      inf = infusion_due(contract, infusion, here, paid, y);
      w = y + inf;
      if (k == n) {
        w -= contract.terminal_bundle(paid + 1, here);
        paid = claims;
      } else {
        ++paid;
      }
      cost += inf;
    }
    if (after) after[k] = w;
    if (added) added[k] = inf;
    if (k < n && paid < claims)
      w += portfolio.units(here, paid, w) * (tree.price(tree.node_on_path(leaf, k + 1)) - tree.price(here));
  }
  return cost;
}

}  // namespace

InfusedTrace simulate_with_infusion(const SwingContract& contract, const PortfolioStrategy& portfolio,
                                    const InfusionRule& infusion, const StoppingStrategy& seller,
                                    const StoppingStrategy& buyer) {
  const auto& tree = contract.tree();
  InfusedTrace trace{resolve(tree, seller, buyer), {}, {}, {}, {}};
  const auto stride = static_cast<std::size_t>(tree.horizon() + 1);
  const auto cells = static_cast<std::size_t>(tree.leaf_count()) * stride;
  trace.before.resize(cells);
  trace.after.resize(cells);
  trace.infusion.resize(cells);
  for (LeafId leaf = 0; leaf < tree.leaf_count(); ++leaf) {
    const auto off = static_cast<std::size_t>(leaf) * stride;
    trace.cost.push_back(infused_path(contract, portfolio, infusion, trace.play, leaf, &trace.before[off],
                                      &trace.after[off], &trace.infusion[off]));
  }
  return trace;
}

PolicyRisk::PolicyRisk(const SwingContract& contract, const PortfolioStrategy& portfolio, const InfusionRule& infusion,
                       Rational p)
    : contract_(contract), portfolio_(portfolio), infusion_(infusion), p_(std::move(p)) {}

PolicyRisk::PolicyRisk(const SwingContract& contract, const PortfolioStrategy& portfolio, const InfusionRule& infusion)
    : PolicyRisk(contract, portfolio, infusion, contract.tree().params().p) {}

Rational PolicyRisk::payoff_branch(NodeId node, int remaining, const Rational& wealth, const Rational& payout) const {
  const auto& tree = contract_.tree();
  const int i = contract_.claim_count() - remaining;
  const Rational y = wealth - payout;
  const Rational inf = infusion_due(contract_, infusion_, node, i, y);
  if (remaining == 1) return inf;
  const Rational z = y + inf;
  const Rational units = portfolio_.units(node, i + 1, z);
  const NodeId hi = ScenarioTree::up(node), lo = ScenarioTree::down(node);
  const Rational next_hi = z + units * (tree.price(hi) - tree.price(node));
  const Rational next_lo = z + units * (tree.price(lo) - tree.price(node));
  return inf + p_ * value(hi, remaining - 1, next_hi) + (Rational(1) - p_) * value(lo, remaining - 1, next_lo);
}

Rational PolicyRisk::exercise_branch(NodeId node, int remaining, const Rational& wealth) const {
  return payoff_branch(node, remaining, wealth, contract_.exercise(contract_.claim_count() - remaining)[node]);
}

Rational PolicyRisk::cancel_branch(NodeId node, int remaining, const Rational& wealth) const {
  return payoff_branch(node, remaining, wealth, contract_.cancel(contract_.claim_count() - remaining)[node]);
}

Rational PolicyRisk::carry_branch(NodeId node, int remaining, const Rational& wealth) const {
  const auto& tree = contract_.tree();
  const int i = contract_.claim_count() - remaining;
  const Rational units = portfolio_.units(node, i, wealth);
  const NodeId hi = ScenarioTree::up(node), lo = ScenarioTree::down(node);
  return p_ * value(hi, remaining, wealth + units * (tree.price(hi) - tree.price(node))) +
         (Rational(1) - p_) * value(lo, remaining, wealth + units * (tree.price(lo) - tree.price(node)));
}

Rational PolicyRisk::value(NodeId node, int remaining, const Rational& wealth) const {
  if (remaining == 0) return {};
  if (ScenarioTree::level_of(node) == contract_.horizon())
    return positive_part(contract_.terminal_bundle(contract_.claim_count() - remaining, node) - wealth);
  auto key = std::make_tuple(node, remaining, wealth);
  {
    std::lock_guard lock(mutex_);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
  }
  const Rational ex = exercise_branch(node, remaining, wealth);
  const Rational ca = cancel_branch(node, remaining, wealth);
  // The buyer stops at once when exercising costs the seller more than cancelling.
  Rational result = ex >= ca ? ex : min(ca, max(ex, carry_branch(node, remaining, wealth)));
  std::lock_guard lock(mutex_);
  memo_.emplace(std::move(key), result);
  return result;
}

AdaptedProcess evaluate_policy_risk(const PolicyRisk& policy, int level, int remaining, const Rational& wealth) {
  const auto& tree = policy.contract().tree();
  if (level < 0 || level > tree.horizon()) throw std::out_of_range("level outside [0, N]");
  if (remaining < 0 || remaining > policy.contract().claim_count()) throw std::out_of_range("remaining claims");
  AdaptedProcess out(tree.horizon());
  for (NodeId v = ScenarioTree::level_begin(level); v < ScenarioTree::level_begin(level + 1); ++v)
    out[v] = policy.value(v, remaining, wealth);
  return out;
}

PolicyStopping::PolicyStopping(const PolicyRisk& policy, Role role)
    : StoppingStrategy(policy.contract().horizon()), policy_(policy), role_(role) {}

bool PolicyStopping::stops(int claim, PayoffHistory history, NodeId node) const {
  if (ScenarioTree::level_of(node) == horizon_) return true;
  const Rational w = wealth_at(policy_.contract(), policy_.portfolio(), policy_.infusion(), history, node);
  const int r = policy_.contract().claim_count() - claim;
  const Rational j = policy_.value(node, r, w);
  return role_ == Role::seller ? j >= policy_.cancel_branch(node, r, w) : j == policy_.exercise_branch(node, r, w);
}

namespace {

// Exact buyer best response against a fixed seller and policy.
class BestResponse {
 public:
  BestResponse(const SwingContract& contract, const PortfolioStrategy& portfolio, const InfusionRule& infusion,
               const StoppingStrategy& seller)
      : contract_(contract), portfolio_(portfolio), infusion_(infusion), seller_(seller),
        p_(contract.tree().params().p) {}

  Rational run() {
    std::vector<PayoffEvent> history;
    return stage(0, history, 0, portfolio_.initial_capital());
  }

 private:
  // Claim i is unpaid and live at `node` with pre-payoff wealth w.
  Rational stage(int i, std::vector<PayoffEvent>& history, NodeId node, const Rational& w) {
    const int k = ScenarioTree::level_of(node);
    if (k == contract_.horizon())
      return infusion_due(contract_, infusion_, node, i, w - contract_.exercise(i)[node]);
    const bool seller_stops = k >= seller_.first_level(i, history) && seller_.stops(i, history, node);
    Rational stop_now = settle(i, history, node, w, false);
    Rational wait = seller_stops ? settle(i, history, node, w, true) : carry(i, history, node, w);
    return max(stop_now, wait);
  }

  Rational carry(int i, std::vector<PayoffEvent>& history, NodeId node, const Rational& w) {
    const auto& tree = contract_.tree();
    const Rational units = portfolio_.units(node, i, w);
    const NodeId hi = ScenarioTree::up(node), lo = ScenarioTree::down(node);
    Rational up = stage(i, history, hi, w + units * (tree.price(hi) - tree.price(node)));
    Rational down = stage(i, history, lo, w + units * (tree.price(lo) - tree.price(node)));
    return p_ * up + (Rational(1) - p_) * down;
  }

  // Claim i is paid at `node` (below the horizon).
  Rational settle(int i, std::vector<PayoffEvent>& history, NodeId node, const Rational& w, bool cancelled) {
    const Rational y = w - (cancelled ? contract_.cancel(i)[node] : contract_.exercise(i)[node]);
    const Rational inf = infusion_due(contract_, infusion_, node, i, y);
    if (i + 1 == contract_.claim_count()) return inf;
    history.push_back({ScenarioTree::level_of(node), cancelled});
    Rational rest = carry(i + 1, history, node, y + inf);
    history.pop_back();
    return inf + rest;
  }

  const SwingContract& contract_;
  const PortfolioStrategy& portfolio_;
  const InfusionRule& infusion_;
  const StoppingStrategy& seller_;
  Rational p_;
};

}  // namespace

Rational evaluate_risk(const SwingContract& contract, const PortfolioStrategy& portfolio, const InfusionRule& infusion,
                       const StoppingStrategy& seller, BuyerSearch mode, std::uint64_t cap, Execution exec) {
  if (mode == BuyerSearch::recursion) return BestResponse(contract, portfolio, infusion, seller).run();
  StrategyEnumeration buyers(contract.tree(), contract.claim_count(), cap);
  std::vector<Rational> costs(buyers.size());
  for_each_index(0, static_cast<std::int64_t>(buyers.size()), exec, [&](std::int64_t idx) {
    auto buyer = buyers.at(static_cast<std::uint64_t>(idx));
    costs[static_cast<std::size_t>(idx)] =
        simulate_with_infusion(contract, portfolio, infusion, seller, buyer).expected_cost(contract.tree());
  });
  Rational best = costs.front();
  for (const auto& c : costs) best = max(best, c);
  return best;
}

}  // namespace swing
