#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <tuple>
#include <vector>

#include "swing/hedge.hpp"
#include "swing/pwl.hpp"

namespace swing {

// I(k, j, y): capital added after claim j is paid at a level-k node, leaving
// wealth y. Only consulted before the horizon and before the last claim; the
// other cases are fixed (see infusion_due). Const members must be reentrant.
class InfusionRule {
 public:
  virtual ~InfusionRule() = default;
  virtual Rational amount(NodeId node, int claim, const Rational& wealth) const = 0;
};

// Adds exactly the deficit (-y)^+.
class MinimalInfusion : public InfusionRule {
 public:
  Rational amount(NodeId, int, const Rational& wealth) const override { return positive_part(-wealth); }
};

// Infusion after paying claim `claim` at `node` with remaining wealth y:
// at the horizon, enough to settle every later claim as well; after the last
// claim, the deficit; otherwise the rule's amount, which must cover the deficit.
Rational infusion_due(const SwingContract& contract, const InfusionRule& rule, NodeId node, int claim,
                      const Rational& wealth);

// Exact risk functions J_k(., r) per node for r = 0..L remaining claims, with
// the branch functions and controls of the recursion
//   J = min(cancel, max(exercise, carry)).
class RiskStack {
 public:
  const SwingContract& contract() const { return contract_; }
  const Rational& probability() const { return p_; }
  int claim_count() const { return contract_.claim_count(); }

  const PwlFn& value(NodeId v, int r) const { return cell(v).value[idx(r)]; }
  // Defined below the horizon for r >= 1.
  const PwlFn& cancel_branch(NodeId v, int r) const { return cell(v).cancel[idx(r)]; }
  const PwlFn& exercise_branch(NodeId v, int r) const { return cell(v).exercise[idx(r)]; }
  // Defined below the horizon for r >= 0: trading optimally into the next level.
  const PwlFn& carry_branch(NodeId v, int r) const { return cell(v).carry[idx(r)]; }
  const PwlControl& stock_control(NodeId v, int r) const { return cell(v).stock[idx(r)]; }
  // Below the horizon for r = 0..L-1: top-up after a payoff leaving r claims.
  const InfusionEnvelope& envelope(NodeId v, int r) const { return cell(v).envelope[idx(r)]; }

 private:
  friend RiskStack risk_recursion(const SwingContract&, const Rational&, Execution);
  struct Cell {
    std::vector<PwlFn> value, cancel, exercise, carry;
    std::vector<PwlControl> stock;
    std::vector<InfusionEnvelope> envelope;
  };
  RiskStack(SwingContract contract, Rational p) : contract_(std::move(contract)), p_(std::move(p)) {}
  const Cell& cell(NodeId v) const { return cells_[static_cast<std::size_t>(v)]; }
  static std::size_t idx(int r) { return static_cast<std::size_t>(r); }

  SwingContract contract_;
  Rational p_;
  std::vector<Cell> cells_;
};

// Uses the market probability p, never the martingale one.
RiskStack risk_recursion(const SwingContract& contract, const Rational& p, Execution exec = Execution::parallel);
RiskStack risk_recursion(const SwingContract& contract, Execution exec = Execution::parallel);

// R(x) = J_0(x, L) at the root.
Rational shortfall_risk(const RiskStack& stack, const Rational& capital);

// Stock position gamma = alpha / S read from the carry-branch control.
class RiskPortfolio : public PortfolioStrategy {
 public:
  RiskPortfolio(std::shared_ptr<const RiskStack> stack, Rational capital)
      : stack_(std::move(stack)), capital_(std::move(capital)) {}
  Rational initial_capital() const override { return capital_; }
  Rational units(NodeId node, int claim, const Rational& wealth) const override;

 private:
  std::shared_ptr<const RiskStack> stack_;
  Rational capital_;
};

class RiskInfusion : public InfusionRule {
 public:
  explicit RiskInfusion(std::shared_ptr<const RiskStack> stack) : stack_(std::move(stack)) {}
  Rational amount(NodeId node, int claim, const Rational& wealth) const override;

 private:
  std::shared_ptr<const RiskStack> stack_;
};

// Pre-payoff wealth at `node` for the next unpaid claim, replaying the payoff
// history along the path from the root.
Rational wealth_at(const SwingContract& contract, const PortfolioStrategy& portfolio, const InfusionRule& infusion,
                   PayoffHistory history, NodeId node);

// Stops by comparing risk functions at the wealth reached along the path.
class WealthStopping : public StoppingStrategy {
 public:
  enum class Role { seller, buyer };
  WealthStopping(std::shared_ptr<const RiskStack> stack, RiskPortfolio portfolio, RiskInfusion infusion, Role role);
  int claim_count() const override { return stack_->claim_count(); }
  // Seller: J equals the cancel branch. Buyer: J equals the exercise branch.
  bool stops(int claim, PayoffHistory history, NodeId node) const override;

 private:
  std::shared_ptr<const RiskStack> stack_;
  RiskPortfolio portfolio_;
  RiskInfusion infusion_;
  Role role_;
};

struct OptimalHedge {
  RiskPortfolio portfolio;
  RiskInfusion infusion;
  WealthStopping seller;
  WealthStopping buyer;  // a best response to the seller
};

OptimalHedge optimal_hedge(std::shared_ptr<const RiskStack> stack, const Rational& capital);

// Wealth before (W) and after (V) payoffs and infusions, per path and level.
struct InfusedTrace {
  ResolvedPlay play;
  std::vector<Rational> before, after, infusion;  // [leaf * (N + 1) + k]
  std::vector<Rational> cost;                     // per leaf, sum of infusions

  Rational expected_cost(const ScenarioTree& tree, Measure measure = Measure::market) const;
};

// Throws ContractViolation if the rule adds less than the deficit.
InfusedTrace simulate_with_infusion(const SwingContract& contract, const PortfolioStrategy& portfolio,
                                    const InfusionRule& infusion, const StoppingStrategy& seller,
                                    const StoppingStrategy& buyer);

// J^(pi,I)_k(y, r) for a fixed portfolio rule and infusion rule: the value of
// the stopping game left once the trading and top-up policy is frozen.
class PolicyRisk {
 public:
  PolicyRisk(const SwingContract& contract, const PortfolioStrategy& portfolio, const InfusionRule& infusion,
             Rational p);
  PolicyRisk(const SwingContract& contract, const PortfolioStrategy& portfolio, const InfusionRule& infusion);

  Rational value(NodeId node, int remaining, const Rational& wealth) const;
  // Below the horizon: pay claim L - remaining now by exercise or cancellation.
  Rational exercise_branch(NodeId node, int remaining, const Rational& wealth) const;
  Rational cancel_branch(NodeId node, int remaining, const Rational& wealth) const;
  // Below the horizon: hold the claim one more step.
  Rational carry_branch(NodeId node, int remaining, const Rational& wealth) const;

  const SwingContract& contract() const { return contract_; }
  const PortfolioStrategy& portfolio() const { return portfolio_; }
  const InfusionRule& infusion() const { return infusion_; }

 private:
  Rational payoff_branch(NodeId node, int remaining, const Rational& wealth, const Rational& payout) const;

  const SwingContract& contract_;
  const PortfolioStrategy& portfolio_;
  const InfusionRule& infusion_;
  Rational p_;
  mutable std::mutex mutex_;
  mutable std::map<std::tuple<NodeId, int, Rational>, Rational> memo_;
};

// J^(pi,I)_n(y, r) at every level-n node; zero elsewhere.
AdaptedProcess evaluate_policy_risk(const PolicyRisk& policy, int level, int remaining, const Rational& wealth);

// Stopping rules that are optimal for the game with the policy frozen:
// seller stops once J >= cancel branch, buyer once J = exercise branch.
class PolicyStopping : public StoppingStrategy {
 public:
  enum class Role { seller, buyer };
  PolicyStopping(const PolicyRisk& policy, Role role);
  int claim_count() const override { return policy_.contract().claim_count(); }
  bool stops(int claim, PayoffHistory history, NodeId node) const override;

 private:
  const PolicyRisk& policy_;
  Role role_;
};

enum class BuyerSearch { enumerate, recursion };

// max over buyer strategies of E[C] under the market measure. `enumerate`
// plays every enumerated buyer strategy; `recursion` solves the buyer's
// best response exactly by backward induction over (claim, history, node).
Rational evaluate_risk(const SwingContract& contract, const PortfolioStrategy& portfolio, const InfusionRule& infusion,
                       const StoppingStrategy& seller, BuyerSearch mode = BuyerSearch::recursion,
                       std::uint64_t cap = 1'000'000, Execution exec = Execution::parallel);

}  // namespace swing
