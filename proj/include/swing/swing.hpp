#pragma once

#include <memory>
#include <span>
#include <vector>

#include "swing/contract.hpp"
#include "swing/dynkin.hpp"

namespace swing {

// One realized payoff: the joint stopping level a = sigma ^ tau and whether
// the seller stopped strictly first (d = 1{sigma < tau}).
struct PayoffEvent {
  int level = 0;
  bool cancelled = false;
  friend bool operator==(const PayoffEvent&, const PayoffEvent&) = default;
  friend auto operator<=>(const PayoffEvent&, const PayoffEvent&) = default;
};
using PayoffHistory = std::span<const PayoffEvent>;

// First admissible level for the next claim: 0 before any payoff, then one
// step after the previous payoff, pinned at N.
int window_start(int horizon, PayoffHistory history);

// Rule for each claim as a function of the realized payoff history. Only
// histories that actually occur are ever queried.
class StoppingStrategy {
 public:
  virtual ~StoppingStrategy() = default;
  virtual int claim_count() const = 0;
  // Level from which the rule for `claim` may stop; must not precede the window.
  virtual int first_level(int claim, PayoffHistory history) const;
  // Decision at `node` for `claim`, given that it has not stopped earlier.
  virtual bool stops(int claim, PayoffHistory history, NodeId node) const = 0;

 protected:
  explicit StoppingStrategy(int horizon) : horizon_(horizon) {}
  int horizon_;
};

// Rule for claim i is a fixed per-node table, started at the history's window.
class TableStrategy : public StoppingStrategy {
 public:
  TableStrategy(int horizon, std::vector<std::vector<std::uint8_t>> tables);
  static TableStrategy immediate(int horizon, int claims);
  static TableStrategy never(int horizon, int claims);

  int claim_count() const override { return static_cast<int>(tables_.size()); }
  bool stops(int claim, PayoffHistory history, NodeId node) const override;
  const std::vector<std::uint8_t>& table(int claim) const { return tables_.at(static_cast<std::size_t>(claim)); }

 private:
  std::vector<std::vector<std::uint8_t>> tables_;
};

// Claim i stops at the deterministic level max(levels[i], window).
class FixedLevelStrategy : public StoppingStrategy {
 public:
  FixedLevelStrategy(int horizon, std::vector<int> levels);
  int claim_count() const override { return static_cast<int>(levels_.size()); }
  bool stops(int claim, PayoffHistory history, NodeId node) const override;
  const std::vector<int>& levels() const { return levels_; }

 private:
  std::vector<int> levels_;
};

// Stopping levels per leaf and claim after playing two strategies pathwise.
class ResolvedPlay {
 public:
  ResolvedPlay(int horizon, int claims, LeafId leaves);

  int horizon() const { return horizon_; }
  int claim_count() const { return claims_; }
  LeafId leaf_count() const { return leaves_; }
  int seller_level(LeafId leaf, int claim) const { return sigma_[index(leaf, claim)]; }
  int buyer_level(LeafId leaf, int claim) const { return tau_[index(leaf, claim)]; }
  int payoff_level(LeafId leaf, int claim) const { return std::min(seller_level(leaf, claim), buyer_level(leaf, claim)); }
  bool cancelled(LeafId leaf, int claim) const { return seller_level(leaf, claim) < buyer_level(leaf, claim); }
  std::vector<PayoffEvent> history(LeafId leaf) const;
  // Number of payoffs made at or before level k on the path.
  int paid_by(LeafId leaf, int k) const;

  void set(LeafId leaf, int claim, int sigma, int tau);

 private:
  std::size_t index(LeafId leaf, int claim) const {
    return static_cast<std::size_t>(leaf) * static_cast<std::size_t>(claims_) + static_cast<std::size_t>(claim);
  }
  int horizon_, claims_;
  LeafId leaves_;
  std::vector<int> sigma_, tau_;
};

// Stopping level of `strategy` for `claim` along the path through `leaf`.
int stop_level(const ScenarioTree& tree, const StoppingStrategy& strategy, int claim, PayoffHistory history,
               LeafId leaf);

// Throws ContractViolation if a rule starts before its delay window.
ResolvedPlay resolve(const ScenarioTree& tree, const StoppingStrategy& seller, const StoppingStrategy& buyer);

// Sum over claims of the payoffs of a resolved play, per leaf.
Rational path_payoff(const SwingContract& contract, const ResolvedPlay& play, LeafId leaf);

// E[sum_i H_i(sigma_i, tau_i)]; pricing uses the martingale measure.
Rational game_value(const SwingContract& contract, const StoppingStrategy& seller, const StoppingStrategy& buyer,
                    Measure measure = Measure::martingale);

// Aggregated games for k = 0..L remaining claims; index 0 is identically zero.
struct ValueStack {
  std::vector<AdaptedProcess> cancel;    // X^(k)
  std::vector<AdaptedProcess> exercise;  // Y^(k)
  std::vector<AdaptedProcess> value;     // V^(k)
  int claim_count() const { return static_cast<int>(value.size()) - 1; }
  const Rational& price() const { return value.back()[0]; }
};

ValueStack price_swing(const SwingContract& contract, Execution exec = Execution::parallel);

struct OptimalStrategies {
  TableStrategy seller;  // claim i stops where X^(L-i) = V^(L-i)
  TableStrategy buyer;   // claim i stops where Y^(L-i) = V^(L-i)
};

OptimalStrategies optimal_strategies(const ValueStack& stack);

}  // namespace swing
