#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "swing/swing.hpp"

namespace swing {

// Units of stock replicating (v_up, v_down) one step ahead from price s.
Rational hedge_ratio(const Rational& v_up, const Rational& v_down, const Rational& s, const Rational& b,
                     const Rational& a);

// Wealth y may hold gamma units at price s iff -y/(s b) <= gamma <= -y/(s a),
// i.e. wealth stays nonnegative after either move.
bool admissible(const MarketParams& m, const Rational& price, const Rational& wealth, const Rational& units);

// gamma(k, i, y): stock held over (k, k+1] at a level-k node while claim i is
// the next unpaid claim and wealth is y. Const members must be reentrant.
class PortfolioStrategy {
 public:
  virtual ~PortfolioStrategy() = default;
  virtual Rational initial_capital() const = 0;
  virtual Rational units(NodeId node, int claim, const Rational& wealth) const = 0;
};

class NoTrading : public PortfolioStrategy {
 public:
  explicit NoTrading(Rational capital) : capital_(std::move(capital)) {}
  Rational initial_capital() const override { return capital_; }
  Rational units(NodeId, int, const Rational&) const override { return {}; }

 private:
  Rational capital_;
};

// Replicates V^(L-i) from one level to the next while wealth covers its
// conditional expectation; holds no stock otherwise.
class PerfectHedge : public PortfolioStrategy {
 public:
  PerfectHedge(const SwingContract& contract, const ValueStack& stack);

  Rational initial_capital() const override { return capital_; }
  Rational units(NodeId node, int claim, const Rational& wealth) const override;
  PerfectHedge with_capital(Rational capital) const;

 private:
  int claims_;
  Rational capital_;
  std::vector<std::vector<Rational>> gate_;   // [r][node]: E~[V^(r)_{k+1} | node]
  std::vector<std::vector<Rational>> ratio_;  // [r][node]: replicating units
};

PerfectHedge build_perfect_hedge(const SwingContract& contract, const ValueStack& stack);

// Wealth after payoffs at each level of each path.
struct WealthTrace {
  ResolvedPlay play;
  std::vector<Rational> wealth;  // [leaf * (N + 1) + k]

  const Rational& at(LeafId leaf, int k) const {
    return wealth[static_cast<std::size_t>(leaf) * static_cast<std::size_t>(play.horizon() + 1) +
                  static_cast<std::size_t>(k)];
  }
  // Columns path,level,wealth; path is the move string with 1 = up.
  std::string to_csv(const ScenarioTree& tree, int decimals = -1) const;
};

// Self-financing wealth with payoffs deducted when they fall due; trading runs
// on the next unpaid claim until all L claims are paid.
WealthTrace simulate_portfolio(const SwingContract& contract, const PortfolioStrategy& portfolio,
                               const StoppingStrategy& seller, const StoppingStrategy& buyer);

struct HedgeWitness {
  std::vector<int> buyer_levels;  // buyer stops claim i at max(level_i, window)
  LeafId leaf = 0;
  int level = 0;
  Rational wealth;
};

struct HedgeCertificate {
  bool holds = true;
  std::uint64_t buyer_strategies = 0;
  std::optional<HedgeWitness> witness;
};

// Checks wealth >= 0 at every level and path against every buyer play. A
// buyer's play on one path is determined by the levels at which it stops, so
// the (N+1)^L deterministic-level strategies realize every buyer behavior.
HedgeCertificate verify_perfect_hedge(const SwingContract& contract, const PortfolioStrategy& portfolio,
                                      const StoppingStrategy& seller, std::uint64_t cap = 1'000'000,
                                      Execution exec = Execution::parallel);

}  // namespace swing
