#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "swing/pwl.hpp"
#include "swing/swing.hpp"

namespace swing {

inline constexpr std::uint64_t kDefaultEnumerationCap = 1'000'000;

// |Gamma_start|: T(N) = 1, T(k) = 1 + T(k+1)^2 per node, raised to the
// number of start-level nodes. Saturates at UINT64_MAX.
std::uint64_t count_stopping_times(const ScenarioTree& tree, int start);

// Every adapted stopping time from `start`, each exactly once.
std::vector<StoppingTime> enumerate_stopping_times(const ScenarioTree& tree, int start,
                                                   std::uint64_t cap = kDefaultEnumerationCap);

// Every stopping strategy for L claims, realized on every history that can
// occur: one Gamma_window choice per (claim, history) slot.
class StrategyEnumeration;

class EnumeratedStrategy : public StoppingStrategy {
 public:
  int claim_count() const override;
  bool stops(int claim, PayoffHistory history, NodeId node) const override;

 private:
  friend class StrategyEnumeration;
  struct Layout;
  EnumeratedStrategy(std::shared_ptr<const Layout> layout, std::vector<std::uint32_t> choice);
  std::shared_ptr<const Layout> layout_;
  std::vector<std::uint32_t> choice_;
};

class StrategyEnumeration {
 public:
  StrategyEnumeration(const ScenarioTree& tree, int claims, std::uint64_t cap = kDefaultEnumerationCap);
  std::uint64_t size() const { return size_; }
  EnumeratedStrategy at(std::uint64_t index) const;

 private:
  std::shared_ptr<const EnumeratedStrategy::Layout> layout_;
  std::uint64_t size_ = 0;
};

// Strategy given by an explicit stop table per (claim, history); histories
// without an entry never stop before the horizon.
class HistoryTableStrategy : public StoppingStrategy {
 public:
  HistoryTableStrategy(int horizon, int claims) : StoppingStrategy(horizon), claims_(claims) {}
  int claim_count() const override { return claims_; }
  bool stops(int claim, PayoffHistory history, NodeId node) const override;
  void set_stop(int claim, const std::vector<PayoffEvent>& history, NodeId node);
  Json to_json() const;

 private:
  int claims_;
  std::map<std::pair<int, std::vector<PayoffEvent>>, std::vector<NodeId>> stops_;
};

struct MinMaxValue {
  Rational upper;  // min over seller strategies of max over buyer strategies
  Rational lower;  // max over buyer strategies of min over seller strategies
};

// Exhaustive value of the pricing game under the martingale measure. Each
// claim's game restarts at its window node with history-free payoffs, so
// the min-max is assembled stage by stage from exhaustive stopping-time
// matrices; `cap` bounds the number of local stopping times per stage.
MinMaxValue brute_force_value(const SwingContract& contract, std::uint64_t cap = kDefaultEnumerationCap,
                              Execution exec = Execution::parallel);

// The same value by playing every pair of full strategies; tiny instances only.
MinMaxValue exhaustive_value(const SwingContract& contract, std::uint64_t cap = kDefaultEnumerationCap);

struct SaddleCertificate {
  bool holds = false;
  Rational value;        // G(s, b)
  Rational buyer_best;   // max over buyer strategies of G(s, .)
  Rational seller_best;  // min over seller strategies of G(., b)
  // A deviation that improves on (s, b), with its game value.
  std::optional<std::string> witness_role;
  std::optional<HistoryTableStrategy> witness;
  std::optional<Rational> witness_value;
  Json to_json() const;
};

// Checks G(s, b') <= G(s, b) <= G(s', b) over every strategy b', s'.
SaddleCertificate certify_saddle(const SwingContract& contract, const StoppingStrategy& seller,
                                 const StoppingStrategy& buyer, std::uint64_t cap = kDefaultEnumerationCap);

// max over buyer strategies of G(s, .) with an optimal response.
std::pair<Rational, HistoryTableStrategy> best_buyer_response(const SwingContract& contract,
                                                              const StoppingStrategy& seller,
                                                              std::uint64_t cap = kDefaultEnumerationCap);
// min over seller strategies of G(., b) with an optimal response.
std::pair<Rational, HistoryTableStrategy> best_seller_response(const SwingContract& contract,
                                                               const StoppingStrategy& buyer,
                                                               std::uint64_t cap = kDefaultEnumerationCap);

struct RiskBracket {
  Rational lower, upper;
  bool contains(const Rational& r) const { return lower <= r && r <= upper; }
};

// Bracket for R(x) from gridded controls. Upper: the risk of the policy that
// picks the best stock fraction and top-up on a grid of `resolution` steps.
// Lower: the same recursion with each grid cell replaced by a bound valid
// over the whole cell (risk functions are non-increasing in wealth).
RiskBracket grid_risk_oracle(const SwingContract& contract, const Rational& capital, int resolution,
                             std::uint64_t cap = kDefaultEnumerationCap);

// Direct minimization over the finite candidate set of positions: the ends of
// [-y/b, -y/a] and every position that lands a branch on a breakpoint.
Rational portfolio_candidate_min(const PwlFn& up, const PwlFn& down, const Rational& p, const Rational& a,
                                 const Rational& b, const Rational& y);
// Minimum over `steps` + 1 equally spaced positions in [-y/b, -y/a].
Rational portfolio_grid_min(const PwlFn& up, const PwlFn& down, const Rational& p, const Rational& a,
                            const Rational& b, const Rational& y, int steps);
// Candidates z = (A - y)^+ and every z that lands y + z - A on a breakpoint.
Rational infusion_candidate_min(const PwlFn& psi, const Rational& payout, const Rational& y);
// Minimum over `steps` + 1 equally spaced z in [(A - y)^+, (A - y)^+ + psi(0)].
Rational infusion_grid_min(const PwlFn& psi, const Rational& payout, const Rational& y, int steps);

}  // namespace swing
