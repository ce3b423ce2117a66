#pragma once

#include <memory>
#include <vector>

#include "swing/json.hpp"
#include "swing/market.hpp"

namespace swing {

// Exercise payoff Y and cancellation payoff X of one claim; 0 <= Y <= X.
struct ClaimPayoffs {
  AdaptedProcess exercise;
  AdaptedProcess cancel;
};

class SwingContract {
 public:
  // Throws SpecError naming the first node with a negative payoff or Y > X.
  SwingContract(std::shared_ptr<const ScenarioTree> tree, std::vector<ClaimPayoffs> claims);

  const ScenarioTree& tree() const { return *tree_; }
  const std::shared_ptr<const ScenarioTree>& tree_ptr() const { return tree_; }
  int horizon() const { return tree_->horizon(); }
  int claim_count() const { return static_cast<int>(claims_.size()); }
  const ClaimPayoffs& claim(int i) const { return claims_.at(static_cast<std::size_t>(i)); }
  const AdaptedProcess& exercise(int i) const { return claim(i).exercise; }
  const AdaptedProcess& cancel(int i) const { return claim(i).cancel; }

  // Payoff of claim i (0-based) when the seller stops at m and the buyer at n;
  // `node` lies at level min(m, n). A tie pays the exercise value.
  Rational payoff_at(int i, int m, int n, NodeId node) const;
  // Sum of exercise payoffs of claims first..L-1 at a level-N node.
  Rational terminal_bundle(int first, NodeId node) const;
  // Sum over claims of the largest cancellation payoff.
  Rational max_cancel_sum() const;

 private:
  std::shared_ptr<const ScenarioTree> tree_;
  std::vector<ClaimPayoffs> claims_;
};

struct ExerciseSpec {
  enum class Kind { call, put, table };
  Kind kind = Kind::call;
  Rational strike;
  std::vector<Rational> values;  // per node, heap order
};

// Constant, proportional and infinite penalties apply before the horizon only,
// so X_N = Y_N. A table penalty is taken verbatim at every node.
struct PenaltySpec {
  enum class Kind { constant, proportional, table, infinite };
  Kind kind = Kind::constant;
  Rational value;                // constant, proportional factor, or infinite proxy
  bool has_value = false;        // infinite proxy given explicitly
  std::vector<Rational> values;  // per node, heap order
};

struct ClaimSpec {
  ExerciseSpec exercise;
  PenaltySpec penalty;
};

struct ContractSpec {
  MarketParams model;
  std::vector<ClaimSpec> claims;
};

SwingContract build_contract(const std::vector<ClaimSpec>& claims, std::shared_ptr<const ScenarioTree> tree);
SwingContract build_contract(const ContractSpec& spec);

ContractSpec contract_spec_from_json(const Json& j);
Json to_json(const ContractSpec& spec);
SwingContract load_contract(const std::string& path);

// Every payoff zero: Y = X = 0.
SwingContract zero_contract(std::shared_ptr<const ScenarioTree> tree, int claims);

}  // namespace swing
