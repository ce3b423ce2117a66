#pragma once

#include <bit>
#include <cstdint>
#include <string>
#include <vector>

#include "swing/execution.hpp"
#include "swing/rational.hpp"

namespace swing {

using NodeId = std::int64_t;
using LeafId = std::int64_t;

enum class Measure { market, martingale };

// Cox-Ross-Rubinstein market with zero interest: S_{k+1} = S_k (1 + rho),
// rho in {a, b}, P(rho = b) = p.
struct MarketParams {
  Rational s0 = 1;
  Rational a;
  Rational b;
  Rational p;
  int horizon = 1;

  // Throws SpecError unless S0 > 0, -1 < a < 0 < b, 0 < p < 1, 1 <= N <= 30.
  void validate() const;
};

// Returns a / (a - b), the unique probability making S a martingale.
Rational martingale_prob(const Rational& a, const Rational& b);

// Full non-recombining binary tree, heap-indexed: root 0, up child 2v+1,
// down child 2v+2. Level k occupies [2^k - 1, 2^{k+1} - 2]. Leaves are
// numbered 0..2^N-1 in the same order; bit (N-k) of a leaf id is 0 when
// step k moved up.
class ScenarioTree {
 public:
  explicit ScenarioTree(MarketParams params);

  const MarketParams& params() const { return params_; }
  int horizon() const { return params_.horizon; }
  NodeId node_count() const { return level_begin(params_.horizon + 1); }
  LeafId leaf_count() const { return LeafId{1} << params_.horizon; }

  static NodeId level_begin(int level) { return (NodeId{1} << level) - 1; }
  static NodeId level_size(int level) { return NodeId{1} << level; }
  static int level_of(NodeId v) {
    return static_cast<int>(std::bit_width(static_cast<std::uint64_t>(v) + 1)) - 1;
  }
  static NodeId up(NodeId v) { return 2 * v + 1; }
  static NodeId down(NodeId v) { return 2 * v + 2; }
  static NodeId parent(NodeId v) { return (v - 1) / 2; }
  static bool is_up_child(NodeId v) { return v % 2 == 1; }
  // Ancestor of v at `level` (level <= level_of(v)).
  static NodeId ancestor(NodeId v, int level) {
    int shift = level_of(v) - level;
    return level_begin(level) + ((v - level_begin(level_of(v))) >> shift);
  }

  NodeId node_on_path(LeafId leaf, int level) const {
    return level_begin(level) + (leaf >> (params_.horizon - level));
  }
  // First leaf below v and the number of leaves below it.
  LeafId first_leaf(NodeId v) const {
    int k = level_of(v);
    return (v - level_begin(k)) << (params_.horizon - k);
  }
  LeafId leaves_below(NodeId v) const { return LeafId{1} << (params_.horizon - level_of(v)); }

  const Rational& price(NodeId v) const { return prices_[static_cast<std::size_t>(v)]; }
  const Rational& martingale_probability() const { return p_tilde_; }
  const Rational& probability(Measure m) const {
    return m == Measure::market ? params_.p : p_tilde_;
  }
  Rational path_probability(LeafId leaf, Measure m) const;
  // Probability of reaching v from the root.
  Rational node_probability(NodeId v, Measure m) const;
  // Moves along the path as '1' (up) and '0' (down), first step first.
  std::string path_bits(LeafId leaf) const;

 private:
  MarketParams params_;
  Rational p_tilde_;
  std::vector<Rational> prices_;
};

// One value per tree node; adapted by construction since a node is a path prefix.
class AdaptedProcess {
 public:
  AdaptedProcess() = default;
  explicit AdaptedProcess(int horizon, const Rational& fill = Rational())
      : horizon_(horizon), values_(static_cast<std::size_t>(ScenarioTree::level_begin(horizon + 1)), fill) {}

  int horizon() const { return horizon_; }
  NodeId size() const { return static_cast<NodeId>(values_.size()); }
  Rational& operator[](NodeId v) { return values_[static_cast<std::size_t>(v)]; }
  const Rational& operator[](NodeId v) const { return values_[static_cast<std::size_t>(v)]; }
  const std::vector<Rational>& values() const { return values_; }

  friend bool operator==(const AdaptedProcess&, const AdaptedProcess&) = default;

 private:
  int horizon_ = 0;
  std::vector<Rational> values_;
};

// q * f(up) + (1 - q) * f(down).
inline Rational expect_children(const AdaptedProcess& f, NodeId v, const Rational& q) {
  const Rational& hi = f[ScenarioTree::up(v)];
  const Rational& lo = f[ScenarioTree::down(v)];
  return lo + q * (hi - lo);
}

// E[proc_{level+1} | F_level] written at the level-`level` nodes; zero elsewhere.
AdaptedProcess one_step_expectation(const ScenarioTree& tree, const AdaptedProcess& proc, int level,
                                    Measure measure, Execution exec = Execution::parallel);

// The stock price as an adapted process.
AdaptedProcess stock_process(const ScenarioTree& tree);

}  // namespace swing
