#include "swing/market.hpp"

#include "swing/errors.hpp"

namespace swing {

void MarketParams::validate() const {
  if (s0.sign() <= 0) throw SpecError("S0 must be positive, got " + s0.str());
  if (!(Rational(-1) < a && a.sign() < 0))
    throw SpecError("down return a must satisfy -1 < a < 0, got " + a.str());
  if (b.sign() <= 0) throw SpecError("up return b must be positive, got " + b.str());
  if (!(p.sign() > 0 && p < Rational(1)))
    throw SpecError("market probability p must lie in (0, 1), got " + p.str());
  if (horizon < 1 || horizon > 30)
    throw SpecError("horizon N must lie in 1..30, got " + std::to_string(horizon));
}

Rational martingale_prob(const Rational& a, const Rational& b) {
  if (!(Rational(-1) < a && a.sign() < 0 && b.sign() > 0))
    throw SpecError("martingale probability needs -1 < a < 0 < b");
  return a / (a - b);
}

ScenarioTree::ScenarioTree(MarketParams params) : params_(std::move(params)) {
  params_.validate();
  p_tilde_ = martingale_prob(params_.a, params_.b);
  prices_.resize(static_cast<std::size_t>(node_count()));
  prices_[0] = params_.s0;
  const Rational up_factor = Rational(1) + params_.b;
  const Rational down_factor = Rational(1) + params_.a;
  for (NodeId v = 0; v < level_begin(params_.horizon); ++v) {
    prices_[static_cast<std::size_t>(up(v))] = prices_[static_cast<std::size_t>(v)] * up_factor;
    prices_[static_cast<std::size_t>(down(v))] = prices_[static_cast<std::size_t>(v)] * down_factor;
  }
}

Rational ScenarioTree::node_probability(NodeId v, Measure m) const {
  const Rational& q = probability(m);
  const Rational q_down = Rational(1) - q;
  Rational result(1);
  for (; v != 0; v = parent(v)) result *= is_up_child(v) ? q : q_down;
  return result;
}

Rational ScenarioTree::path_probability(LeafId leaf, Measure m) const {
  return node_probability(node_on_path(leaf, params_.horizon), m);
}

std::string ScenarioTree::path_bits(LeafId leaf) const {
  std::string bits;
  for (int k = 1; k <= params_.horizon; ++k)
    bits += ((leaf >> (params_.horizon - k)) & 1) == 0 ? '1' : '0';
  return bits;
}

AdaptedProcess one_step_expectation(const ScenarioTree& tree, const AdaptedProcess& proc, int level,
                                    Measure measure, Execution exec) {
  if (level < 0 || level >= tree.horizon())
    throw std::out_of_range("expectation level " + std::to_string(level) + " outside [0, N)");
  if (proc.horizon() != tree.horizon()) throw std::invalid_argument("process horizon mismatch");
  AdaptedProcess out(tree.horizon());
  const Rational& q = tree.probability(measure);
  for_each_index(ScenarioTree::level_begin(level), ScenarioTree::level_size(level), exec,
                 [&](NodeId v) { out[v] = expect_children(proc, v, q); });
  return out;
}

AdaptedProcess stock_process(const ScenarioTree& tree) {
  AdaptedProcess s(tree.horizon());
  for (NodeId v = 0; v < tree.node_count(); ++v) s[v] = tree.price(v);
  return s;
}

}  // namespace swing
