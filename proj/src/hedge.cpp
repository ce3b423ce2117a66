#include "swing/hedge.hpp"

#include <limits>
#include <sstream>

#include "swing/errors.hpp"

namespace swing {

Rational hedge_ratio(const Rational& v_up, const Rational& v_down, const Rational& s, const Rational& b,
                     const Rational& a) {
  if (s.sign() <= 0) throw std::domain_error("hedge ratio needs a positive stock price");
  return (v_up - v_down) / (s * (b - a));
}

bool admissible(const MarketParams& m, const Rational& price, const Rational& wealth, const Rational& units) {
  const Rational held = units * price;
  return wealth + held * m.b >= Rational() && wealth + held * m.a >= Rational();
}

PerfectHedge::PerfectHedge(const SwingContract& contract, const ValueStack& stack)
    : claims_(contract.claim_count()), capital_(stack.price()) {
  const auto& tree = contract.tree();
  const auto& m = tree.params();
  const Rational& q = tree.martingale_probability();
  const auto inner = static_cast<std::size_t>(ScenarioTree::level_begin(tree.horizon()));
  gate_.assign(static_cast<std::size_t>(claims_ + 1), std::vector<Rational>(inner));
  ratio_ = gate_;
  for (int r = 1; r <= claims_; ++r) {
    const auto& v = stack.value[static_cast<std::size_t>(r)];
    for (std::size_t u = 0; u < inner; ++u) {
      auto node = static_cast<NodeId>(u);
      gate_[static_cast<std::size_t>(r)][u] = expect_children(v, node, q);
      ratio_[static_cast<std::size_t>(r)][u] =
          hedge_ratio(v[ScenarioTree::up(node)], v[ScenarioTree::down(node)], tree.price(node), m.b, m.a);
    }
  }
}

Rational PerfectHedge::units(NodeId node, int claim, const Rational& wealth) const {
  const auto r = static_cast<std::size_t>(claims_ - claim);
  const auto u = static_cast<std::size_t>(node);
  if (wealth < gate_[r][u]) return {};
  return ratio_[r][u];
}

PerfectHedge PerfectHedge::with_capital(Rational capital) const {
  PerfectHedge copy = *this;
  copy.capital_ = std::move(capital);
  return copy;
}

PerfectHedge build_perfect_hedge(const SwingContract& contract, const ValueStack& stack) {
  return PerfectHedge(contract, stack);
}

namespace {

// Wealth after payoffs along one path, written into out[0..N].
void wealth_path(const SwingContract& contract, const PortfolioStrategy& portfolio, const ResolvedPlay& play,
                 LeafId leaf, Rational* out) {
  const auto& tree = contract.tree();
  const int n = tree.horizon();
  const int claims = contract.claim_count();
  auto payoffs_at = [&](int k) {
    Rational due;
    for (int i = 0; i < claims; ++i)
      if (play.payoff_level(leaf, i) == k)
        due += contract.payoff_at(i, play.seller_level(leaf, i), play.buyer_level(leaf, i),
                                  tree.node_on_path(leaf, k));
    return due;
  };
  Rational w = portfolio.initial_capital() - payoffs_at(0);
  out[0] = w;
  for (int k = 1; k <= n; ++k) {
    const int paid = play.paid_by(leaf, k - 1);
    if (paid < claims) {
      NodeId prev = tree.node_on_path(leaf, k - 1), cur = tree.node_on_path(leaf, k);
      w += portfolio.units(prev, paid, w) * (tree.price(cur) - tree.price(prev)) - payoffs_at(k);
    }
    out[k] = w;
  }
}

}  // namespace

std::string WealthTrace::to_csv(const ScenarioTree& tree, int decimals) const {
  std::ostringstream out;
  out << "path,level,wealth\n";
  for (LeafId leaf = 0; leaf < play.leaf_count(); ++leaf)
    for (int k = 0; k <= play.horizon(); ++k)
      out << tree.path_bits(leaf) << ',' << k << ','
          << (decimals >= 0 ? at(leaf, k).decimal(decimals) : at(leaf, k).str()) << '\n';
  return out.str();
}

WealthTrace simulate_portfolio(const SwingContract& contract, const PortfolioStrategy& portfolio,
                               const StoppingStrategy& seller, const StoppingStrategy& buyer) {
  const auto& tree = contract.tree();
  WealthTrace trace{resolve(tree, seller, buyer), {}};
  const auto stride = static_cast<std::size_t>(tree.horizon() + 1);
  trace.wealth.resize(static_cast<std::size_t>(tree.leaf_count()) * stride);
  for (LeafId leaf = 0; leaf < tree.leaf_count(); ++leaf)
    wealth_path(contract, portfolio, trace.play, leaf, &trace.wealth[static_cast<std::size_t>(leaf) * stride]);
  return trace;
}

HedgeCertificate verify_perfect_hedge(const SwingContract& contract, const PortfolioStrategy& portfolio,
                                      const StoppingStrategy& seller, std::uint64_t cap, Execution exec) {
  const auto& tree = contract.tree();
  const int n = tree.horizon();
  const int claims = contract.claim_count();
  std::uint64_t count = 1;
  for (int i = 0; i < claims; ++i) {
    if (count > cap / static_cast<std::uint64_t>(n + 1))
      throw CapExceeded("perfect-hedge check needs more than " + std::to_string(cap) + " buyer strategies");
    count *= static_cast<std::uint64_t>(n + 1);
  }
  auto levels_of = [&](std::uint64_t index) {
    std::vector<int> levels(static_cast<std::size_t>(claims));
    for (auto& l : levels) {
      l = static_cast<int>(index % static_cast<std::uint64_t>(n + 1));
      index /= static_cast<std::uint64_t>(n + 1);
    }
    return levels;
  };
  // Per-strategy first failure; the lowest failing index is reported.
  std::vector<std::optional<HedgeWitness>> failures(count);
  for_each_index(0, static_cast<std::int64_t>(count), exec, [&](std::int64_t idx) {
    FixedLevelStrategy buyer(n, levels_of(static_cast<std::uint64_t>(idx)));
    WealthTrace trace = simulate_portfolio(contract, portfolio, seller, buyer);
    for (LeafId leaf = 0; leaf < tree.leaf_count(); ++leaf)
      for (int k = 0; k <= n; ++k)
        if (trace.at(leaf, k).sign() < 0) {
          failures[static_cast<std::size_t>(idx)] = HedgeWitness{buyer.levels(), leaf, k, trace.at(leaf, k)};
          return;
        }
  });
  HedgeCertificate cert;
  cert.buyer_strategies = count;
  for (auto& f : failures)
    if (f) {
      cert.holds = false;
      cert.witness = std::move(f);
      break;
    }
  return cert;
}

}  // namespace swing
