#include "swing/oracle.hpp"

#include <algorithm>
#include <functional>
#include <limits>

#include "swing/errors.hpp"

namespace swing {

namespace {

constexpr std::uint64_t kSaturated = std::numeric_limits<std::uint64_t>::max();

std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > kSaturated / a) return kSaturated;
  return a * b;
}

// Subtree counts T(k) for k = 0..N.
std::vector<std::uint64_t> subtree_counts(int horizon) {
  std::vector<std::uint64_t> t(static_cast<std::size_t>(horizon + 1), 1);
  for (int k = horizon - 1; k >= 0; --k) {
    std::uint64_t sq = sat_mul(t[static_cast<std::size_t>(k + 1)], t[static_cast<std::size_t>(k + 1)]);
    t[static_cast<std::size_t>(k)] = sq == kSaturated ? kSaturated : sq + 1;
  }
  return t;
}

// Stopping times local to the subtree of u, as sets of stop nodes plus the
// stop level of each leaf below u.
struct LocalOption {
  std::vector<NodeId> stops;
  std::vector<int> leaf_level;  // indexed by leaf - first_leaf(u)
};

std::vector<std::vector<NodeId>> stop_sets(const ScenarioTree& tree, NodeId u) {
  if (ScenarioTree::level_of(u) == tree.horizon()) return {{u}};
  auto hi = stop_sets(tree, ScenarioTree::up(u));
  auto lo = stop_sets(tree, ScenarioTree::down(u));
  std::vector<std::vector<NodeId>> out{{u}};
  out.reserve(1 + hi.size() * lo.size());
  for (const auto& h : hi)
    for (const auto& l : lo) {
      auto s = h;
      s.insert(s.end(), l.begin(), l.end());
      out.push_back(std::move(s));
    }
  return out;
}

std::vector<LocalOption> local_options(const ScenarioTree& tree, NodeId u, std::uint64_t cap) {
  const int k = ScenarioTree::level_of(u);
  if (subtree_counts(tree.horizon())[static_cast<std::size_t>(k)] > cap)
    throw CapExceeded("more than " + std::to_string(cap) + " stopping times below node " + std::to_string(u));
  const LeafId first = tree.first_leaf(u);
  const LeafId span = tree.leaves_below(u);
  std::vector<LocalOption> out;
  for (auto& s : stop_sets(tree, u)) {
    LocalOption opt{std::move(s), std::vector<int>(static_cast<std::size_t>(span))};
    for (NodeId v : opt.stops) {
      const LeafId from = tree.first_leaf(v) - first;
      for (LeafId l = 0; l < tree.leaves_below(v); ++l)
        opt.leaf_level[static_cast<std::size_t>(from + l)] = ScenarioTree::level_of(v);
    }
    out.push_back(std::move(opt));
  }
  return out;
}

// Probability of each leaf below u conditional on u.
std::vector<Rational> conditional_leaf_probs(const ScenarioTree& tree, NodeId u, Measure m) {
  const LeafId first = tree.first_leaf(u);
  const Rational base = tree.node_probability(u, m);
  std::vector<Rational> out;
  for (LeafId l = 0; l < tree.leaves_below(u); ++l) out.push_back(tree.path_probability(first + l, m) / base);
  return out;
}

}  // namespace

std::uint64_t count_stopping_times(const ScenarioTree& tree, int start) {
  if (start < 0 || start > tree.horizon()) throw std::out_of_range("start level outside [0, N]");
  const std::uint64_t t = subtree_counts(tree.horizon())[static_cast<std::size_t>(start)];
  std::uint64_t total = 1;
  for (NodeId i = 0; i < ScenarioTree::level_size(start); ++i) total = sat_mul(total, t);
  return total;
}

std::vector<StoppingTime> enumerate_stopping_times(const ScenarioTree& tree, int start, std::uint64_t cap) {
  const std::uint64_t count = count_stopping_times(tree, start);
  if (count > cap)
    throw CapExceeded(std::to_string(count == kSaturated ? cap + 1 : count) + " stopping times from level " +
                      std::to_string(start) + " exceed the cap of " + std::to_string(cap));
  std::vector<std::vector<std::vector<NodeId>>> per_node;
  for (NodeId v = ScenarioTree::level_begin(start); v < ScenarioTree::level_begin(start + 1); ++v)
    per_node.push_back(stop_sets(tree, v));
  std::vector<StoppingTime> out;
  out.reserve(count);
  std::vector<std::size_t> digit(per_node.size(), 0);
  for (std::uint64_t n = 0; n < count; ++n) {
    StoppingTime t(tree.horizon(), start);
    for (std::size_t j = 0; j < per_node.size(); ++j)
      for (NodeId v : per_node[j][digit[j]]) t.set(v, true);
    out.push_back(std::move(t));
    for (std::size_t j = 0; j < digit.size(); ++j) {
      if (++digit[j] < per_node[j].size()) break;
      digit[j] = 0;
    }
  }
  return out;
}

struct EnumeratedStrategy::Layout {
  int horizon = 0;
  int claims = 0;
  std::vector<std::vector<StoppingTime>> gamma;  // by window level
  std::map<std::pair<int, std::vector<PayoffEvent>>, std::size_t> slot_of;
  std::vector<int> slot_window;
};

EnumeratedStrategy::EnumeratedStrategy(std::shared_ptr<const Layout> layout, std::vector<std::uint32_t> choice)
    : StoppingStrategy(layout->horizon), layout_(std::move(layout)), choice_(std::move(choice)) {}

int EnumeratedStrategy::claim_count() const { return layout_->claims; }

bool EnumeratedStrategy::stops(int claim, PayoffHistory history, NodeId node) const {
  auto it = layout_->slot_of.find({claim, std::vector<PayoffEvent>(history.begin(), history.end())});
  if (it == layout_->slot_of.end()) throw std::logic_error("history outside the enumerated strategy space");
  const auto window = static_cast<std::size_t>(layout_->slot_window[it->second]);
  return layout_->gamma[window][choice_[it->second]].stops_at(node);
}

StrategyEnumeration::StrategyEnumeration(const ScenarioTree& tree, int claims, std::uint64_t cap) {
  auto layout = std::make_shared<EnumeratedStrategy::Layout>();
  const int n = tree.horizon();
  layout->horizon = n;
  layout->claims = claims;
  std::vector<std::uint64_t> gamma_size;
  for (int m = 0; m <= n; ++m) gamma_size.push_back(count_stopping_times(tree, m));
  // Slots: every history that can precede each claim.
  std::vector<PayoffEvent> h;
  std::function<void(int)> visit = [&](int claim) {
    const int window = window_start(n, h);
    layout->slot_of.emplace(std::make_pair(claim, h), layout->slot_window.size());
    layout->slot_window.push_back(window);
    if (claim + 1 == claims) return;
    for (int a = window; a <= n; ++a)
      for (int d = 0; d <= (a < n ? 1 : 0); ++d) {
        h.push_back({a, d == 1});
        visit(claim + 1);
        h.pop_back();
      }
  };
  visit(0);
  size_ = 1;
  for (int w : layout->slot_window) {
    size_ = sat_mul(size_, gamma_size[static_cast<std::size_t>(w)]);
    if (size_ > cap)
      throw CapExceeded("more than " + std::to_string(cap) + " stopping strategies for " + std::to_string(claims) +
                        " claims over " + std::to_string(n) + " periods");
  }
  layout->gamma.resize(static_cast<std::size_t>(n + 1));
  for (int w : layout->slot_window)
    if (layout->gamma[static_cast<std::size_t>(w)].empty())
      layout->gamma[static_cast<std::size_t>(w)] = enumerate_stopping_times(tree, w, cap);
  layout_ = std::move(layout);
}

EnumeratedStrategy StrategyEnumeration::at(std::uint64_t index) const {
  if (index >= size_) throw std::out_of_range("strategy index");
  std::vector<std::uint32_t> choice;
  for (int w : layout_->slot_window) {
    const auto radix = static_cast<std::uint64_t>(layout_->gamma[static_cast<std::size_t>(w)].size());
    choice.push_back(static_cast<std::uint32_t>(index % radix));
    index /= radix;
  }
  return EnumeratedStrategy(layout_, std::move(choice));
}

bool HistoryTableStrategy::stops(int claim, PayoffHistory history, NodeId node) const {
  auto it = stops_.find({claim, std::vector<PayoffEvent>(history.begin(), history.end())});
  if (it == stops_.end()) return false;
  return std::binary_search(it->second.begin(), it->second.end(), node);
}

void HistoryTableStrategy::set_stop(int claim, const std::vector<PayoffEvent>& history, NodeId node) {
  auto& nodes = stops_[{claim, history}];
  nodes.insert(std::upper_bound(nodes.begin(), nodes.end(), node), node);
}

Json HistoryTableStrategy::to_json() const {
  Json out = Json::array();
  for (const auto& [key, nodes] : stops_) {
    Json hist = Json::array();
    for (const auto& e : key.second) hist.push_back(Json::array({e.level, e.cancelled ? 1 : 0}));
    out.push_back({{"claim", key.first + 1}, {"history", hist}, {"stop_nodes", nodes}});
  }
  return out;
}

namespace {

class StageSolver {
 public:
  StageSolver(const SwingContract& contract, std::uint64_t cap, Execution exec)
      : contract_(contract), tree_(contract.tree()), cap_(cap), exec_(exec) {}

  // (upper, lower) value of claims i..L-1 when claim i's window opens at u.
  std::pair<Rational, Rational> value(int i, NodeId u) {
    const int n = tree_.horizon();
    if (i == contract_.claim_count()) return {};
    if (ScenarioTree::level_of(u) == n) {
      Rational v = contract_.terminal_bundle(i, u);
      return {v, v};
    }
    if (auto it = memo_.find({i, u}); it != memo_.end()) return it->second;
    const auto& opts = options(u);
    const auto probs = conditional_leaf_probs(tree_, u, Measure::martingale);
    const LeafId first = tree_.first_leaf(u);
    const auto span = probs.size();
    // Payoff plus continuation for each leaf, stop level and who stopped first.
    std::vector<std::array<Rational, 2>> up_term(span * static_cast<std::size_t>(n + 1) * 2),
        lo_term(up_term.size());
    auto slot = [&](std::size_t l, int a, int d) {
      return (l * static_cast<std::size_t>(n + 1) + static_cast<std::size_t>(a)) * 2 + static_cast<std::size_t>(d);
    };
    for (std::size_t l = 0; l < span; ++l)
      for (int a = ScenarioTree::level_of(u); a <= n; ++a) {
        const NodeId w = tree_.node_on_path(first + static_cast<LeafId>(l), a);
        std::pair<Rational, Rational> cont =
            a < n ? value(i + 1, tree_.node_on_path(first + static_cast<LeafId>(l), a + 1))
                  : std::pair<Rational, Rational>{contract_.terminal_bundle(i + 1, w), contract_.terminal_bundle(i + 1, w)};
        for (int d = 0; d <= 1; ++d) {
          const Rational pay = d ? contract_.cancel(i)[w] : contract_.exercise(i)[w];
          up_term[slot(l, a, d)] = {pay + cont.first, Rational()};
          lo_term[slot(l, a, d)] = {pay + cont.second, Rational()};
        }
      }
    const auto count = static_cast<std::int64_t>(opts.size());
    std::vector<Rational> row_max(opts.size()), row_min_lower(opts.size() * opts.size());
    // Matrix entry (sigma, tau) for both continuations.
    std::vector<Rational> m_up(opts.size() * opts.size()), m_lo(m_up.size());
    for_each_index(0, count, exec_, [&](std::int64_t s) {
      const auto& sl = opts[static_cast<std::size_t>(s)].leaf_level;
      for (std::size_t t = 0; t < opts.size(); ++t) {
        const auto& tl = opts[t].leaf_level;
        Rational eu, el;
        for (std::size_t l = 0; l < span; ++l) {
          const int a = std::min(sl[l], tl[l]);
          const int d = sl[l] < tl[l] ? 1 : 0;
          eu += probs[l] * up_term[slot(l, a, d)][0];
          el += probs[l] * lo_term[slot(l, a, d)][0];
        }
        m_up[static_cast<std::size_t>(s) * opts.size() + t] = std::move(eu);
        m_lo[static_cast<std::size_t>(s) * opts.size() + t] = std::move(el);
      }
    });
    std::optional<Rational> upper, lower;
    for (std::size_t s = 0; s < opts.size(); ++s) {
      Rational worst = m_up[s * opts.size()];
      for (std::size_t t = 1; t < opts.size(); ++t) worst = max(worst, m_up[s * opts.size() + t]);
      if (!upper || worst < *upper) upper = worst;
    }
    for (std::size_t t = 0; t < opts.size(); ++t) {
      Rational best = m_lo[t];
      for (std::size_t s = 1; s < opts.size(); ++s) best = min(best, m_lo[s * opts.size() + t]);
      if (!lower || best > *lower) lower = best;
    }
    auto result = std::make_pair(*upper, *lower);
    memo_.emplace(std::make_pair(i, u), result);
    return result;
  }

 private:
  const std::vector<LocalOption>& options(NodeId u) {
    auto it = options_.find(u);
    if (it == options_.end()) it = options_.emplace(u, local_options(tree_, u, cap_)).first;
    return it->second;
  }

  const SwingContract& contract_;
  const ScenarioTree& tree_;
  std::uint64_t cap_;
  Execution exec_;
  std::map<std::pair<int, NodeId>, std::pair<Rational, Rational>> memo_;
  std::map<NodeId, std::vector<LocalOption>> options_;
};

// Exact best response of one side against a fixed opponent strategy, with a
// table strategy realizing it.
class Responder {
 public:
  Responder(const SwingContract& contract, const StoppingStrategy& fixed, bool fixed_is_seller, std::uint64_t cap)
      : contract_(contract), tree_(contract.tree()), fixed_(fixed), fixed_is_seller_(fixed_is_seller), cap_(cap),
        table_(contract.horizon(), contract.claim_count()) {}

  Rational run() {
    std::vector<PayoffEvent> h;
    return stage(0, h, 0);
  }
  HistoryTableStrategy take_table() { return std::move(table_); }

 private:
  Rational stage(int i, std::vector<PayoffEvent>& h, NodeId u) {
    const int n = tree_.horizon();
    if (i == contract_.claim_count()) return {};
    if (ScenarioTree::level_of(u) == n) return contract_.terminal_bundle(i, u);
    auto key = std::make_tuple(i, h, u);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    const LeafId first = tree_.first_leaf(u);
    const auto probs = conditional_leaf_probs(tree_, u, Measure::martingale);
    std::vector<int> fixed_level;
    for (std::size_t l = 0; l < probs.size(); ++l)
      fixed_level.push_back(stop_level(tree_, fixed_, i, h, first + static_cast<LeafId>(l)));
    const auto& opts = options(u);
    std::optional<Rational> best;
    std::size_t best_idx = 0;
    for (std::size_t o = 0; o < opts.size(); ++o) {
      Rational total;
      for (std::size_t l = 0; l < probs.size(); ++l) {
        const int s = fixed_is_seller_ ? fixed_level[l] : opts[o].leaf_level[l];
        const int t = fixed_is_seller_ ? opts[o].leaf_level[l] : fixed_level[l];
        const int a = std::min(s, t);
        const LeafId leaf = first + static_cast<LeafId>(l);
        const NodeId w = tree_.node_on_path(leaf, a);
        Rational term = s < t ? contract_.cancel(i)[w] : contract_.exercise(i)[w];
        if (a < n) {
          h.push_back({a, s < t});
          term += stage(i + 1, h, tree_.node_on_path(leaf, a + 1));
          h.pop_back();
        } else {
          term += contract_.terminal_bundle(i + 1, w);
        }
        total += probs[l] * term;
      }
      const bool better = !best || (fixed_is_seller_ ? total > *best : total < *best);
      if (better) {
        best = total;
        best_idx = o;
      }
    }
    for (NodeId v : opts[best_idx].stops) table_.set_stop(i, h, v);
    memo_.emplace(std::move(key), *best);
    return *best;
  }

  const std::vector<LocalOption>& options(NodeId u) {
    auto it = options_.find(u);
    if (it == options_.end()) it = options_.emplace(u, local_options(tree_, u, cap_)).first;
    return it->second;
  }

  const SwingContract& contract_;
  const ScenarioTree& tree_;
  const StoppingStrategy& fixed_;
  bool fixed_is_seller_;
  std::uint64_t cap_;
  HistoryTableStrategy table_;
  std::map<std::tuple<int, std::vector<PayoffEvent>, NodeId>, Rational> memo_;
  std::map<NodeId, std::vector<LocalOption>> options_;
};

}  // namespace

MinMaxValue brute_force_value(const SwingContract& contract, std::uint64_t cap, Execution exec) {
  StageSolver solver(contract, cap, exec);
  auto [upper, lower] = solver.value(0, 0);
  return {upper, lower};
}

MinMaxValue exhaustive_value(const SwingContract& contract, std::uint64_t cap) {
  StrategyEnumeration all(contract.tree(), contract.claim_count(), cap);
  const std::uint64_t n = all.size();
  if (n > cap / n) throw CapExceeded("strategy pairs exceed the cap of " + std::to_string(cap));
  std::vector<EnumeratedStrategy> strategies;
  for (std::uint64_t i = 0; i < n; ++i) strategies.push_back(all.at(i));
  std::vector<Rational> g(n * n);
  for_each_index(0, static_cast<std::int64_t>(n), Execution::parallel, [&](std::int64_t s) {
    for (std::uint64_t b = 0; b < n; ++b)
      g[static_cast<std::size_t>(s) * n + b] =
          game_value(contract, strategies[static_cast<std::size_t>(s)], strategies[b]);
  });
  std::optional<Rational> upper, lower;
  for (std::uint64_t s = 0; s < n; ++s) {
    Rational worst = g[s * n];
    for (std::uint64_t b = 1; b < n; ++b) worst = max(worst, g[s * n + b]);
    if (!upper || worst < *upper) upper = worst;
  }
  for (std::uint64_t b = 0; b < n; ++b) {
    Rational best = g[b];
    for (std::uint64_t s = 1; s < n; ++s) best = min(best, g[s * n + b]);
    if (!lower || best > *lower) lower = best;
  }
  return {*upper, *lower};
}

std::pair<Rational, HistoryTableStrategy> best_buyer_response(const SwingContract& contract,
                                                              const StoppingStrategy& seller, std::uint64_t cap) {
  Responder r(contract, seller, true, cap);
  Rational v = r.run();
  return {v, r.take_table()};
}

std::pair<Rational, HistoryTableStrategy> best_seller_response(const SwingContract& contract,
                                                               const StoppingStrategy& buyer, std::uint64_t cap) {
  Responder r(contract, buyer, false, cap);
  Rational v = r.run();
  return {v, r.take_table()};
}

SaddleCertificate certify_saddle(const SwingContract& contract, const StoppingStrategy& seller,
                                 const StoppingStrategy& buyer, std::uint64_t cap) {
  SaddleCertificate cert;
  cert.value = game_value(contract, seller, buyer);
  auto [buyer_best, buyer_table] = best_buyer_response(contract, seller, cap);
  auto [seller_best, seller_table] = best_seller_response(contract, buyer, cap);
  cert.buyer_best = buyer_best;
  cert.seller_best = seller_best;
  cert.holds = buyer_best <= cert.value && cert.value <= seller_best;
  if (buyer_best > cert.value) {
    cert.witness_role = "buyer";
    cert.witness_value = game_value(contract, seller, buyer_table);
    cert.witness = std::move(buyer_table);
  } else if (seller_best < cert.value) {
    cert.witness_role = "seller";
    cert.witness_value = game_value(contract, seller_table, buyer);
    cert.witness = std::move(seller_table);
  }
  return cert;
}

Json SaddleCertificate::to_json() const {
  Json j;
  j["pass"] = holds;
  j["value"] = value.str();
  j["buyer_best"] = buyer_best.str();
  j["seller_best"] = seller_best.str();
  if (witness) {
    j["witness"] = {{"role", *witness_role}, {"value", witness_value->str()}, {"strategy", witness->to_json()}};
  }
  return j;
}

namespace {

class GridRisk {
 public:
  GridRisk(const SwingContract& contract, int resolution, bool upper)
      : contract_(contract), tree_(contract.tree()), p_(tree_.params().p), r_(resolution), upper_(upper),
        zmax_(contract.max_cancel_sum()) {}

  Rational value(NodeId v, int r, const Rational& y) {
    if (r == 0) return {};
    if (ScenarioTree::level_of(v) == tree_.horizon())
      return positive_part(contract_.terminal_bundle(contract_.claim_count() - r, v) - y);
    auto key = std::make_tuple(v, r, y);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    const int i = contract_.claim_count() - r;
    const Rational ex = payoff(v, r, y - contract_.exercise(i)[v]);
    const Rational ca = payoff(v, r, y - contract_.cancel(i)[v]);
    Rational result = upper_ && ex >= ca ? ex : min(ca, max(ex, carry(v, r, y)));
    memo_.emplace(std::move(key), result);
    return result;
  }

 private:
  Rational up_wealth(const Rational& y, const Rational& theta) const {
    const auto& m = tree_.params();
    return theta * y * (Rational(1) - m.b / m.a);
  }
  Rational down_wealth(const Rational& y, const Rational& theta) const {
    const auto& m = tree_.params();
    return y * (Rational(1) - m.a / m.b) * (Rational(1) - theta);
  }

  // Trading one step with r claims outstanding from wealth y >= 0.
  Rational carry(NodeId v, int r, const Rational& y) {
    if (r == 0) return {};
    const NodeId hi = ScenarioTree::up(v), lo = ScenarioTree::down(v);
    const Rational one_p = Rational(1) - p_;
    std::optional<Rational> best;
    for (int c = 0; c < r_ + (upper_ ? 1 : 0); ++c) {
      const Rational t0(c, r_), t1(c + 1, r_);
      Rational v0 = upper_ ? p_ * value(hi, r, up_wealth(y, t0)) + one_p * value(lo, r, down_wealth(y, t0))
                           : p_ * value(hi, r, up_wealth(y, t1)) + one_p * value(lo, r, down_wealth(y, t0));
      if (!best || v0 < *best) best = std::move(v0);
    }
    return *best;
  }

  // Claim L - r paid at v leaving wealth u; top up by z, then carry r - 1 claims.
  Rational payoff(NodeId v, int r, const Rational& u) {
    const Rational base = positive_part(-u);
    if (r == 1 || zmax_.is_zero()) return base + carry(v, r - 1, u + base);
    std::optional<Rational> best;
    const Rational step = zmax_ / Rational(r_);
    for (int c = 0; c < r_ + (upper_ ? 1 : 0); ++c) {
      const Rational z0 = base + step * Rational(c);
      Rational cost = upper_ ? z0 + carry(v, r - 1, u + z0) : z0 + carry(v, r - 1, u + z0 + step);
      if (!best || cost < *best) best = std::move(cost);
    }
    return *best;
  }

  const SwingContract& contract_;
  const ScenarioTree& tree_;
  Rational p_;
  int r_;
  bool upper_;
  Rational zmax_;
  std::map<std::tuple<NodeId, int, Rational>, Rational> memo_;
};

}  // namespace

RiskBracket grid_risk_oracle(const SwingContract& contract, const Rational& capital, int resolution,
                             std::uint64_t cap) {
  if (resolution < 1) throw std::invalid_argument("grid resolution must be positive");
  if (capital.sign() < 0) throw std::domain_error("capital must be nonnegative");
  // Work grows like resolution^(2 L N); refuse instances beyond the cap.
  std::uint64_t work = 1;
  for (int e = 0; e < 2 * contract.claim_count() * contract.horizon(); ++e)
    work = sat_mul(work, static_cast<std::uint64_t>(resolution + 1));
  if (work > cap) throw CapExceeded("grid risk oracle work exceeds the cap of " + std::to_string(cap));
  GridRisk lo(contract, resolution, false), hi(contract, resolution, true);
  const int claims = contract.claim_count();
  return {lo.value(0, claims, capital), hi.value(0, claims, capital)};
}

Rational portfolio_candidate_min(const PwlFn& up, const PwlFn& down, const Rational& p, const Rational& a,
                                 const Rational& b, const Rational& y) {
  const Rational lo = -y / b, hi = -y / a;
  auto f = [&](const Rational& lam) { return p * up(y + b * lam) + (Rational(1) - p) * down(y + a * lam); };
  Rational best = min(f(lo), f(hi));
  for (const auto& x : up.breakpoints())
    if (Rational lam = (x - y) / b; lo <= lam && lam <= hi) best = min(best, f(lam));
  for (const auto& x : down.breakpoints())
    if (Rational lam = (x - y) / a; lo <= lam && lam <= hi) best = min(best, f(lam));
  return best;
}

Rational portfolio_grid_min(const PwlFn& up, const PwlFn& down, const Rational& p, const Rational& a,
                            const Rational& b, const Rational& y, int steps) {
  const Rational lo = -y / b, width = -y / a - lo;
  std::optional<Rational> best;
  for (int c = 0; c <= steps; ++c) {
    const Rational lam = lo + width * Rational(c, steps);
    Rational v = p * up(y + b * lam) + (Rational(1) - p) * down(y + a * lam);
    if (!best || v < *best) best = std::move(v);
  }
  return *best;
}

Rational infusion_candidate_min(const PwlFn& psi, const Rational& payout, const Rational& y) {
  const Rational base = positive_part(payout - y);
  Rational best = base + psi(y + base - payout);
  for (const auto& x : psi.breakpoints())
    if (Rational z = x + payout - y; z >= base) best = min(best, z + psi(x));
  return best;
}

Rational infusion_grid_min(const PwlFn& psi, const Rational& payout, const Rational& y, int steps) {
  const Rational base = positive_part(payout - y);
  const Rational width = psi(Rational());
  std::optional<Rational> best;
  for (int c = 0; c <= steps; ++c) {
    const Rational z = base + width * Rational(c, steps);
    Rational v = z + psi(y + z - payout);
    if (!best || v < *best) best = std::move(v);
  }
  return *best;
}

}  // namespace swing
