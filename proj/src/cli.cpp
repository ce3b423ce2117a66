#include "swing/cli.hpp"

#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>

#include "swing/errors.hpp"
#include "swing/hedge.hpp"
#include "swing/shortfall.hpp"

namespace swing::cli {

namespace {

const Rational kEpsilon(1, 1'000'000);

class Printer {
 public:
  explicit Printer(std::optional<int> decimals) : decimals_(decimals) {}
  std::string operator()(const Rational& r) const { return decimals_ ? r.decimal(*decimals_) : r.str(); }

 private:
  std::optional<int> decimals_;
};

std::string node_path(const ScenarioTree& tree, NodeId v) {
  const int k = ScenarioTree::level_of(v);
  return tree.path_bits(tree.first_leaf(v)).substr(0, static_cast<std::size_t>(k));
}

Json node_json(const ScenarioTree& tree, NodeId v) {
  return {{"node", v}, {"level", ScenarioTree::level_of(v)}, {"path", node_path(tree, v)}};
}

void emit(std::ostream& out, const Json& j) { out << j.dump(2) << '\n'; }

int price_cmd(const RunConfig& cfg, const SwingContract& c, std::ostream& out) {
  Printer fmt(cfg.decimals);
  auto st = price_swing(c);
  const auto& tree = c.tree();
  if (cfg.format == Format::csv) {
    if (cfg.stack) {
      out << "remaining,node,level,path,cancel,exercise,value\n";
      for (int k = 1; k <= st.claim_count(); ++k)
        for (NodeId v = 0; v < tree.node_count(); ++v)
          out << k << ',' << v << ',' << ScenarioTree::level_of(v) << ',' << node_path(tree, v) << ','
              << fmt(st.cancel[k][v]) << ',' << fmt(st.exercise[k][v]) << ',' << fmt(st.value[k][v]) << '\n';
    } else {
      out << "remaining,root_value\n";
      for (int k = 1; k <= st.claim_count(); ++k) out << k << ',' << fmt(st.value[k][0]) << '\n';
    }
    return kExitOk;
  }
  Json j;
  j["price"] = fmt(st.price());
  j["root_values"] = Json::array();
  for (int k = 1; k <= st.claim_count(); ++k) j["root_values"].push_back(fmt(st.value[k][0]));
  if (cfg.stack) {
    j["stack"] = Json::array();
    for (int k = 1; k <= st.claim_count(); ++k) {
      Json level{{"remaining", k}, {"nodes", Json::array()}};
      for (NodeId v = 0; v < tree.node_count(); ++v) {
        Json n = node_json(tree, v);
        n["cancel"] = fmt(st.cancel[k][v]);
        n["exercise"] = fmt(st.exercise[k][v]);
        n["value"] = fmt(st.value[k][v]);
        level["nodes"].push_back(std::move(n));
      }
      j["stack"].push_back(std::move(level));
    }
  }
  emit(out, j);
  return kExitOk;
}

int strategies_cmd(const RunConfig& cfg, const SwingContract& c, std::ostream& out) {
  auto opt = optimal_strategies(price_swing(c));
  const auto& tree = c.tree();
  if (cfg.format == Format::csv) {
    out << "claim,node,level,path,seller,buyer\n";
    for (int i = 0; i < c.claim_count(); ++i)
      for (NodeId v = 0; v < tree.node_count(); ++v)
        out << i + 1 << ',' << v << ',' << ScenarioTree::level_of(v) << ',' << node_path(tree, v) << ','
            << (opt.seller.table(i)[static_cast<std::size_t>(v)] ? "stop" : "continue") << ','
            << (opt.buyer.table(i)[static_cast<std::size_t>(v)] ? "stop" : "continue") << '\n';
    return kExitOk;
  }
  // Each claim's rule starts at the window opened by the previous payoff.
  Json j{{"window", "claim 1 from level 0; claim i+1 from min(N, a_i + 1)"}, {"claims", Json::array()}};
  for (int i = 0; i < c.claim_count(); ++i) {
    Json claim{{"claim", i + 1}, {"seller_stops", Json::array()}, {"buyer_stops", Json::array()}};
    for (NodeId v = 0; v < tree.node_count(); ++v) {
      if (opt.seller.table(i)[static_cast<std::size_t>(v)]) claim["seller_stops"].push_back(node_json(tree, v));
      if (opt.buyer.table(i)[static_cast<std::size_t>(v)]) claim["buyer_stops"].push_back(node_json(tree, v));
    }
    j["claims"].push_back(std::move(claim));
  }
  emit(out, j);
  return kExitOk;
}

std::unique_ptr<StoppingStrategy> buyer_from(const std::string& spec, const SwingContract& c,
                                             const OptimalStrategies& opt) {
  const int n = c.horizon(), l = c.claim_count();
  if (spec == "optimal") return std::make_unique<TableStrategy>(opt.buyer);
  if (spec == "immediate") return std::make_unique<TableStrategy>(TableStrategy::immediate(n, l));
  if (spec == "never") return std::make_unique<TableStrategy>(TableStrategy::never(n, l));
  if (spec.rfind("levels:", 0) == 0) {
    std::vector<int> levels;
    std::stringstream ss(spec.substr(7));
    std::string item;
    while (std::getline(ss, item, ',')) {
      try {
        std::size_t used = 0;
        int k = std::stoi(item, &used);
        if (used != item.size() || k < 0 || k > n) throw std::invalid_argument("range");
        levels.push_back(k);
      } catch (const std::exception&) {
        throw SpecError("buyer levels must be integers in [0, " + std::to_string(n) + "], got '" + item + "'");
      }
    }
    if (static_cast<int>(levels.size()) != l)
      throw SpecError("buyer levels need one entry per claim (" + std::to_string(l) + ")");
    return std::make_unique<FixedLevelStrategy>(n, std::move(levels));
  }
  throw SpecError("unknown buyer '" + spec + "'; expected optimal, immediate, never or levels:k1,...");
}

int hedge_cmd(const RunConfig& cfg, const SwingContract& c, std::ostream& out) {
  Printer fmt(cfg.decimals);
  auto st = price_swing(c);
  auto opt = optimal_strategies(st);
  auto buyer = buyer_from(cfg.buyer, c, opt);
  auto pi = build_perfect_hedge(c, st);
  auto trace = simulate_portfolio(c, pi, opt.seller, *buyer);
  const auto& tree = c.tree();
  if (cfg.format == Format::csv) {
    out << trace.to_csv(tree, cfg.decimals.value_or(-1));
    return kExitOk;
  }
  Json j{{"capital", fmt(pi.initial_capital())}, {"rows", Json::array()}};
  for (LeafId leaf = 0; leaf < tree.leaf_count(); ++leaf)
    for (int k = 0; k <= tree.horizon(); ++k)
      j["rows"].push_back({{"path", tree.path_bits(leaf)}, {"level", k}, {"wealth", fmt(trace.at(leaf, k))}});
  emit(out, j);
  return kExitOk;
}

Json policy_json(const RiskStack& st) {
  const auto& c = st.contract();
  const auto& tree = c.tree();
  Json nodes = Json::array();
  for (NodeId v = 0; v < ScenarioTree::level_begin(c.horizon()); ++v) {
    Json n = node_json(tree, v);
    n["claims"] = Json::array();
    for (int claim = 0; claim < c.claim_count(); ++claim) {
      const int r = c.claim_count() - claim;
      Json e{{"claim", claim + 1}, {"stock_money", to_json(st.stock_control(v, r))}};
      if (r > 1) e["infusion"] = to_json(st.envelope(v, r - 1).amount_on_nonnegative());
      n["claims"].push_back(std::move(e));
    }
    nodes.push_back(std::move(n));
  }
  return nodes;
}

int risk_cmd(const RunConfig& cfg, const SwingContract& c, std::ostream& out) {
  Printer fmt(cfg.decimals);
  const Rational& x = *cfg.capital;
  if (x.sign() < 0) throw SpecError("capital must be nonnegative, got " + x.str());
  auto st = risk_recursion(c);
  const Rational r = shortfall_risk(st, x);
  if (cfg.format == Format::csv) {
    out << "x,risk\n" << fmt(x) << ',' << fmt(r) << '\n';
    return kExitOk;
  }
  Json j{{"x", fmt(x)}, {"risk", fmt(r)}};
  if (cfg.policy) j["policy"] = policy_json(st);
  emit(out, j);
  return kExitOk;
}

int risk_curve_cmd(const RunConfig& cfg, const SwingContract& c, std::ostream& out) {
  Printer fmt(cfg.decimals);
  auto st = risk_recursion(c);
  const PwlFn& curve = st.value(0, c.claim_count());
  if (cfg.format == Format::json) {
    Json j{{"curve", to_json(curve)}};
    if (cfg.decimals) {
      j["curve"] = Json::array();
      for (std::size_t i = 0; i < curve.size(); ++i)
        j["curve"].push_back(Json::array({fmt(curve.breakpoints()[i]), fmt(curve.values()[i])}));
    }
    emit(out, j);
    return kExitOk;
  }
  // Evenly spaced samples over [0, 5/4 of the support end].
  const Rational end = curve.is_zero() ? Rational(1) : curve.support_end() * Rational(5, 4);
  const int n = std::max(cfg.samples, 2);
  out << "x,risk\n";
  for (int i = 0; i < n; ++i) {
    Rational x = end * Rational(i, n - 1);
    out << fmt(x) << ',' << fmt(curve(x)) << '\n';
  }
  return kExitOk;
}

int verify_cmd(const RunConfig& cfg, const SwingContract& c, std::ostream& out) {
  Printer fmt(cfg.decimals);
  auto st = price_swing(c);
  auto opt = optimal_strategies(st);
  Json checks = Json::array();
  bool all = true;
  auto add = [&](const std::string& name, bool pass, Json detail) {
    detail["name"] = name;
    detail["pass"] = pass;
    all = all && pass;
    checks.push_back(std::move(detail));
  };

  auto bf = brute_force_value(c, cfg.cap);
  add("price_matches_oracle", bf.upper == st.price() && bf.lower == st.price(),
      {{"price", fmt(st.price())}, {"minmax", fmt(bf.upper)}, {"maxmin", fmt(bf.lower)}});

  auto saddle = certify_saddle(c, opt.seller, opt.buyer, cfg.cap);
  Json sj = saddle.to_json();
  sj.erase("pass");
  add("saddle_point", saddle.holds, sj);

  bool martingale = true;
  for (int k = 1; k <= st.claim_count(); ++k) {
    auto sol = solve_dynkin(c.tree(), st.cancel[k], st.exercise[k], Measure::martingale);
    martingale = martingale && sol.value == st.value[k] && check_stopped_processes(c.tree(), sol, Measure::martingale).holds();
  }
  add("stopped_value_martingales", martingale, Json::object());

  auto pi = build_perfect_hedge(c, st);
  auto hedge = verify_perfect_hedge(c, pi, opt.seller, cfg.cap);
  add("perfect_hedge", hedge.holds, {{"capital", fmt(pi.initial_capital())}, {"buyer_strategies", hedge.buyer_strategies}});
  if (st.price().sign() > 0) {
    auto reduced = verify_perfect_hedge(c, pi.with_capital(st.price() - kEpsilon), opt.seller, cfg.cap);
    Json detail{{"capital", fmt(st.price() - kEpsilon)}};
    if (reduced.witness) {
      const auto& w = *reduced.witness;
      detail["witness"] = {{"buyer_levels", w.buyer_levels},
                           {"path", c.tree().path_bits(w.leaf)},
                           {"level", w.level},
                           {"wealth", fmt(w.wealth)}};
    }
    add("minimal_capital", !reduced.holds, detail);
  }

  auto risk = risk_recursion(c);
  const Rational at_price = shortfall_risk(risk, st.price());
  Json rd{{"risk_at_price", fmt(at_price)}};
  bool threshold = at_price.is_zero();
  if (st.price().sign() > 0) {
    const Rational below = shortfall_risk(risk, st.price() - kEpsilon);
    rd["risk_below_price"] = fmt(below);
    threshold = threshold && below.sign() > 0;
  }
  add("risk_threshold", threshold, rd);

  emit(out, Json{{"pass", all}, {"checks", checks}});
  return all ? kExitOk : kExitInvariant;
}

}  // namespace

std::optional<Command> parse_command(const std::string& name) {
  if (name == "price") return Command::price;
  if (name == "strategies") return Command::strategies;
  if (name == "hedge-simulate") return Command::hedge_simulate;
  if (name == "risk") return Command::risk;
  if (name == "risk-curve") return Command::risk_curve;
  if (name == "verify") return Command::verify;
  return std::nullopt;
}

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    if (cfg.cap == 0) throw SpecError("enumeration cap must be positive");
    if (cfg.capital.has_value() != (cfg.command == Command::risk))
      throw SpecError(cfg.command == Command::risk ? "risk needs --capital" : "--capital applies to risk only");
    std::ifstream in(cfg.input);
    if (!in) throw SpecError("cannot read '" + cfg.input + "'");
    Json j;
    try {
      j = Json::parse(in);
    } catch (const Json::parse_error& e) {
      throw SpecError(cfg.input + ": malformed JSON: " + e.what());
    }
    const SwingContract contract = build_contract(contract_spec_from_json(j));
    switch (cfg.command) {
      case Command::price: return price_cmd(cfg, contract, out);
      case Command::strategies: return strategies_cmd(cfg, contract, out);
      case Command::hedge_simulate: return hedge_cmd(cfg, contract, out);
      case Command::risk: return risk_cmd(cfg, contract, out);
      case Command::risk_curve: return risk_curve_cmd(cfg, contract, out);
      case Command::verify: return verify_cmd(cfg, contract, out);
    }
    return kExitInvariant;
  } catch (const SpecError& e) {
    err << "error: " << e.what() << '\n';
    return kExitSpec;
  } catch (const CapExceeded& e) {
    err << "error: " << e.what() << '\n';
    return kExitCap;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitInvariant;
  }
}

}  // namespace swing::cli
