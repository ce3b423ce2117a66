#include "swing/contract.hpp"

#include <fstream>
#include <sstream>

#include "swing/errors.hpp"

namespace swing {

namespace {

std::string node_label(NodeId v) {
  int k = ScenarioTree::level_of(v);
  std::string bits;
  for (int level = 1; level <= k; ++level)
    bits += ScenarioTree::is_up_child(ScenarioTree::ancestor(v, level)) ? '1' : '0';
  return "node " + std::to_string(v) + " (level " + std::to_string(k) + ", path '" + bits + "')";
}

AdaptedProcess exercise_process(const ExerciseSpec& spec, const ScenarioTree& tree, int claim) {
  AdaptedProcess y(tree.horizon());
  if (spec.kind == ExerciseSpec::Kind::table) {
    if (static_cast<NodeId>(spec.values.size()) != tree.node_count())
      throw SpecError("claim " + std::to_string(claim + 1) + ": exercise table needs " +
                      std::to_string(tree.node_count()) + " values, got " +
                      std::to_string(spec.values.size()));
    for (NodeId v = 0; v < tree.node_count(); ++v) y[v] = spec.values[static_cast<std::size_t>(v)];
    return y;
  }
  for (NodeId v = 0; v < tree.node_count(); ++v)
    y[v] = positive_part(spec.kind == ExerciseSpec::Kind::call ? tree.price(v) - spec.strike
                                                               : spec.strike - tree.price(v));
  return y;
}

Rational max_of(const AdaptedProcess& f) {
  Rational m = f[0];
  for (const auto& v : f.values()) m = max(m, v);
  return m;
}

}  // namespace

SwingContract::SwingContract(std::shared_ptr<const ScenarioTree> tree, std::vector<ClaimPayoffs> claims)
    : tree_(std::move(tree)), claims_(std::move(claims)) {
  if (!tree_) throw SpecError("contract needs a tree");
  if (claims_.empty()) throw SpecError("contract needs at least one claim");
  for (std::size_t i = 0; i < claims_.size(); ++i) {
    const auto& c = claims_[i];
    std::string who = "claim " + std::to_string(i + 1);
    if (c.exercise.horizon() != tree_->horizon() || c.cancel.horizon() != tree_->horizon())
      throw SpecError(who + ": payoff process horizon does not match the tree");
    for (NodeId v = 0; v < tree_->node_count(); ++v) {
      if (c.exercise[v].sign() < 0)
        throw SpecError(who + ": negative exercise payoff " + c.exercise[v].str() + " at " +
                            node_label(v), v);
      if (c.cancel[v] < c.exercise[v])
        throw SpecError(who + ": cancellation payoff " + c.cancel[v].str() + " below exercise payoff " +
                            c.exercise[v].str() + " at " + node_label(v), v);
    }
  }
}

Rational SwingContract::payoff_at(int i, int m, int n, NodeId node) const {
  if (i < 0 || i >= claim_count()) throw std::out_of_range("claim index " + std::to_string(i));
  if (ScenarioTree::level_of(node) != std::min(m, n))
    throw std::invalid_argument("payoff node must lie at level min(m, n)");
  return m < n ? cancel(i)[node] : exercise(i)[node];
}

Rational SwingContract::terminal_bundle(int first, NodeId node) const {
  Rational total;
  for (int i = first; i < claim_count(); ++i) total += exercise(i)[node];
  return total;
}

Rational SwingContract::max_cancel_sum() const {
  Rational total;
  for (const auto& c : claims_) total += max_of(c.cancel);
  return total;
}

SwingContract build_contract(const std::vector<ClaimSpec>& specs, std::shared_ptr<const ScenarioTree> tree) {
  if (!tree) throw SpecError("contract needs a tree");
  if (specs.empty()) throw SpecError("contract needs at least one claim");
  const int n = tree->horizon();
  std::vector<ClaimPayoffs> claims;
  std::vector<Rational> finite_max;
  for (std::size_t i = 0; i < specs.size(); ++i) {
    const auto& spec = specs[i];
    ClaimPayoffs c{exercise_process(spec.exercise, *tree, static_cast<int>(i)), AdaptedProcess(n)};
    std::string who = "claim " + std::to_string(i + 1);
    switch (spec.penalty.kind) {
      case PenaltySpec::Kind::constant:
      case PenaltySpec::Kind::proportional:
        for (NodeId v = 0; v < tree->node_count(); ++v) {
          Rational delta;
          if (ScenarioTree::level_of(v) < n)
            delta = spec.penalty.kind == PenaltySpec::Kind::constant ? spec.penalty.value
                                                                     : spec.penalty.value * tree->price(v);
          c.cancel[v] = c.exercise[v] + delta;
        }
        break;
      case PenaltySpec::Kind::table:
        if (static_cast<NodeId>(spec.penalty.values.size()) != tree->node_count())
          throw SpecError(who + ": penalty table needs " + std::to_string(tree->node_count()) + " values");
        for (NodeId v = 0; v < tree->node_count(); ++v)
          c.cancel[v] = c.exercise[v] + spec.penalty.values[static_cast<std::size_t>(v)];
        break;
      case PenaltySpec::Kind::infinite:
        c.cancel = c.exercise;  // filled below once every finite claim is known
        break;
    }
    finite_max.push_back(max_of(c.cancel));
    claims.push_back(std::move(c));
  }
  // The proxy exceeds every total the seller could owe without cancelling it.
  Rational proxy(1);
  for (const auto& m : finite_max) proxy += m;
  for (std::size_t i = 0; i < specs.size(); ++i) {
    if (specs[i].penalty.kind != PenaltySpec::Kind::infinite) continue;
    Rational delta = specs[i].penalty.has_value ? specs[i].penalty.value : proxy;
    for (NodeId v = 0; v < tree->level_begin(n); ++v) claims[i].cancel[v] = claims[i].exercise[v] + delta;
  }
  return SwingContract(std::move(tree), std::move(claims));
}

SwingContract build_contract(const ContractSpec& spec) {
  return build_contract(spec.claims, std::make_shared<const ScenarioTree>(spec.model));
}

namespace {

std::vector<Rational> table_from_json(const Json& j, const std::string& what) {
  if (!j.contains("values") || !j["values"].is_array()) throw SpecError(what + ": table needs a 'values' array");
  std::vector<Rational> out;
  for (std::size_t v = 0; v < j["values"].size(); ++v)
    out.push_back(rational_from_json(j["values"][v], what + ".values[" + std::to_string(v) + "]"));
  return out;
}

std::string kind_of(const Json& j, const std::string& what) {
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string())
    throw SpecError(what + ": expected an object with a string 'kind'");
  return j["kind"].get<std::string>();
}

}  // namespace

ContractSpec contract_spec_from_json(const Json& j) {
  if (!j.is_object()) throw SpecError("contract: expected a JSON object");
  if (!j.contains("model")) throw SpecError("contract: missing 'model'");
  if (!j.contains("claims") || !j["claims"].is_array() || j["claims"].empty())
    throw SpecError("contract: 'claims' must be a non-empty array");
  ContractSpec spec;
  spec.model = market_from_json(j["model"]);
  for (std::size_t i = 0; i < j["claims"].size(); ++i) {
    const Json& c = j["claims"][i];
    std::string who = "claims[" + std::to_string(i) + "]";
    if (!c.is_object() || !c.contains("exercise"))
      throw SpecError(who + ": missing 'exercise'");
    ClaimSpec claim;
    const Json& ex = c["exercise"];
    std::string ek = kind_of(ex, who + ".exercise");
    if (ek == "call" || ek == "put") {
      claim.exercise.kind = ek == "call" ? ExerciseSpec::Kind::call : ExerciseSpec::Kind::put;
      if (!ex.contains("strike")) throw SpecError(who + ".exercise: missing 'strike'");
      claim.exercise.strike = rational_from_json(ex["strike"], who + ".exercise.strike");
    } else if (ek == "table") {
      claim.exercise.kind = ExerciseSpec::Kind::table;
      claim.exercise.values = table_from_json(ex, who + ".exercise");
    } else {
      throw SpecError(who + ".exercise: unknown kind '" + ek + "'");
    }
    Json pen = c.contains("penalty") ? c["penalty"] : Json{{"kind", "constant"}, {"value", "0"}};
    std::string pk = kind_of(pen, who + ".penalty");
    if (pk == "constant" || pk == "proportional") {
      claim.penalty.kind = pk == "constant" ? PenaltySpec::Kind::constant : PenaltySpec::Kind::proportional;
      if (!pen.contains("value")) throw SpecError(who + ".penalty: missing 'value'");
      claim.penalty.value = rational_from_json(pen["value"], who + ".penalty.value");
      if (claim.penalty.value.sign() < 0)
        throw SpecError(who + ".penalty: negative penalty " + claim.penalty.value.str() +
                        " would put the cancellation payoff below the exercise payoff");
    } else if (pk == "table") {
      claim.penalty.kind = PenaltySpec::Kind::table;
      claim.penalty.values = table_from_json(pen, who + ".penalty");
    } else if (pk == "infinite") {
      claim.penalty.kind = PenaltySpec::Kind::infinite;
      if (pen.contains("value")) {
        claim.penalty.has_value = true;
        claim.penalty.value = rational_from_json(pen["value"], who + ".penalty.value");
        if (claim.penalty.value.sign() < 0) throw SpecError(who + ".penalty: negative proxy value");
      }
    } else {
      throw SpecError(who + ".penalty: unknown kind '" + pk + "'");
    }
    spec.claims.push_back(std::move(claim));
  }
  return spec;
}

Json to_json(const ContractSpec& spec) {
  Json j;
  j["model"] = to_json(spec.model);
  j["claims"] = Json::array();
  for (const auto& c : spec.claims) {
    Json ex;
    switch (c.exercise.kind) {
      case ExerciseSpec::Kind::call: ex = {{"kind", "call"}, {"strike", c.exercise.strike.str()}}; break;
      case ExerciseSpec::Kind::put: ex = {{"kind", "put"}, {"strike", c.exercise.strike.str()}}; break;
      case ExerciseSpec::Kind::table: {
        ex = {{"kind", "table"}, {"values", Json::array()}};
        for (const auto& v : c.exercise.values) ex["values"].push_back(v.str());
        break;
      }
    }
    Json pen;
    switch (c.penalty.kind) {
      case PenaltySpec::Kind::constant: pen = {{"kind", "constant"}, {"value", c.penalty.value.str()}}; break;
      case PenaltySpec::Kind::proportional: pen = {{"kind", "proportional"}, {"value", c.penalty.value.str()}}; break;
      case PenaltySpec::Kind::table: {
        pen = {{"kind", "table"}, {"values", Json::array()}};
        for (const auto& v : c.penalty.values) pen["values"].push_back(v.str());
        break;
      }
      case PenaltySpec::Kind::infinite:
        pen = {{"kind", "infinite"}};
        if (c.penalty.has_value) pen["value"] = c.penalty.value.str();
        break;
    }
    j["claims"].push_back({{"exercise", ex}, {"penalty", pen}});
  }
  return j;
}

SwingContract load_contract(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SpecError("cannot read contract file '" + path + "'");
  Json j;
  try {
    j = Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw SpecError("contract file '" + path + "' is not valid JSON: " + e.what());
  }
  return build_contract(contract_spec_from_json(j));
}

SwingContract zero_contract(std::shared_ptr<const ScenarioTree> tree, int claims) {
  const int n = tree->horizon();
  std::vector<ClaimPayoffs> c(static_cast<std::size_t>(claims), ClaimPayoffs{AdaptedProcess(n), AdaptedProcess(n)});
  return SwingContract(std::move(tree), std::move(c));
}

}  // namespace swing
