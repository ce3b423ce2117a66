#include "swing/json.hpp"

#include "swing/errors.hpp"

namespace swing {

Json to_json(const Rational& r) { return r.str(); }

Rational rational_from_json(const Json& j, const std::string& what) {
  try {
    if (j.is_string()) return Rational::parse(j.get<std::string>());
    if (j.is_number_integer()) return Rational(j.get<long>());
  } catch (const std::invalid_argument& e) {
    throw SpecError(what + ": " + e.what());
  }
  throw SpecError(what + ": expected a rational string such as \"-1/2\"");
}

Json to_json(const MarketParams& m) {
  Json j;
  j["S0"] = to_json(m.s0);
  j["a"] = to_json(m.a);
  j["b"] = to_json(m.b);
  j["p"] = to_json(m.p);
  j["N"] = m.horizon;
  return j;
}

MarketParams market_from_json(const Json& j) {
  if (!j.is_object()) throw SpecError("model: expected an object with keys S0, a, b, p, N");
  for (const char* key : {"S0", "a", "b", "p", "N"})
    if (!j.contains(key)) throw SpecError(std::string("model: missing key '") + key + "'");
  MarketParams m;
  m.s0 = rational_from_json(j["S0"], "model.S0");
  m.a = rational_from_json(j["a"], "model.a");
  m.b = rational_from_json(j["b"], "model.b");
  m.p = rational_from_json(j["p"], "model.p");
  Rational n = rational_from_json(j["N"], "model.N");
  if (n.denominator() != "1" || n < Rational(1) || Rational(30) < n)
    throw SpecError("model.N must be an integer in 1..30");
  m.horizon = std::stoi(n.numerator());
  m.validate();
  return m;
}

Json to_json(const AdaptedProcess& proc) {
  Json j = Json::array();
  for (const auto& v : proc.values()) j.push_back(v.str());
  return j;
}

}  // namespace swing
