#pragma once

#include <json.hpp>

#include "swing/market.hpp"
#include "swing/rational.hpp"

namespace swing {

using Json = nlohmann::ordered_json;

// Rationals travel as strings; integers are accepted on input.
Json to_json(const Rational& r);
Rational rational_from_json(const Json& j, const std::string& what);

Json to_json(const MarketParams& m);
MarketParams market_from_json(const Json& j);

Json to_json(const AdaptedProcess& proc);

}  // namespace swing
