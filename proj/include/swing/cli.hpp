#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "swing/oracle.hpp"

namespace swing::cli {

enum class Command { price, strategies, hedge_simulate, risk, risk_curve, verify };
enum class Format { json, csv };

inline constexpr int kExitOk = 0;
inline constexpr int kExitSpec = 1;
inline constexpr int kExitCap = 2;
inline constexpr int kExitInvariant = 3;

struct RunConfig {
  Command command = Command::price;
  std::string input;
  Format format = Format::json;
  std::optional<Rational> capital;   // risk only
  std::uint64_t cap = kDefaultEnumerationCap;
  std::string buyer = "optimal";     // hedge-simulate: optimal | immediate | never | levels:k1,k2,...
  std::optional<int> decimals;       // display rounding
  bool stack = false;                // price: include every node of the value stack
  bool policy = false;               // risk: include the optimal controls
  int samples = 21;                  // risk-curve csv rows
};

std::optional<Command> parse_command(const std::string& name);

// Executes one command; artifacts go to `out`, diagnostics to `err`.
// Returns one of the kExit codes.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace swing::cli
