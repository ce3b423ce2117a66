#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace swing {

// Malformed or invalid input: bad parameters, payoff tables, JSON.
class SpecError : public std::runtime_error {
 public:
  explicit SpecError(const std::string& what, std::optional<std::int64_t> node = std::nullopt)
      : std::runtime_error(what), node_(node) {}
  std::optional<std::int64_t> node() const { return node_; }

 private:
  std::optional<std::int64_t> node_;
};

// A strategy or rule broke a structural constraint (delay window, infusion floor).
class ContractViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An enumeration would exceed its configured size limit.
class CapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace swing
