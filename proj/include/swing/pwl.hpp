#pragma once

#include <vector>

#include "swing/json.hpp"
#include "swing/rational.hpp"

namespace swing {

// Continuous, non-increasing, piecewise-linear function on [0, inf) that is
// identically zero from its last breakpoint on. Canonical: x_0 = 0, no three
// consecutive collinear breakpoints, no trailing zero segment. The zero
// function is the single breakpoint (0, 0).
class PwlFn {
 public:
  PwlFn() : xs_{Rational()}, vs_{Rational()} {}

  // Throws std::invalid_argument unless the points describe a class member;
  // the result is canonicalized.
  static PwlFn from_points(std::vector<Rational> xs, std::vector<Rational> vs);
  // slope * (c - y)^+ for c >= 0, slope >= 0.
  static PwlFn hinge(const Rational& c, const Rational& slope = Rational(1));

  // Throws std::domain_error for y < 0.
  Rational operator()(const Rational& y) const;

  const std::vector<Rational>& breakpoints() const { return xs_; }
  const std::vector<Rational>& values() const { return vs_; }
  std::size_t size() const { return xs_.size(); }
  bool is_zero() const { return xs_.size() == 1; }
  const Rational& support_end() const { return xs_.back(); }
  // Largest |slope| over all segments.
  Rational max_abs_slope() const;

  // Re-checks every class invariant, including canonical form.
  bool is_canonical_member() const;

  friend bool operator==(const PwlFn&, const PwlFn&) = default;

 private:
  std::vector<Rational> xs_, vs_;
};

PwlFn pointwise_min(const PwlFn& f, const PwlFn& g);
PwlFn pointwise_max(const PwlFn& f, const PwlFn& g);

Json to_json(const PwlFn& f);
PwlFn pwl_from_json(const Json& j);

// Piecewise-affine control on [0, inf): a value at each breakpoint plus an
// affine piece on each open interval after it (the last extends to infinity).
class PwlControl {
 public:
  struct Piece {
    Rational slope, intercept;
    Rational at(const Rational& y) const { return intercept + slope * y; }
    friend bool operator==(const Piece&, const Piece&) = default;
  };

  PwlControl() : ys_{Rational()}, at_{Rational()}, pieces_{Piece{}} {}
  PwlControl(std::vector<Rational> ys, std::vector<Rational> at, std::vector<Piece> pieces);

  Rational operator()(const Rational& y) const;
  const std::vector<Rational>& breakpoints() const { return ys_; }
  const std::vector<Rational>& point_values() const { return at_; }
  const std::vector<Piece>& pieces() const { return pieces_; }

  friend bool operator==(const PwlControl&, const PwlControl&) = default;

 private:
  std::vector<Rational> ys_, at_;
  std::vector<Piece> pieces_;
};

Json to_json(const PwlControl& c);

struct PortfolioTransform {
  PwlFn value;
  PwlControl stock;  // least minimizing money in stock alpha(y)
};

// psi(y) = min over alpha in [-y/b, -y/a] of
//   p psi_up(y + b alpha) + (1 - p) psi_down(y + a alpha).
PortfolioTransform portfolio_transform(const PwlFn& up, const PwlFn& down, const Rational& p, const Rational& a,
                                       const Rational& b);

// Phi(u) = min over z >= (-u)^+ of z + psi(u + z), defined for every real u:
// the cost of topping up wealth u (possibly negative after a payoff) and then
// facing psi. Below zero Phi and the least minimizer both move with slope -1.
struct InfusionTransform;

class InfusionEnvelope {
 public:
  InfusionEnvelope() = default;
  explicit InfusionEnvelope(const PwlFn& psi);

  Rational value(const Rational& u) const;
  Rational amount(const Rational& u) const;
  const PwlFn& value_on_nonnegative() const { return value_; }
  const PwlControl& amount_on_nonnegative() const { return amount_; }
  // psi_A(y) = Phi(y - A) on y >= 0 with its least minimizer.
  InfusionTransform after_payout(const Rational& payout) const;

 private:
  PwlFn value_;
  PwlControl amount_;
};

struct InfusionTransform {
  PwlFn value;
  PwlControl infusion;  // least minimizing z(y) >= (A - y)^+
};

// psi_A(y) = min over z >= (A - y)^+ of z + psi(y + z - A).
InfusionTransform infusion_transform(const PwlFn& psi, const Rational& payout);

}  // namespace swing
