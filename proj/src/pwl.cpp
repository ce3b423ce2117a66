#include "swing/pwl.hpp"

#include <algorithm>
#include <optional>
#include <stdexcept>

#include "swing/errors.hpp"

namespace swing {

namespace {

bool collinear(const Rational& x0, const Rational& v0, const Rational& x1, const Rational& v1, const Rational& x2,
               const Rational& v2) {
  return (v1 - v0) * (x2 - x1) == (v2 - v1) * (x1 - x0);
}

void sort_unique(std::vector<Rational>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

}  // namespace

PwlFn PwlFn::from_points(std::vector<Rational> xs, std::vector<Rational> vs) {
  if (xs.empty() || xs.size() != vs.size()) throw std::invalid_argument("pwl: breakpoint/value size mismatch");
  if (!xs.front().is_zero()) throw std::invalid_argument("pwl: first breakpoint must be 0");
  if (!vs.back().is_zero()) throw std::invalid_argument("pwl: last value must be 0");
  for (std::size_t i = 1; i < xs.size(); ++i) {
    if (!(xs[i - 1] < xs[i])) throw std::invalid_argument("pwl: breakpoints must increase strictly");
    if (vs[i] > vs[i - 1]) throw std::invalid_argument("pwl: values must not increase");
  }
  PwlFn f;
  f.xs_.clear();
  f.vs_.clear();
  for (std::size_t i = 0; i < xs.size(); ++i) {
    while (f.xs_.size() >= 2 &&
           collinear(f.xs_[f.xs_.size() - 2], f.vs_[f.vs_.size() - 2], f.xs_.back(), f.vs_.back(), xs[i], vs[i])) {
      f.xs_.pop_back();
      f.vs_.pop_back();
    }
    f.xs_.push_back(std::move(xs[i]));
    f.vs_.push_back(std::move(vs[i]));
  }
  while (f.xs_.size() >= 2 && f.vs_[f.vs_.size() - 2].is_zero()) {
    f.xs_.pop_back();
    f.vs_.pop_back();
  }
  return f;
}

PwlFn PwlFn::hinge(const Rational& c, const Rational& slope) {
  if (c.sign() < 0 || slope.sign() < 0) throw std::invalid_argument("pwl: hinge needs c >= 0 and slope >= 0");
  if (c.is_zero() || slope.is_zero()) return {};
  return from_points({Rational(), c}, {slope * c, Rational()});
}

Rational PwlFn::operator()(const Rational& y) const {
  if (y.sign() < 0) throw std::domain_error("pwl: evaluation at negative argument " + y.str());
  if (y >= xs_.back()) return {};
  auto it = std::upper_bound(xs_.begin(), xs_.end(), y);
  auto i = static_cast<std::size_t>(it - xs_.begin());  // xs_[i-1] <= y < xs_[i]
  const Rational& x0 = xs_[i - 1];
  return vs_[i - 1] + (vs_[i] - vs_[i - 1]) * (y - x0) / (xs_[i] - x0);
}

Rational PwlFn::max_abs_slope() const {
  Rational m;
  for (std::size_t i = 1; i < xs_.size(); ++i) m = max(m, (vs_[i - 1] - vs_[i]) / (xs_[i] - xs_[i - 1]));
  return m;
}

bool PwlFn::is_canonical_member() const {
  if (xs_.empty() || xs_.size() != vs_.size() || !xs_.front().is_zero() || !vs_.back().is_zero()) return false;
  for (std::size_t i = 1; i < xs_.size(); ++i) {
    if (!(xs_[i - 1] < xs_[i]) || vs_[i] > vs_[i - 1]) return false;
    if (i + 1 < xs_.size() && collinear(xs_[i - 1], vs_[i - 1], xs_[i], vs_[i], xs_[i + 1], vs_[i + 1])) return false;
  }
  return xs_.size() == 1 || !vs_[vs_.size() - 2].is_zero();
}

namespace {

template <class Pick>
PwlFn combine(const PwlFn& f, const PwlFn& g, Pick pick) {
  std::vector<Rational> grid = f.breakpoints();
  grid.insert(grid.end(), g.breakpoints().begin(), g.breakpoints().end());
  sort_unique(grid);
  std::vector<Rational> xs;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    xs.push_back(grid[k]);
    if (k + 1 == grid.size()) break;
    Rational d0 = f(grid[k]) - g(grid[k]), d1 = f(grid[k + 1]) - g(grid[k + 1]);
    if (d0.sign() * d1.sign() < 0) xs.push_back(grid[k] + (grid[k + 1] - grid[k]) * d0 / (d0 - d1));
  }
  std::vector<Rational> vs;
  vs.reserve(xs.size());
  for (const auto& x : xs) vs.push_back(pick(f(x), g(x)));
  return PwlFn::from_points(std::move(xs), std::move(vs));
}

}  // namespace

PwlFn pointwise_min(const PwlFn& f, const PwlFn& g) {
  return combine(f, g, [](const Rational& l, const Rational& r) { return min(l, r); });
}

PwlFn pointwise_max(const PwlFn& f, const PwlFn& g) {
  return combine(f, g, [](const Rational& l, const Rational& r) { return max(l, r); });
}

Json to_json(const PwlFn& f) {
  Json j = Json::array();
  for (std::size_t i = 0; i < f.size(); ++i) j.push_back(Json::array({f.breakpoints()[i].str(), f.values()[i].str()}));
  return j;
}

PwlFn pwl_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) throw SpecError("pwl: expected a non-empty list of [x, v] pairs");
  std::vector<Rational> xs, vs;
  for (const auto& pt : j) {
    if (!pt.is_array() || pt.size() != 2) throw SpecError("pwl: each breakpoint must be an [x, v] pair");
    xs.push_back(rational_from_json(pt[0], "pwl.x"));
    vs.push_back(rational_from_json(pt[1], "pwl.v"));
  }
  try {
    return PwlFn::from_points(std::move(xs), std::move(vs));
  } catch (const std::invalid_argument& e) {
    throw SpecError(e.what());
  }
}

PwlControl::PwlControl(std::vector<Rational> ys, std::vector<Rational> at, std::vector<Piece> pieces) {
  if (ys.empty() || ys.size() != at.size() || ys.size() != pieces.size() || !ys.front().is_zero())
    throw std::invalid_argument("pwl control: malformed segment table");
  for (std::size_t i = 0; i < ys.size(); ++i) {
    if (i > 0 && !(ys[i - 1] < ys[i])) throw std::invalid_argument("pwl control: breakpoints must increase");
    // Drop a breakpoint that continues the previous piece exactly.
    if (i > 0 && pieces[i] == pieces_.back() && pieces_.back().at(ys[i]) == at[i]) continue;
    ys_.push_back(std::move(ys[i]));
    at_.push_back(std::move(at[i]));
    pieces_.push_back(std::move(pieces[i]));
  }
}

Rational PwlControl::operator()(const Rational& y) const {
  if (y.sign() < 0) throw std::domain_error("pwl control: evaluation at negative argument " + y.str());
  auto it = std::upper_bound(ys_.begin(), ys_.end(), y);
  auto i = static_cast<std::size_t>(it - ys_.begin()) - 1;
  return ys_[i] == y ? at_[i] : pieces_[i].at(y);
}

Json to_json(const PwlControl& c) {
  Json j = Json::array();
  for (std::size_t i = 0; i < c.breakpoints().size(); ++i)
    j.push_back({{"from", c.breakpoints()[i].str()},
                 {"at", c.point_values()[i].str()},
                 {"slope", c.pieces()[i].slope.str()},
                 {"intercept", c.pieces()[i].intercept.str()}});
  return j;
}

namespace {

// A way of splitting y = s + t between the up and down branches in the
// reparametrized problem min f1(s) + f2(t). Either s is pinned at `shift`
// (f2 moves with y) or t is pinned at `shift` (f1 moves with y).
struct Split {
  Rational start;  // smallest y for which the split is feasible
  bool s_pinned;
  Rational shift;
  Rational fixed;  // value of the pinned function at its pinned argument
};

}  // namespace

PortfolioTransform portfolio_transform(const PwlFn& up, const PwlFn& down, const Rational& p, const Rational& a,
                                       const Rational& b) {
  if (!(a.sign() < 0 && b.sign() > 0 && p.sign() > 0 && p < Rational(1)))
    throw std::invalid_argument("portfolio transform needs a < 0 < b and 0 < p < 1");
  const Rational q = a / (a - b);
  const Rational one_q = Rational(1) - q, one_p = Rational(1) - p;
  // f1(s) = p up(s / q), f2(t) = (1 - p) down(t / (1 - q)), s + t = y, s, t >= 0.
  std::vector<Rational> s_pts, t_pts;
  for (const auto& x : up.breakpoints()) s_pts.push_back(q * x);
  for (const auto& x : down.breakpoints()) t_pts.push_back(one_q * x);
  auto f1 = [&](const Rational& s) { return p * up(s / q); };
  auto f2 = [&](const Rational& t) { return one_p * down(t / one_q); };

  std::vector<Split> splits;
  for (const auto& s : s_pts) splits.push_back({s, true, s, f1(s)});
  for (const auto& t : t_pts) splits.push_back({t, false, t, f2(t)});
  auto value = [&](const Split& c, const Rational& y) {
    return c.s_pinned ? c.fixed + f2(y - c.shift) : c.fixed + f1(y - c.shift);
  };
  auto s_of = [&](const Split& c, const Rational& y) { return c.s_pinned ? c.shift : y - c.shift; };

  // Every split is affine between consecutive sums s_i + t_j, and the order of
  // the s-values of two splits can only change at such a sum.
  std::vector<Rational> events;
  for (const auto& s : s_pts)
    for (const auto& t : t_pts) events.push_back(s + t);
  sort_unique(events);

  std::vector<Rational> xs;
  for (std::size_t k = 0; k + 1 < events.size(); ++k) {
    const Rational &lo = events[k], &hi = events[k + 1];
    xs.push_back(lo);
    struct Line { Rational v0, slope; };
    std::vector<Line> lines;
    for (const auto& c : splits)
      if (c.start <= lo) {
        Rational v0 = value(c, lo);
        lines.push_back({v0, (value(c, hi) - v0) / (hi - lo)});
      }
    // Walk the lower envelope from lo, recording interior kinks.
    std::size_t cur = 0;
    for (std::size_t i = 1; i < lines.size(); ++i)
      if (lines[i].v0 < lines[cur].v0 || (lines[i].v0 == lines[cur].v0 && lines[i].slope < lines[cur].slope)) cur = i;
    Rational at = Rational();  // offset from lo
    const Rational width = hi - lo;
    for (;;) {
      std::optional<std::size_t> next;
      Rational best;
      for (std::size_t i = 0; i < lines.size(); ++i) {
        if (!(lines[i].slope < lines[cur].slope)) continue;
        Rational cross = (lines[i].v0 - lines[cur].v0) / (lines[cur].slope - lines[i].slope);
        if (!(cross > at) || !(cross < width)) continue;
        if (!next || cross < best || (cross == best && lines[i].slope < lines[*next].slope)) {
          next = i;
          best = cross;
        }
      }
      if (!next) break;
      xs.push_back(lo + best);
      at = best;
      cur = *next;
    }
  }
  xs.push_back(events.back());

  auto envelope = [&](const Rational& y) {
    std::optional<Rational> best;
    for (const auto& c : splits)
      if (c.start <= y) {
        Rational v = value(c, y);
        if (!best || v < *best) best = v;
      }
    return *best;
  };
  // Least s among the splits attaining the envelope at y.
  auto least_s = [&](const Rational& y, const Rational& target) {
    std::optional<std::size_t> pick;
    for (std::size_t i = 0; i < splits.size(); ++i)
      if (splits[i].start <= y && value(splits[i], y) == target &&
          (!pick || s_of(splits[i], y) < s_of(splits[*pick], y)))
        pick = i;
    return *pick;
  };
  // alpha = (s / q - y) / b.
  auto alpha_piece = [&](const Split& c) {
    return c.s_pinned ? PwlControl::Piece{Rational(-1) / b, c.shift / (q * b)}
                      : PwlControl::Piece{(Rational(1) / q - Rational(1)) / b, -c.shift / (q * b)};
  };

  std::vector<Rational> vs, at_point;
  std::vector<PwlControl::Piece> pieces;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    Rational v = envelope(xs[k]);
    const Split& here = splits[least_s(xs[k], v)];
    at_point.push_back((s_of(here, xs[k]) / q - xs[k]) / b);
    // Interior sample: midpoint, or one unit beyond the last breakpoint.
    Rational mid = k + 1 < xs.size() ? (xs[k] + xs[k + 1]) / Rational(2) : xs[k] + Rational(1);
    pieces.push_back(alpha_piece(splits[least_s(mid, envelope(mid))]));
    vs.push_back(std::move(v));
  }
  return {PwlFn::from_points(xs, std::move(vs)), PwlControl(std::move(xs), std::move(at_point), std::move(pieces))};
}

InfusionEnvelope::InfusionEnvelope(const PwlFn& psi) {
  // Suffix minimum m(c) = min_{w >= c} h(w) of h(w) = w + psi(w) with the least
  // minimizer w*(c); Phi(u) = m(u) - u and z*(u) = w*(u) - u for u >= 0.
  const auto& x = psi.breakpoints();
  const auto& v = psi.values();
  struct Mark {
    Rational c, m, w;
    bool identity;  // on the open interval to the right, w*(u) = u
    Rational w_const;  // otherwise w*(u) = w_const there
  };
  std::vector<Mark> marks;  // built right to left
  const std::size_t last = x.size() - 1;
  marks.push_back({x[last], x[last], x[last], true, {}});
  Rational big_m = x[last], big_w = x[last];
  for (std::size_t i = last; i-- > 0;) {
    const Rational h0 = x[i] + v[i], h1 = x[i + 1] + v[i + 1];
    const int slope_sign = (h1 - h0).sign();
    if (slope_sign < 0 || (slope_sign == 0 && h1 > big_m)) {
      marks.push_back({x[i], big_m, big_w, false, big_w});
    } else if (slope_sign == 0) {
      marks.push_back({x[i], big_m, x[i], true, {}});
      big_w = x[i];
    } else if (h1 == big_m) {
      marks.push_back({x[i], h0, x[i], true, {}});
      big_m = h0;
      big_w = x[i];
    } else {
      // h rises through big_m at c0 inside or left of the segment.
      Rational c0 = x[i + 1] - (h1 - big_m) * (x[i + 1] - x[i]) / (h1 - h0);
      if (c0 <= x[i]) {
        marks.push_back({x[i], big_m, c0 == x[i] ? x[i] : big_w, false, big_w});
        if (c0 == x[i]) big_w = x[i];
      } else {
        marks.push_back({c0, big_m, c0, false, big_w});
        marks.push_back({x[i], h0, x[i], true, {}});
        big_m = h0;
        big_w = x[i];
      }
    }
  }
  std::reverse(marks.begin(), marks.end());
  std::vector<Rational> cs, phi, z_at;
  std::vector<PwlControl::Piece> pieces;
  for (const auto& mk : marks) {
    cs.push_back(mk.c);
    phi.push_back(mk.m - mk.c);
    z_at.push_back(mk.w - mk.c);
    pieces.push_back(mk.identity ? PwlControl::Piece{} : PwlControl::Piece{Rational(-1), mk.w_const});
  }
  value_ = PwlFn::from_points(cs, std::move(phi));
  amount_ = PwlControl(std::move(cs), std::move(z_at), std::move(pieces));
}

Rational InfusionEnvelope::value(const Rational& u) const {
  return u.sign() >= 0 ? value_(u) : value_(Rational()) - u;
}

Rational InfusionEnvelope::amount(const Rational& u) const {
  return u.sign() >= 0 ? amount_(u) : amount_(Rational()) - u;
}

InfusionTransform InfusionEnvelope::after_payout(const Rational& payout) const {
  if (payout.sign() < 0) throw std::invalid_argument("infusion transform needs a nonnegative payout");
  if (payout.is_zero()) return {value_, amount_};
  // Below A, Phi continues with slope -1 and so does the minimizer.
  std::vector<Rational> xs{Rational()}, vs{value_(Rational()) + payout};
  for (std::size_t i = 0; i < value_.size(); ++i) {
    xs.push_back(value_.breakpoints()[i] + payout);
    vs.push_back(value_.values()[i]);
  }
  const Rational z0 = amount_(Rational()) + payout;
  std::vector<Rational> ys{Rational()}, at{z0};
  std::vector<PwlControl::Piece> pieces{{Rational(-1), z0}};
  for (std::size_t i = 0; i < amount_.breakpoints().size(); ++i) {
    ys.push_back(amount_.breakpoints()[i] + payout);
    at.push_back(amount_.point_values()[i]);
    const auto& pc = amount_.pieces()[i];
    pieces.push_back({pc.slope, pc.intercept - pc.slope * payout});
  }
  return {PwlFn::from_points(std::move(xs), std::move(vs)),
          PwlControl(std::move(ys), std::move(at), std::move(pieces))};
}

InfusionTransform infusion_transform(const PwlFn& psi, const Rational& payout) {
  return InfusionEnvelope(psi).after_payout(payout);
}

}  // namespace swing
