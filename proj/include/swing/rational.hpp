#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace swing {

// Exact rational number in lowest terms with a positive denominator.
class Rational {
 public:
  Rational() = default;
  Rational(long value) : q_(value) {}  // NOLINT(google-explicit-constructor)
  Rational(long num, long den);
  explicit Rational(mpq_class q) : q_(std::move(q)) { q_.canonicalize(); }

  // Accepts "n", "n/d" and finite decimals such as "-0.125".
  static Rational parse(std::string_view text);

  // "n/d", or "n" when the denominator is 1.
  std::string str() const;
  // Rounded to `digits` places after the point, for display only.
  std::string decimal(int digits) const;

  const mpq_class& raw() const { return q_; }
  int sign() const { return sgn(q_); }
  bool is_zero() const { return sign() == 0; }
  Rational abs() const { return Rational(::abs(q_)); }
  std::string numerator() const { return q_.get_num().get_str(); }
  std::string denominator() const { return q_.get_den().get_str(); }

  Rational& operator+=(const Rational& o) { q_ += o.q_; return *this; }
  Rational& operator-=(const Rational& o) { q_ -= o.q_; return *this; }
  Rational& operator*=(const Rational& o) { q_ *= o.q_; return *this; }
  Rational& operator/=(const Rational& o);

  friend Rational operator+(Rational l, const Rational& r) { return l += r; }
  friend Rational operator-(Rational l, const Rational& r) { return l -= r; }
  friend Rational operator*(Rational l, const Rational& r) { return l *= r; }
  friend Rational operator/(Rational l, const Rational& r) { return l /= r; }
  friend Rational operator-(const Rational& v) { return Rational(mpq_class(-v.q_)); }

  friend bool operator==(const Rational& l, const Rational& r) { return cmp(l.q_, r.q_) == 0; }
  friend std::strong_ordering operator<=>(const Rational& l, const Rational& r) {
    return cmp(l.q_, r.q_) <=> 0;
  }

 private:
  mpq_class q_;
};

inline Rational positive_part(const Rational& v) { return v.sign() > 0 ? v : Rational(); }
inline const Rational& min(const Rational& a, const Rational& b) { return b < a ? b : a; }
inline const Rational& max(const Rational& a, const Rational& b) { return a < b ? b : a; }

}  // namespace swing
