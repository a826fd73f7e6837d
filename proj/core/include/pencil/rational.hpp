#pragma once

#include <compare>
#include <concepts>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace pencil {

/// Exact rational number, always in lowest terms with a positive denominator.
class Rational {
 public:
  Rational() = default;
  template <std::integral I>
  Rational(I n) : v_(static_cast<long>(n)) {}  // NOLINT(google-explicit-constructor)
  Rational(long num, long den);
  explicit Rational(mpq_class v) : v_(std::move(v)) { v_.canonicalize(); }

  /// Parses "p", "-p" or "p/q". Throws Error(Schema) on malformed text or q == 0.
  static Rational parse(std::string_view text);

  bool is_zero() const { return sgn(v_) == 0; }
  int sign() const { return sgn(v_); }
  bool is_integer() const { return v_.get_den() == 1; }
  double to_double() const { return v_.get_d(); }
  std::string str() const { return v_.get_str(); }
  const mpq_class& raw() const { return v_; }

  Rational abs() const { return Rational(::abs(v_)); }
  /// Exact square root when both numerator and denominator are perfect squares.
  std::optional<Rational> exact_sqrt() const;

  Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
  Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
  Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
  Rational& operator/=(const Rational& o);

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
  Rational operator-() const { return Rational(mpq_class(-v_)); }

  friend bool operator==(const Rational& a, const Rational& b) { return cmp(a.v_, b.v_) == 0; }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    const int c = cmp(a.v_, b.v_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

 private:
  mpq_class v_{0};
};

}  // namespace pencil
