#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace pbprop {

// Exact rational number, always kept in canonical form (positive
// denominator, numerator and denominator coprime).
class Rational {
public:
  Rational() = default;
  Rational(long value) : q_(value) {} // NOLINT(google-explicit-constructor)
  Rational(long numerator, long denominator);
  explicit Rational(mpq_class q);

  // Parses "p", "p/q" or a decimal literal such as "0.35" or "-1.5".
  // Decimals are read exactly (0.35 == 7/20). Throws InputError.
  static Rational parse(std::string_view text);

  // "p/q", or "p" when the denominator is 1.
  [[nodiscard]] std::string str() const;

  [[nodiscard]] const mpq_class &mpq() const { return q_; }
  [[nodiscard]] int sign() const { return sgn(q_); }
  [[nodiscard]] bool is_zero() const { return sign() == 0; }
  [[nodiscard]] bool is_integer() const;
  // For display only; never used in a decision.
  [[nodiscard]] double approx() const { return q_.get_d(); }

  Rational &operator+=(const Rational &o);
  Rational &operator-=(const Rational &o);
  Rational &operator*=(const Rational &o);
  Rational &operator/=(const Rational &o);

  friend Rational operator+(Rational a, const Rational &b) { return a += b; }
  friend Rational operator-(Rational a, const Rational &b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational &b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational &b) { return a /= b; }
  friend Rational operator-(const Rational &a);

  friend bool operator==(const Rational &a, const Rational &b) {
    return cmp(a.q_, b.q_) == 0;
  }
  friend std::strong_ordering operator<=>(const Rational &a,
                                          const Rational &b) {
    const int c = cmp(a.q_, b.q_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater
                          : std::strong_ordering::equal);
  }

private:
  mpq_class q_;
};

Rational min(const Rational &a, const Rational &b);
Rational max(const Rational &a, const Rational &b);

std::ostream &operator<<(std::ostream &os, const Rational &r);

} // namespace pbprop
