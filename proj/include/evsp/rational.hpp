#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <string>

namespace evsp {

/// Exact rational number with a positive, reduced denominator.
///
/// Time instants are kept exact so that grid membership and ordering never
/// depend on floating-point rounding.
class Rational {
 public:
  constexpr Rational() = default;
  Rational(std::int64_t numerator, std::int64_t denominator = 1);

  std::int64_t numerator() const { return num_; }
  std::int64_t denominator() const { return den_; }
  bool is_integer() const { return den_ == 1; }
  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

  /// Parses "12", "-3", "7.25" or "1/3".
  static Rational parse(const std::string& text);
  /// Integer, terminating decimal, or "p/q" form; inverse of parse().
  std::string to_string() const;
  /// True when the decimal expansion terminates (denominator 2^a 5^b).
  bool has_finite_decimal() const;

  Rational operator-() const { return Rational(-num_, den_); }
  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a, const Rational& b);
  friend Rational operator*(const Rational& a, const Rational& b);
  friend Rational operator/(const Rational& a, const Rational& b);
  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }

  friend bool operator==(const Rational& a, const Rational& b) = default;
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

std::ostream& operator<<(std::ostream& os, const Rational& r);

/// Times and durations are exact rational minutes.
using Minutes = Rational;

}  // namespace evsp
