#include "evsp/rational.hpp"

#include <cctype>
#include <numeric>
#include <ostream>
#include <stdexcept>

namespace evsp {

namespace {

using i128 = __int128;

std::int64_t narrow(i128 v) {
  if (v > INT64_MAX || v < INT64_MIN) {
    throw std::overflow_error("rational arithmetic overflow");
  }
  return static_cast<std::int64_t>(v);
}

Rational make(i128 num, i128 den) {
  if (den == 0) throw std::domain_error("rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  i128 a = num < 0 ? -num : num;
  i128 b = den;
  while (b != 0) {
    i128 t = a % b;
    a = b;
    b = t;
  }
  if (a > 1) {
    num /= a;
    den /= a;
  }
  return Rational(narrow(num), narrow(den));
}

}  // namespace

Rational::Rational(std::int64_t numerator, std::int64_t denominator) {
  if (denominator == 0) throw std::domain_error("rational with zero denominator");
  if (denominator < 0) {
    numerator = -numerator;
    denominator = -denominator;
  }
  const std::int64_t g = std::gcd(numerator, denominator);
  num_ = g > 1 ? numerator / g : numerator;
  den_ = g > 1 ? denominator / g : denominator;
}

Rational operator+(const Rational& a, const Rational& b) {
  return make(static_cast<i128>(a.num_) * b.den_ + static_cast<i128>(b.num_) * a.den_,
              static_cast<i128>(a.den_) * b.den_);
}

Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }

Rational operator*(const Rational& a, const Rational& b) {
  return make(static_cast<i128>(a.num_) * b.num_, static_cast<i128>(a.den_) * b.den_);
}

Rational operator/(const Rational& a, const Rational& b) {
  if (b.num_ == 0) throw std::domain_error("rational division by zero");
  return make(static_cast<i128>(a.num_) * b.den_, static_cast<i128>(a.den_) * b.num_);
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
  const i128 lhs = static_cast<i128>(a.num_) * b.den_;
  const i128 rhs = static_cast<i128>(b.num_) * a.den_;
  if (lhs < rhs) return std::strong_ordering::less;
  if (lhs > rhs) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

Rational Rational::parse(const std::string& text) {
  auto fail = [&]() -> Rational { throw std::invalid_argument("not a rational number: '" + text + "'"); };
  if (text.empty()) return fail();
  if (const auto slash = text.find('/'); slash != std::string::npos) {
    std::size_t used = 0;
    const auto n = std::stoll(text.substr(0, slash), &used);
    if (used != slash) return fail();
    const std::string rest = text.substr(slash + 1);
    const auto d = std::stoll(rest, &used);
    if (used != rest.size()) return fail();
    return Rational(n, d);
  }
  std::size_t i = 0;
  bool negative = false;
  if (text[i] == '-' || text[i] == '+') {
    negative = text[i] == '-';
    ++i;
  }
  i128 num = 0;
  i128 den = 1;
  bool seen_digit = false;
  bool after_point = false;
  for (; i < text.size(); ++i) {
    const char c = text[i];
    if (c == '.' && !after_point) {
      after_point = true;
      continue;
    }
    if (c == 'e' || c == 'E') {
      // Exponent notation from JSON serialisers, e.g. "1e-05".
      const int exponent = std::stoi(text.substr(i + 1));
      for (int k = 0; k < (exponent < 0 ? -exponent : exponent); ++k) {
        if (exponent < 0) den *= 10; else num *= 10;
      }
      break;
    }
    if (!std::isdigit(static_cast<unsigned char>(c))) return fail();
    seen_digit = true;
    num = num * 10 + (c - '0');
    if (after_point) den *= 10;
    if (num > INT64_MAX || den > INT64_MAX) throw std::overflow_error("rational literal too long: " + text);
  }
  if (!seen_digit) return fail();
  return make(negative ? -num : num, den);
}

bool Rational::has_finite_decimal() const {
  std::int64_t d = den_;
  while (d % 2 == 0) d /= 2;
  while (d % 5 == 0) d /= 5;
  return d == 1;
}

std::string Rational::to_string() const {
  if (den_ == 1) return std::to_string(num_);
  if (!has_finite_decimal()) return std::to_string(num_) + "/" + std::to_string(den_);
  // Scale to a power of ten and print the fixed-point form.
  i128 scale = 1;
  int digits = 0;
  while (scale % den_ != 0) {
    scale *= 10;
    ++digits;
  }
  i128 scaled = static_cast<i128>(num_) * (scale / den_);
  const bool negative = scaled < 0;
  if (negative) scaled = -scaled;
  std::string s;
  for (int k = 0; k < digits || scaled > 0; ++k) {
    s.insert(s.begin(), static_cast<char>('0' + static_cast<int>(scaled % 10)));
    scaled /= 10;
    if (k + 1 == digits) s.insert(s.begin(), '.');
  }
  if (s.front() == '.') s.insert(s.begin(), '0');
  return negative ? "-" + s : s;
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.to_string(); }

}  // namespace evsp
