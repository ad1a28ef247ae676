#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>

namespace erw {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

// Two-mode scalar threaded through the moment recursions: either an exact
// rational (kept in lowest terms by cpp_rational) or a double. Arithmetic
// between two rationals stays rational; anything touching a double
// collapses the result to double.
class Numeric {
public:
  Numeric() : v_(Rational(0)) {}
  Numeric(const Rational& r) : v_(r) {}
  Numeric(Rational&& r) : v_(std::move(r)) {}
  Numeric(double d) : v_(d) {}
  Numeric(int i) : v_(Rational(i)) {}
  Numeric(long i) : v_(Rational(i)) {}
  Numeric(long long i) : v_(Rational(i)) {}

  bool is_exact() const { return std::holds_alternative<Rational>(v_); }

  const Rational& rat() const {
    if (!is_exact()) throw std::logic_error("Numeric: float value has no exact form");
    return std::get<Rational>(v_);
  }

  double as_double() const {
    if (is_exact()) return static_cast<double>(std::get<Rational>(v_));
    return std::get<double>(v_);
  }

  friend Numeric operator+(const Numeric& x, const Numeric& y) {
    if (x.is_exact() && y.is_exact()) return Numeric(x.rat() + y.rat());
    return Numeric(x.as_double() + y.as_double());
  }
  friend Numeric operator-(const Numeric& x, const Numeric& y) {
    if (x.is_exact() && y.is_exact()) return Numeric(x.rat() - y.rat());
    return Numeric(x.as_double() - y.as_double());
  }
  friend Numeric operator*(const Numeric& x, const Numeric& y) {
    if (x.is_exact() && y.is_exact()) return Numeric(x.rat() * y.rat());
    return Numeric(x.as_double() * y.as_double());
  }
  friend Numeric operator/(const Numeric& x, const Numeric& y) {
    if (x.is_exact() && y.is_exact()) {
      if (y.rat() == 0) throw std::domain_error("Numeric: division by zero");
      return Numeric(x.rat() / y.rat());
    }
    return Numeric(x.as_double() / y.as_double());
  }
  Numeric operator-() const {
    if (is_exact()) return Numeric(Rational(-rat()));
    return Numeric(-as_double());
  }
  Numeric& operator+=(const Numeric& y) { *this = *this + y; return *this; }
  Numeric& operator-=(const Numeric& y) { *this = *this - y; return *this; }
  Numeric& operator*=(const Numeric& y) { *this = *this * y; return *this; }
  Numeric& operator/=(const Numeric& y) { *this = *this / y; return *this; }

  // Equality is exact-vs-exact bitwise rational comparison, or double ==.
  friend bool operator==(const Numeric& x, const Numeric& y) {
    if (x.is_exact() && y.is_exact()) return x.rat() == y.rat();
    return x.as_double() == y.as_double();
  }
  friend bool operator!=(const Numeric& x, const Numeric& y) { return !(x == y); }
  friend bool operator<(const Numeric& x, const Numeric& y) {
    if (x.is_exact() && y.is_exact()) return x.rat() < y.rat();
    return x.as_double() < y.as_double();
  }
  friend bool operator>(const Numeric& x, const Numeric& y) { return y < x; }
  friend bool operator<=(const Numeric& x, const Numeric& y) { return !(y < x); }
  friend bool operator>=(const Numeric& x, const Numeric& y) { return !(x < y); }

  // Rationals print as "num/den" ("num" when the denominator is 1);
  // doubles with enough digits to round-trip.
  std::string str() const {
    std::ostringstream os;
    if (is_exact()) {
      os << rat();
    } else {
      os.precision(17);
      os << as_double();
    }
    return os.str();
  }

private:
  std::variant<Rational, double> v_;
};

// Parses "3", "-7/2" as exact rationals and anything else as a double.
// Used by the CLI so that fraction-shaped inputs route to exact mode.
inline Numeric parse_numeric(const std::string& text) {
  bool fractional = !text.empty();
  bool seen_slash = false;
  for (std::size_t i = 0; i < text.size() && fractional; ++i) {
    char c = text[i];
    if (c == '-' || c == '+') {
      if (i != 0) fractional = false;
    } else if (c == '/') {
      if (seen_slash || i == 0 || i + 1 == text.size()) fractional = false;
      seen_slash = true;
    } else if (c < '0' || c > '9') {
      fractional = false;
    }
  }
  if (fractional) {
    try {
      return Numeric(Rational(text));
    } catch (const std::exception&) {
      throw std::invalid_argument("not a valid rational: '" + text + "'");
    }
  }
  std::size_t pos = 0;
  double d;
  try {
    d = std::stod(text, &pos);
  } catch (const std::exception&) {
    throw std::invalid_argument("not a number: '" + text + "'");
  }
  if (pos != text.size())
    throw std::invalid_argument("not a number: '" + text + "'");
  return Numeric(d);
}

// Exact binomial coefficient as a rational (numerator an integer).
inline Rational rational_binom(long n, long k) {
  if (k < 0 || k > n) return Rational(0);
  if (k > n - k) k = n - k;
  BigInt num = 1, den = 1;
  for (long i = 0; i < k; ++i) {
    num *= (n - i);
    den *= (i + 1);
  }
  return Rational(num) / Rational(den);
}

} // namespace erw
