#pragma once

// Exact rational scalars and the mixed exact/float scalar used where closed
// forms leave the rationals (analytic atoms, logarithms).

#include <boost/multiprecision/cpp_int.hpp>

#include <cctype>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>

namespace covrel {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Thrown when textual input cannot be read as a number.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Thrown when a symbolic decision would need trig-polynomial identity
/// testing or otherwise leaves the exact tier.
class SymbolicUnavailable : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

inline std::string to_string(const Rational& r) {
  const BigInt num = boost::multiprecision::numerator(r);
  const BigInt den = boost::multiprecision::denominator(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

inline BigInt parse_digits(std::string_view s, std::string_view whole) {
  if (s.empty()) throw ParseError("not a rational: '" + std::string(whole) + "'");
  BigInt v = 0;
  for (char ch : s) {
    if (ch < '0' || ch > '9') throw ParseError("not a rational: '" + std::string(whole) + "'");
    v = v * 10 + (ch - '0');
  }
  return v;
}

inline BigInt pow10(unsigned n) {
  BigInt r = 1;
  for (unsigned i = 0; i < n; ++i) r *= 10;
  return r;
}

// Decimal with optional fraction and exponent, converted exactly.
inline Rational parse_decimal(std::string_view s, std::string_view whole) {
  bool neg = false;
  if (!s.empty() && (s.front() == '+' || s.front() == '-')) {
    neg = s.front() == '-';
    s.remove_prefix(1);
  }
  long exponent = 0;
  if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
    std::string_view ex = s.substr(e + 1);
    s = s.substr(0, e);
    bool eneg = false;
    if (!ex.empty() && (ex.front() == '+' || ex.front() == '-')) {
      eneg = ex.front() == '-';
      ex.remove_prefix(1);
    }
    if (ex.empty() || ex.size() > 6) throw ParseError("bad exponent in '" + std::string(whole) + "'");
    exponent = static_cast<long>(parse_digits(ex, whole).convert_to<long>());
    if (eneg) exponent = -exponent;
  }
  std::string digits;
  if (auto dot = s.find('.'); dot != std::string_view::npos) {
    std::string_view ip = s.substr(0, dot);
    std::string_view fp = s.substr(dot + 1);
    if (ip.empty() && fp.empty()) throw ParseError("not a rational: '" + std::string(whole) + "'");
    digits = std::string(ip) + std::string(fp);
    exponent -= static_cast<long>(fp.size());
  } else {
    digits = std::string(s);
  }
  Rational r(parse_digits(digits, whole));
  if (exponent > 0) r *= pow10(static_cast<unsigned>(exponent));
  if (exponent < 0) r /= pow10(static_cast<unsigned>(-exponent));
  return neg ? Rational(-r) : r;
}

}  // namespace detail

/// Accepts "p/q", integers and decimals ("-0.9", "1.5e-3"); decimals are
/// converted exactly.
inline Rational parse_rational(std::string_view text) {
  const std::string_view s = detail::trim(text);
  if (s.empty()) throw ParseError("empty rational");
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    std::string_view ns = detail::trim(s.substr(0, slash));
    std::string_view ds = detail::trim(s.substr(slash + 1));
    bool neg = false;
    if (!ns.empty() && (ns.front() == '-' || ns.front() == '+')) {
      neg = ns.front() == '-';
      ns.remove_prefix(1);
    }
    const BigInt num = detail::parse_digits(ns, text);
    const BigInt den = detail::parse_digits(ds, text);
    if (den == 0) throw ParseError("zero denominator in '" + std::string(text) + "'");
    Rational r(num, den);
    return neg ? Rational(-r) : r;
  }
  return detail::parse_decimal(s, text);
}

/// A scalar that stays exact while it can and degrades to double otherwise.
class Scalar {
 public:
  static constexpr double kZeroTol = 1e-12;

  Scalar() : v_(Rational(0)) {}
  Scalar(Rational r) : v_(std::move(r)) {}  // NOLINT(google-explicit-constructor)
  Scalar(double d) : v_(d) {}               // NOLINT(google-explicit-constructor)
  Scalar(int i) : v_(Rational(i)) {}        // NOLINT(google-explicit-constructor)

  bool is_exact() const { return std::holds_alternative<Rational>(v_); }
  const Rational& exact() const { return std::get<Rational>(v_); }
  double value() const {
    return is_exact() ? to_double(std::get<Rational>(v_)) : std::get<double>(v_);
  }
  bool is_zero() const {
    return is_exact() ? exact() == 0 : std::abs(std::get<double>(v_)) <= kZeroTol;
  }
  bool equals(const Scalar& o) const {
    if (is_exact() && o.is_exact()) return exact() == o.exact();
    return std::abs(value() - o.value()) <= kZeroTol;
  }

  friend Scalar operator+(const Scalar& a, const Scalar& b) {
    if (a.is_exact() && b.is_exact()) return Scalar(Rational(a.exact() + b.exact()));
    return Scalar(a.value() + b.value());
  }
  friend Scalar operator-(const Scalar& a, const Scalar& b) {
    if (a.is_exact() && b.is_exact()) return Scalar(Rational(a.exact() - b.exact()));
    return Scalar(a.value() - b.value());
  }
  friend Scalar operator*(const Scalar& a, const Scalar& b) {
    if (a.is_exact() && b.is_exact()) return Scalar(Rational(a.exact() * b.exact()));
    return Scalar(a.value() * b.value());
  }

  std::string str() const {
    if (is_exact()) return to_string(exact());
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", std::get<double>(v_));
    return buf;
  }

 private:
  std::variant<Rational, double> v_;
};

}  // namespace covrel
