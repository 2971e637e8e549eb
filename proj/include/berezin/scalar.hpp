#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <string>
#include <string_view>

#include "berezin/errors.hpp"

namespace berezin {

/// Exact rational backed by GMP. Expression templates are off so that
/// `auto` and generic code behave like an ordinary value type.
using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                               boost::multiprecision::et_off>;
using BigInt = boost::multiprecision::number<boost::multiprecision::gmp_int,
                                             boost::multiprecision::et_off>;

/// Per-coefficient-type policy: exactness, zero tests, comparison and text IO.
template <typename T>
struct ScalarTraits;

template <>
struct ScalarTraits<Rational> {
  static constexpr bool exact = true;
  static constexpr const char* mode_name = "exact";
  static bool is_zero(const Rational& v) { return v == 0; }
  static bool equal(const Rational& a, const Rational& b) { return a == b; }
  static std::string to_string(const Rational& v) { return v.str(); }
  static Rational from_int(long long v) { return Rational(v); }
  static double to_double(const Rational& v) { return v.convert_to<double>(); }
};

template <>
struct ScalarTraits<double> {
  static constexpr bool exact = false;
  static constexpr const char* mode_name = "float";
  static constexpr double rel_tol = 1e-12;
  static bool is_zero(double v) { return v == 0.0; }
  static bool equal(double a, double b) {
    const double scale = std::max({1.0, std::abs(a), std::abs(b)});
    return std::abs(a - b) <= rel_tol * scale;
  }
  static std::string to_string(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
  }
  static double from_int(long long v) { return static_cast<double>(v); }
  static double to_double(double v) { return v; }
};

template <typename T>
concept Scalar = requires { ScalarTraits<T>::exact; };

/// Coefficient-ring policy used by the Grassmann algebra. Scalars reuse their
/// ScalarTraits; other commutative rings (polynomials) specialize it.
template <typename T>
struct RingTraits;

template <Scalar T>
struct RingTraits<T> {
  static bool is_zero(const T& v) { return ScalarTraits<T>::is_zero(v); }
  static bool equal(const T& a, const T& b) { return ScalarTraits<T>::equal(a, b); }
  static std::string to_string(const T& v) { return ScalarTraits<T>::to_string(v); }
};

namespace detail {

inline BigInt parse_integer(std::string_view s) {
  if (s.empty()) throw ParseError("empty integer");
  std::size_t i = (s[0] == '+' || s[0] == '-') ? 1 : 0;
  if (i == s.size()) throw ParseError("sign without digits in '" + std::string(s) + "'");
  for (std::size_t k = i; k < s.size(); ++k) {
    if (s[k] < '0' || s[k] > '9') throw ParseError("bad digit in '" + std::string(s) + "'");
  }
  // Leading zeros would otherwise select octal.
  std::size_t first = i;
  while (first + 1 < s.size() && s[first] == '0') ++first;
  return BigInt((s[0] == '-' ? "-" : "") + std::string(s.substr(first)));
}

}  // namespace detail

/// Parses "p/q", an integer, or a decimal with optional exponent ("0.25",
/// "-1.5e-2") into an exact rational.
inline Rational parse_rational(std::string_view text) {
  const std::string s(text);
  if (s.empty()) throw ParseError("empty number");
  if (const auto slash = s.find('/'); slash != std::string::npos) {
    BigInt num = detail::parse_integer(std::string_view(s).substr(0, slash));
    BigInt den = detail::parse_integer(std::string_view(s).substr(slash + 1));
    if (den == 0) throw ParseError("zero denominator in '" + s + "'");
    return Rational(num, den);
  }
  std::string mant = s;
  long long exp10 = 0;
  if (const auto e = s.find_first_of("eE"); e != std::string::npos) {
    mant = s.substr(0, e);
    exp10 = static_cast<long long>(detail::parse_integer(std::string_view(s).substr(e + 1)));
  }
  std::string digits = mant;
  if (const auto dot = mant.find('.'); dot != std::string::npos) {
    const std::string frac = mant.substr(dot + 1);
    digits = mant.substr(0, dot) + frac;
    exp10 -= static_cast<long long>(frac.size());
    if (digits.empty() || digits == "-" || digits == "+") throw ParseError("bad decimal '" + s + "'");
  }
  Rational v(detail::parse_integer(digits));
  if (exp10 > 400 || exp10 < -400) throw ParseError("exponent out of range in '" + s + "'");
  Rational scale = 1;
  for (long long k = 0; k < (exp10 < 0 ? -exp10 : exp10); ++k) scale *= 10;
  return exp10 < 0 ? Rational(v / scale) : Rational(v * scale);
}

template <Scalar T>
T parse_scalar(std::string_view text) {
  if constexpr (std::is_same_v<T, Rational>) {
    return parse_rational(text);
  } else {
    return parse_rational(text).template convert_to<double>();
  }
}

template <Scalar T>
std::string to_string(const T& v) {
  return ScalarTraits<T>::to_string(v);
}

}  // namespace berezin
