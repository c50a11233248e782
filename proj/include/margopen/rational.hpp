#ifndef MARGOPEN_RATIONAL_HPP
#define MARGOPEN_RATIONAL_HPP

#include <boost/multiprecision/gmp.hpp>

#include <cstdint>
#include <string>
#include <string_view>

#include "error.hpp"

namespace margopen {

// Expression templates are disabled so `auto x = a + b;` yields a value.
using Integer = boost::multiprecision::number<boost::multiprecision::gmp_int,
                                              boost::multiprecision::et_off>;
using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                               boost::multiprecision::et_off>;

inline Rational make_rational(std::int64_t num, std::int64_t den = 1) {
  if (den == 0) throw Error(ErrorKind::parameter, "zero denominator");
  return Rational(Integer(num), Integer(den));
}

namespace detail {

inline bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (c < '0' || c > '9') return false;
  }
  return true;
}

}  // namespace detail

/// Parses "p/q" or "p" (optional leading '-', decimal digits only).
/// Decimals and exponents are rejected on purpose: values must be exact.
inline Rational parse_rational(std::string_view text) {
  auto fail = [&] {
    return Error(ErrorKind::schema, "not an exact rational: \"" + std::string(text) + "\"");
  };
  std::string_view body = text;
  bool negative = false;
  if (!body.empty() && body.front() == '-') {
    negative = true;
    body.remove_prefix(1);
  }
  auto slash = body.find('/');
  std::string_view num = body.substr(0, slash);
  std::string_view den = slash == std::string_view::npos ? std::string_view("1") : body.substr(slash + 1);
  if (!detail::all_digits(num) || !detail::all_digits(den)) throw fail();
  Integer n{std::string(num)};
  Integer d{std::string(den)};
  if (d == 0) throw fail();
  if (negative) n = -n;
  return Rational(n, d);
}

/// Canonical text form: "p/q" in lowest terms, or "p" for integers.
inline std::string to_string(const Rational& r) {
  const Integer num = boost::multiprecision::numerator(r);
  const Integer den = boost::multiprecision::denominator(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

}  // namespace margopen

#endif  // MARGOPEN_RATIONAL_HPP
