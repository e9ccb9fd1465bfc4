#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <optional>
#include <string>
#include <string_view>

namespace randeff {

/// Exact rational number. GMP keeps every result in lowest terms with a
/// positive denominator, so structural equality is value equality.
using Rational = boost::multiprecision::mpq_rational;
using BigInt = boost::multiprecision::mpz_int;

/// Parses "a", "a/b" or "-a/b" with decimal digits only. Decimal points,
/// exponents, a zero denominator or stray characters yield nullopt.
inline std::optional<Rational> parse_rational(std::string_view token) {
  if (token.empty()) return std::nullopt;
  std::size_t pos = 0;
  bool negative = false;
  if (token[0] == '-' || token[0] == '+') {
    negative = token[0] == '-';
    pos = 1;
  }
  auto digits = [&](std::size_t from, std::size_t to) {
    if (from >= to) return false;
    for (std::size_t i = from; i < to; ++i) {
      if (token[i] < '0' || token[i] > '9') return false;
    }
    return true;
  };
  std::size_t slash = token.find('/');
  std::size_t num_end = slash == std::string_view::npos ? token.size() : slash;
  if (!digits(pos, num_end)) return std::nullopt;
  BigInt num(std::string(token.substr(pos, num_end - pos)));
  BigInt den(1);
  if (slash != std::string_view::npos) {
    if (!digits(slash + 1, token.size())) return std::nullopt;
    den = BigInt(std::string(token.substr(slash + 1)));
    if (den == 0) return std::nullopt;
  }
  Rational value(num, den);
  return negative ? Rational(-value) : value;
}

/// Canonical text form: "n" for integers, "n/d" otherwise, lowest terms.
inline std::string format_rational(const Rational& value) {
  const auto num = boost::multiprecision::numerator(value);
  const auto den = boost::multiprecision::denominator(value);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

}  // namespace randeff
