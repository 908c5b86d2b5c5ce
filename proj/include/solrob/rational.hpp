#ifndef SOLROB_RATIONAL_HPP
#define SOLROB_RATIONAL_HPP

#include <boost/multiprecision/cpp_int.hpp>

#include <cctype>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <string_view>

#include "solrob/error.hpp"

namespace solrob {

/// Exact arbitrary precision rational used for costs, weights and objective values.
using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline std::string to_string(const Rational& r) { return r.str(); }

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

inline bool is_integer(const Rational& r) { return denominator(r) == 1; }

/// Converts an integral rational to int64, throwing when it does not fit.
inline std::int64_t to_int64(const Rational& r) {
  if (!is_integer(r)) throw StructuralError("value " + r.str() + " is not an integer");
  const BigInt n = numerator(r);
  if (n > std::numeric_limits<std::int64_t>::max() || n < std::numeric_limits<std::int64_t>::min())
    throw StructuralError("value " + r.str() + " overflows 64-bit integer");
  return n.convert_to<std::int64_t>();
}

inline Rational floor(const Rational& r) {
  BigInt q = numerator(r) / denominator(r);  // truncates toward zero
  if (r < 0 && q * denominator(r) != numerator(r)) q -= 1;
  return Rational(q);
}

inline Rational ceil(const Rational& r) { return -floor(-r); }

/// Parses "12", "-3/4" or "0.05". Returns nullopt for anything else.
inline std::optional<Rational> parse_rational(std::string_view text) {
  if (text.empty()) return std::nullopt;
  std::size_t pos = 0;
  bool negative = false;
  if (text[0] == '-' || text[0] == '+') {
    negative = text[0] == '-';
    pos = 1;
  }
  auto digits = [&](std::size_t from) {
    std::size_t end = from;
    while (end < text.size() && std::isdigit(static_cast<unsigned char>(text[end]))) ++end;
    return end;
  };
  const std::size_t int_end = digits(pos);
  if (int_end == text.size()) {
    if (int_end == pos) return std::nullopt;
    Rational r(BigInt(std::string(text.substr(pos))));
    return negative ? Rational(-r) : r;
  }
  if (text[int_end] == '/') {
    const std::size_t den_end = digits(int_end + 1);
    if (int_end == pos || den_end != text.size() || den_end == int_end + 1) return std::nullopt;
    BigInt num(std::string(text.substr(pos, int_end - pos)));
    BigInt den(std::string(text.substr(int_end + 1)));
    if (den == 0) return std::nullopt;
    Rational r(num, den);
    return negative ? Rational(-r) : r;
  }
  if (text[int_end] == '.') {
    const std::size_t frac_end = digits(int_end + 1);
    if (frac_end != text.size() || (int_end == pos && frac_end == int_end + 1)) return std::nullopt;
    std::string whole(text.substr(pos, int_end - pos));
    std::string frac(text.substr(int_end + 1));
    BigInt num(whole.empty() ? std::string("0") : whole);
    BigInt scale = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
    if (!frac.empty()) num = num * scale + BigInt(frac);
    Rational r(num, scale);
    return negative ? Rational(-r) : r;
  }
  return std::nullopt;
}

/// Best rational approximation of a double with a bounded denominator
/// (continued fractions). Used to turn simplex output into exact values.
inline Rational rationalize(double value, std::int64_t max_denominator = 1000000) {
  if (!std::isfinite(value)) throw NumericalError("cannot rationalize a non-finite value");
  const bool negative = value < 0;
  double x = std::fabs(value);
  BigInt p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  for (int iter = 0; iter < 64; ++iter) {
    const double a_d = std::floor(x);
    if (a_d > 1e15) break;
    const BigInt a(static_cast<long long>(a_d));
    const BigInt p2 = a * p1 + p0;
    const BigInt q2 = a * q1 + q0;
    if (q2 > max_denominator) break;
    p0 = p1; q0 = q1; p1 = p2; q1 = q2;
    const double frac = x - a_d;
    if (frac < 1e-12) break;
    x = 1.0 / frac;
  }
  if (q1 == 0) return Rational(0);
  Rational r(p1, q1);
  return negative ? Rational(-r) : r;
}

}  // namespace solrob

#endif  // SOLROB_RATIONAL_HPP
