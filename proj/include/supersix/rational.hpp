#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>

#include "supersix/errors.hpp"

namespace supersix {

// Arbitrary-precision fraction. mpq_class keeps values canonical (lowest
// terms, positive denominator) after every arithmetic operation.
using Rational = mpq_class;

inline Rational make_rational(std::int64_t numerator, std::int64_t denominator = 1) {
  if (denominator == 0) throw InvalidArgument("zero denominator");
  Rational r{mpz_class{static_cast<long>(numerator)}, mpz_class{static_cast<long>(denominator)}};
  r.canonicalize();
  return r;
}

// "n/d", or "n" when the denominator is 1.
inline std::string to_string(const Rational& v) { return v.get_str(); }

inline std::string numerator_string(const Rational& v) { return v.get_num().get_str(); }
inline std::string denominator_string(const Rational& v) { return v.get_den().get_str(); }

// Accepts "n", "n/d" and "-n/d". The result is reduced.
inline Rational parse_rational(std::string_view text) {
  if (text.empty()) throw InvalidArgument("empty rational");
  Rational r;
  if (r.set_str(std::string{text}, 10) != 0 || r.get_den() == 0) {
    throw InvalidArgument("malformed rational '" + std::string{text} + "'");
  }
  r.canonicalize();
  return r;
}

inline double to_double(const Rational& v) { return v.get_d(); }

// Fixed-point rendering with `places` fractional digits, rounding half to even.
inline std::string to_decimal(const Rational& v, int places) {
  if (places < 1) throw InvalidArgument("places must be >= 1");
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(places));

  const bool negative = sgn(v) < 0;
  const Rational magnitude = negative ? Rational{-v} : v;
  const mpz_class scaled_num = magnitude.get_num() * scale;
  const mpz_class& den = magnitude.get_den();

  mpz_class q;
  mpz_class r;
  mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), scaled_num.get_mpz_t(), den.get_mpz_t());
  const int cmp_half = cmp(mpz_class{2 * r}, den);
  if (cmp_half > 0 || (cmp_half == 0 && mpz_odd_p(q.get_mpz_t()) != 0)) ++q;

  std::string digits = q.get_str();
  if (digits.size() <= static_cast<std::size_t>(places)) {
    digits.insert(0, static_cast<std::size_t>(places) + 1 - digits.size(), '0');
  }
  digits.insert(digits.size() - static_cast<std::size_t>(places), ".");
  if (negative && q != 0) digits.insert(0, "-");
  return digits;
}

}  // namespace supersix
