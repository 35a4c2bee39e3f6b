#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <span>
#include <string>
#include <string_view>

#include "circlesim/errors.hpp"

namespace circlesim {

using Rational = mpq_class;
using Integer = mpz_class;

/// Parses "p/q", "p" or "-p/q". The result is canonicalized.
inline Rational parse_rational(std::string_view text) {
  std::string s(text);
  auto first = s.find_first_not_of(" \t");
  auto last = s.find_last_not_of(" \t");
  if (first == std::string::npos) throw ParseError("empty rational");
  s = s.substr(first, last - first + 1);
  Rational r;
  if (r.set_str(s, 10) != 0) throw ParseError("malformed rational '" + s + "'");
  if (r.get_den() == 0) throw ParseError("zero denominator in '" + s + "'");
  r.canonicalize();
  return r;
}

inline std::string to_string(const Rational& r) { return r.get_str(); }

/// Decimal rendering for display; truncated to `digits` fractional digits.
inline std::string to_decimal(const Rational& r, int digits = 12) {
  Integer scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(digits));
  Rational scaled = abs(r) * scale;
  Integer q = scaled.get_num() / scaled.get_den();
  Rational rounded_up_part = scaled - Rational(q);
  if (rounded_up_part * 2 >= 1) q += 1;
  Integer whole = q / scale;
  Integer frac = q % scale;
  std::string fs = frac.get_str();
  if (static_cast<int>(fs.size()) < digits) fs.insert(0, digits - fs.size(), '0');
  std::string out = (r < 0 && q != 0 ? "-" : "") + whole.get_str();
  if (digits > 0) out += "." + fs;
  return out;
}

/// num/den in canonical form.
inline Rational ratio(const Integer& num, const Integer& den) {
  if (den == 0) throw DomainError("zero denominator");
  Rational r(num, den);
  r.canonicalize();
  return r;
}

inline Rational ratio(std::size_t num, std::size_t den) {
  return ratio(Integer(static_cast<unsigned long>(num)), Integer(static_cast<unsigned long>(den)));
}

/// 2^k as an exact rational; k may be negative.
inline Rational pow2(long k) {
  Integer p;
  mpz_ui_pow_ui(p.get_mpz_t(), 2, static_cast<unsigned long>(k < 0 ? -k : k));
  return k < 0 ? Rational(Integer(1), p) : Rational(p);
}

inline Integer lcm(const Integer& a, const Integer& b) {
  Integer r;
  mpz_lcm(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

/// Least common denominator of the given rationals (1 for an empty span).
inline Integer common_denominator(std::span<const Rational> values) {
  Integer d = 1;
  for (const auto& v : values) d = lcm(d, v.get_den());
  return d;
}

/// Fits a nonnegative Integer into size_t or throws.
inline std::size_t to_size(const Integer& v, const char* what) {
  if (v < 0 || !v.fits_ulong_p()) throw DomainError(std::string(what) + " too large");
  return static_cast<std::size_t>(v.get_ui());
}

inline Rational floor_frac(const Rational& x) {
  Integer f;
  mpz_fdiv_q(f.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  return x - Rational(f);
}

}  // namespace circlesim
