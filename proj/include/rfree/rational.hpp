#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>

namespace rfree {

class BigFloat;

/// Parses "p", "-p", "p/q" (q > 0) into a canonical rational.
mpq_class parse_rational(std::string_view text);

/// Canonical "p/q" or "p" form.
std::string format_rational(const mpq_class& value);

/// Best rational approximation with denominator at most `max_denominator`,
/// from the continued fraction expansion of `value` (semiconvergents included).
mpq_class rationalize(const mpq_class& value, const mpz_class& max_denominator);
mpq_class rationalize(double value, const mpz_class& max_denominator);

/// 64-bit mix of a canonical rational; equal values hash equal.
std::uint64_t hash_rational(const mpq_class& value, std::uint64_t seed);

inline std::uint64_t mix64(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebULL;
  x ^= x >> 31;
  return x;
}

}  // namespace rfree
