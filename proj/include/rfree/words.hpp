#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <gmpxx.h>

#include "rfree/rational_matrix.hpp"

namespace rfree {

class GroupSpec;

/// A letter from the coefficient group.
struct Coefficient {
  RationalMatrix element;
  /// Word over the generator alphabet, e.g. "a.b^-1"; informational only.
  std::optional<std::string> label;
};

/// x^k with k != 0.
struct Power {
  long k = 0;
};

using Syllable = std::variant<Coefficient, Power>;

bool is_power(const Syllable& s);
bool same_syllable(const Syllable& a, const Syllable& b);

/// Element of the free product of the coefficient group with <x>, in normal
/// form: syllables alternate between coefficients and powers.
class Word {
 public:
  Word() = default;
  const std::vector<Syllable>& syllables() const { return syllables_; }
  std::size_t size() const { return syllables_.size(); }
  bool trivial() const { return syllables_.empty(); }
  bool starts_with_power() const { return !trivial() && is_power(syllables_.front()); }
  bool ends_with_power() const { return !trivial() && is_power(syllables_.back()); }

  friend bool operator==(const Word& a, const Word& b);
  friend Word normalize(std::vector<Syllable> raw, std::size_t dim);

 private:
  std::vector<Syllable> syllables_;
};

/// Merges adjacent powers and adjacent coefficients, drops zero powers and
/// identity coefficients, until the list alternates. Throws DimensionError
/// if a coefficient has the wrong size.
Word normalize(std::vector<Syllable> raw, std::size_t dim);
Word normalize(std::vector<Syllable> raw, const GroupSpec& spec);

/// Normal form of the concatenation w1 w2.
Word concat(const Word& w1, const Word& w2, std::size_t dim);

/// w(gamma): substitute gamma for x and multiply left to right, exactly.
RationalMatrix evaluate(const Word& w, const RationalMatrix& gamma);

/// Conjugate of w by a power of x that starts and ends with a power:
///   power ... power        unchanged
///   coeff ... x^k          x^(-sgn k) w x^(sgn k)
///   x^k ... coeff          x^(sgn k) w x^(-sgn k)
///   coeff ... coeff        x^-1 w x
/// Throws std::invalid_argument on the trivial word.
Word boundary_conjugate(const Word& w);

/// Text form: syllables joined by '*', coefficients as {label} or an inline
/// matrix literal, powers as x^k; the trivial word is "e".
std::string to_text(const Word& w);
/// Inverse of to_text. Labels are resolved through the spec; inline
/// matrices must have the spec's dimension.
Word parse_word(const std::string& text, const GroupSpec& spec);

/// Deterministic enumeration of all non-trivial normal-form words with at
/// most `max_syllables` syllables, coefficients from a fixed list and
/// exponents 0 < |k| <= max_power.
///
/// Syllable alphabet: the coefficients in the given order, then x, x^-1,
/// x^2, x^-2, ... Words are ordered by syllable count, then
/// lexicographically by alphabet index.
class WordEnumerator {
 public:
  WordEnumerator(std::vector<Coefficient> coeffs, int max_syllables, int max_power);

  std::size_t coefficient_count() const { return coeffs_.size(); }
  std::size_t power_count() const { return static_cast<std::size_t>(2 * max_power_); }
  std::size_t alphabet_size() const { return coefficient_count() + power_count(); }
  int max_syllables() const { return max_syllables_; }
  int max_power() const { return max_power_; }
  const std::vector<Coefficient>& coefficients() const { return coeffs_; }

  bool is_power_index(std::size_t index) const { return index >= coeffs_.size(); }
  /// Exponent of a power index: x^1, x^-1, x^2, x^-2, ...
  long exponent(std::size_t index) const;
  Syllable syllable(std::size_t index) const;
  Word word(const std::vector<std::size_t>& indices) const;

  /// Words with exactly s syllables.
  mpz_class count_with(int syllables) const;
  /// All words within the budgets.
  mpz_class count() const;
  /// 1-based position of an index sequence in the enumeration order.
  mpz_class rank(const std::vector<std::size_t>& indices) const;

  /// Calls `visit` on every index sequence in order; stops when it returns false.
  void for_each(const std::function<bool(const std::vector<std::size_t>&)>& visit) const;

 private:
  std::vector<Coefficient> coeffs_;
  int max_syllables_;
  int max_power_;
};

/// Closed-form count for m coefficients, s syllables and P = 2K powers.
mpz_class word_count_formula(std::size_t m, int max_syllables, int max_power);

}  // namespace rfree
