#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "rfree/group.hpp"
#include "rfree/proximal.hpp"
#include "rfree/rational_matrix.hpp"

namespace rfree::testing {

/// p/q in canonical form; mpq_class(p, q) alone does not reduce.
inline mpq_class ratio(long p, long q) {
  mpq_class r(p, q);
  r.canonicalize();
  return r;
}

inline GroupSpec sanov_spec() {
  return GroupSpec(2, {{"a", RationalMatrix{{1, 2}, {0, 1}}}, {"b", RationalMatrix{{1, 0}, {2, 1}}}});
}

inline RationalMatrix elementary(std::size_t d, std::size_t i, std::size_t j, long k = 1) {
  RationalMatrix m = RationalMatrix::identity(d);
  m(i, j) = k;
  return m;
}

inline GroupSpec sl3_spec() {
  std::vector<Generator> gens;
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      if (i != j) gens.push_back({"e" + std::to_string(i + 1) + std::to_string(j + 1), elementary(3, i, j)});
    }
  }
  return GroupSpec(3, std::move(gens));
}

/// Product of `steps` random elementary matrices with entries in [-2, 2].
inline RationalMatrix random_unimodular(std::size_t d, std::mt19937_64& rng, int steps = 6) {
  std::uniform_int_distribution<std::size_t> pick(0, d - 1);
  std::uniform_int_distribution<long> coef(-2, 2);
  RationalMatrix m = RationalMatrix::identity(d);
  for (int s = 0; s < steps; ++s) {
    const std::size_t i = pick(rng);
    std::size_t j = pick(rng);
    while (j == i) j = pick(rng);
    long k = coef(rng);
    if (k == 0) k = 1;
    m = m * elementary(d, i, j, k);
  }
  return m;
}

/// Random rational det-1 matrix with small denominators: a unimodular
/// matrix conjugated by diag(q, 1, ..., 1/q).
inline RationalMatrix random_rational_unimodular(std::size_t d, std::mt19937_64& rng) {
  std::uniform_int_distribution<long> den(1, 4);
  const mpq_class q = ratio(den(rng), den(rng));
  std::vector<mpq_class> diag(d, 1);
  diag.front() = q;
  diag.back() = 1 / q;
  const RationalMatrix c = RationalMatrix::diagonal(diag);
  return c * random_unimodular(d, rng) * c.inverse();
}

/// Draws until analyze_spectrum certifies a very proximal matrix.
inline RationalMatrix random_very_proximal(std::size_t d, std::mt19937_64& rng) {
  for (;;) {
    RationalMatrix m = random_rational_unimodular(d, rng);
    if (analyze_spectrum(m).very_proximal == Verdict::kTrue) return m;
  }
}

inline double as_double(const Interval& x) { return x.mid_double(); }

}  // namespace rfree::testing
