#pragma once

#include <gmpxx.h>

#include <string>
#include <utility>
#include <vector>

#include "rfree/interval.hpp"
#include "rfree/rational_matrix.hpp"

namespace rfree {

/// Univariate polynomial over Q; coefficients stored from degree 0 upward.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<mpq_class> coeffs);
  static Polynomial constant(const mpq_class& c);
  /// x - root
  static Polynomial linear(const mpq_class& root);

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  const std::vector<mpq_class>& coefficients() const { return c_; }
  const mpq_class& coeff(std::size_t i) const { return c_[i]; }
  const mpq_class& leading() const { return c_.back(); }

  Polynomial derivative() const;
  Polynomial monic() const;

  mpq_class operator()(const mpq_class& x) const;
  Interval operator()(const Interval& x) const;
  ComplexInterval operator()(const ComplexInterval& z) const;

  std::string to_string() const;

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.c_ == b.c_; }

 private:
  void trim();
  std::vector<mpq_class> c_;
};

/// Quotient and remainder of a by b (b non-zero).
std::pair<Polynomial, Polynomial> divmod(const Polynomial& a, const Polynomial& b);
/// Monic greatest common divisor.
Polynomial gcd(const Polynomial& a, const Polynomial& b);

/// det(x·Id - M), monic of degree dim.
Polynomial characteristic_polynomial(const RationalMatrix& m);
/// p(M) by Horner's rule.
RationalMatrix evaluate_at(const Polynomial& p, const RationalMatrix& m);

/// Yun's square-free factorization: p = lc · prod f_i^{m_i} with monic,
/// square-free, pairwise coprime factors.
std::vector<std::pair<Polynomial, int>> square_free_factorization(const Polynomial& p);
/// Monic polynomial with the same roots, each simple (the radical).
Polynomial square_free_part(const Polynomial& p);

enum class Realness { kReal, kNonReal, kUnknown };

struct RootEnclosure {
  /// Box containing exactly one distinct root of the polynomial.
  ComplexInterval value;
  Interval modulus;
  int multiplicity = 1;
  Realness realness = Realness::kUnknown;
};

struct RootIsolation {
  std::vector<RootEnclosure> roots;
  /// True when every root has its own validated enclosure and known realness.
  bool isolated = false;
  std::string diagnostic;
};

struct RootOptions {
  int max_iterations = 600;
};

/// Validated enclosures of all complex roots with multiplicities.
///
/// Approximations come from Aberth iteration on each square-free factor at
/// working precision plus guard bits. They are validated with Weierstrass
/// inclusion disks |z - z_k| <= n |W_k|, W_k = f(z_k) / (lc · prod_{j != k}(z_k - z_j)),
/// evaluated in interval arithmetic: pairwise disjoint disks contain exactly
/// one root each. A disk whose mirror image meets no other disk holds a real
/// root; those are tightened by exact rational sign-change bisection.
RootIsolation isolate_roots(const Polynomial& p, const RootOptions& options = {});

}  // namespace rfree
