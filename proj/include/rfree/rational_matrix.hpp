#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace rfree {

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Square matrix over Q, stored row-major with canonical entries.
class RationalMatrix {
 public:
  RationalMatrix() = default;
  explicit RationalMatrix(std::size_t dim);
  RationalMatrix(std::size_t dim, std::vector<mpq_class> entries);
  /// Row-wise literal, e.g. {{1, 2}, {0, 1}}.
  RationalMatrix(std::initializer_list<std::initializer_list<mpq_class>> rows);

  static RationalMatrix identity(std::size_t dim);
  static RationalMatrix diagonal(const std::vector<mpq_class>& diag);
  static RationalMatrix from_strings(const std::vector<std::vector<std::string>>& rows);

  std::size_t dim() const { return dim_; }
  const mpq_class& operator()(std::size_t i, std::size_t j) const { return a_[i * dim_ + j]; }
  mpq_class& operator()(std::size_t i, std::size_t j) { return a_[i * dim_ + j]; }
  const std::vector<mpq_class>& entries() const { return a_; }

  RationalMatrix transpose() const;
  mpq_class determinant() const;
  mpq_class trace() const;
  /// Exact inverse by Gauss-Jordan elimination; throws on singular input.
  RationalMatrix inverse() const;
  RationalMatrix power(long exponent) const;

  bool is_identity() const;
  /// lambda * Id for some rational lambda.
  bool is_scalar() const;
  /// Scalar with lambda^d = 1, i.e. central in SL_d(Q): +Id, or -Id for even d.
  bool is_central() const;
  bool has_unit_determinant() const { return determinant() == 1; }
  /// Throws std::invalid_argument unless det = 1.
  void require_unimodular(const char* what) const;

  std::uint64_t hash() const;
  /// "[[1,2],[0,1]]" with rationals as p/q.
  std::string to_string() const;
  std::vector<std::vector<std::string>> to_strings() const;

  friend RationalMatrix operator*(const RationalMatrix& a, const RationalMatrix& b);
  friend RationalMatrix operator+(const RationalMatrix& a, const RationalMatrix& b);
  friend RationalMatrix operator-(const RationalMatrix& a, const RationalMatrix& b);
  friend bool operator==(const RationalMatrix& a, const RationalMatrix& b) {
    return a.dim_ == b.dim_ && a.a_ == b.a_;
  }
  friend bool operator!=(const RationalMatrix& a, const RationalMatrix& b) { return !(a == b); }

 private:
  std::size_t dim_ = 0;
  std::vector<mpq_class> a_;
};

std::vector<mpq_class> operator*(const RationalMatrix& m, const std::vector<mpq_class>& v);

struct RationalMatrixHash {
  std::size_t operator()(const RationalMatrix& m) const { return static_cast<std::size_t>(m.hash()); }
};

/// Multiply, invert, or test centrality on group elements (det = 1 inputs).
RationalMatrix multiply(const RationalMatrix& a, const RationalMatrix& b);
RationalMatrix invert(const RationalMatrix& a);
bool is_central(const RationalMatrix& a);

/// Matrix as integer numerators over one common positive denominator.
/// Products never canonicalize, which keeps long word evaluations cheap.
class ScaledIntegerMatrix {
 public:
  ScaledIntegerMatrix() = default;
  explicit ScaledIntegerMatrix(const RationalMatrix& m);

  static ScaledIntegerMatrix identity(std::size_t dim);

  std::size_t dim() const { return dim_; }
  bool is_identity() const;
  RationalMatrix to_rational() const;

  /// out = a * b (out may not alias a or b).
  static void multiply(const ScaledIntegerMatrix& a, const ScaledIntegerMatrix& b,
                       ScaledIntegerMatrix& out);

 private:
  std::size_t dim_ = 0;
  std::vector<mpz_class> num_;
  mpz_class den_ = 1;
};

}  // namespace rfree
