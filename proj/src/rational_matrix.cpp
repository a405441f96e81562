#include "rfree/rational_matrix.hpp"

#include <stdexcept>
#include <utility>

#include "rfree/rational.hpp"

namespace rfree {

RationalMatrix::RationalMatrix(std::size_t dim) : dim_(dim), a_(dim * dim) {}

RationalMatrix::RationalMatrix(std::size_t dim, std::vector<mpq_class> entries)
    : dim_(dim), a_(std::move(entries)) {
  if (a_.size() != dim * dim) throw DimensionError("entry count does not match dimension");
  for (auto& q : a_) q.canonicalize();
}

RationalMatrix::RationalMatrix(std::initializer_list<std::initializer_list<mpq_class>> rows)
    : dim_(rows.size()) {
  a_.reserve(dim_ * dim_);
  for (const auto& row : rows) {
    if (row.size() != dim_) throw DimensionError("matrix literal is not square");
    for (const auto& q : row) {
      a_.push_back(q);
      a_.back().canonicalize();
    }
  }
}

RationalMatrix RationalMatrix::identity(std::size_t dim) {
  RationalMatrix m(dim);
  for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1;
  return m;
}

RationalMatrix RationalMatrix::diagonal(const std::vector<mpq_class>& diag) {
  RationalMatrix m(diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
  return m;
}

RationalMatrix RationalMatrix::from_strings(const std::vector<std::vector<std::string>>& rows) {
  const std::size_t d = rows.size();
  std::vector<mpq_class> entries;
  entries.reserve(d * d);
  for (std::size_t i = 0; i < d; ++i) {
    if (rows[i].size() != d) {
      throw DimensionError("row " + std::to_string(i) + " has " + std::to_string(rows[i].size()) +
                           " entries, expected " + std::to_string(d));
    }
    for (const auto& s : rows[i]) entries.push_back(parse_rational(s));
  }
  return RationalMatrix(d, std::move(entries));
}

RationalMatrix RationalMatrix::transpose() const {
  RationalMatrix t(dim_);
  for (std::size_t i = 0; i < dim_; ++i) {
    for (std::size_t j = 0; j < dim_; ++j) t(j, i) = (*this)(i, j);
  }
  return t;
}

mpq_class RationalMatrix::determinant() const {
  std::vector<mpq_class> m = a_;
  const std::size_t n = dim_;
  mpq_class det = 1;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && m[pivot * n + col] == 0) ++pivot;
    if (pivot == n) return 0;
    if (pivot != col) {
      for (std::size_t j = 0; j < n; ++j) std::swap(m[col * n + j], m[pivot * n + j]);
      det = -det;
    }
    const mpq_class p = m[col * n + col];
    det *= p;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (m[r * n + col] == 0) continue;
      const mpq_class f = m[r * n + col] / p;
      for (std::size_t j = col; j < n; ++j) m[r * n + j] -= f * m[col * n + j];
    }
  }
  return det;
}

mpq_class RationalMatrix::trace() const {
  mpq_class t = 0;
  for (std::size_t i = 0; i < dim_; ++i) t += (*this)(i, i);
  return t;
}

RationalMatrix RationalMatrix::inverse() const {
  const std::size_t n = dim_;
  std::vector<mpq_class> m = a_;
  RationalMatrix inv = identity(n);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && m[pivot * n + col] == 0) ++pivot;
    if (pivot == n) throw std::domain_error("matrix is singular");
    if (pivot != col) {
      for (std::size_t j = 0; j < n; ++j) {
        std::swap(m[col * n + j], m[pivot * n + j]);
        std::swap(inv(col, j), inv(pivot, j));
      }
    }
    const mpq_class p = m[col * n + col];
    for (std::size_t j = 0; j < n; ++j) {
      m[col * n + j] /= p;
      inv(col, j) /= p;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || m[r * n + col] == 0) continue;
      const mpq_class f = m[r * n + col];
      for (std::size_t j = 0; j < n; ++j) {
        m[r * n + j] -= f * m[col * n + j];
        inv(r, j) -= f * inv(col, j);
      }
    }
  }
  return inv;
}

RationalMatrix RationalMatrix::power(long exponent) const {
  RationalMatrix base = exponent < 0 ? inverse() : *this;
  unsigned long e = exponent < 0 ? static_cast<unsigned long>(-exponent)
                                 : static_cast<unsigned long>(exponent);
  RationalMatrix result = identity(dim_);
  while (e > 0) {
    if (e & 1UL) result = result * base;
    e >>= 1;
    if (e > 0) base = base * base;
  }
  return result;
}

bool RationalMatrix::is_identity() const {
  for (std::size_t i = 0; i < dim_; ++i) {
    for (std::size_t j = 0; j < dim_; ++j) {
      if ((*this)(i, j) != (i == j ? 1 : 0)) return false;
    }
  }
  return true;
}

bool RationalMatrix::is_scalar() const {
  if (dim_ == 0) return true;
  for (std::size_t i = 0; i < dim_; ++i) {
    for (std::size_t j = 0; j < dim_; ++j) {
      if (i == j) {
        if ((*this)(i, j) != (*this)(0, 0)) return false;
      } else if ((*this)(i, j) != 0) {
        return false;
      }
    }
  }
  return true;
}

bool RationalMatrix::is_central() const {
  if (!is_scalar()) return false;
  const mpq_class& lambda = (*this)(0, 0);
  // Rational d-th roots of unity are +1 and, for even d, -1.
  return lambda == 1 || (lambda == -1 && dim_ % 2 == 0);
}

void RationalMatrix::require_unimodular(const char* what) const {
  if (!has_unit_determinant()) {
    throw std::invalid_argument(std::string(what) + ": determinant is " +
                                format_rational(determinant()) + ", expected 1");
  }
}

std::uint64_t RationalMatrix::hash() const {
  std::uint64_t h = mix64(dim_);
  for (const auto& q : a_) h = hash_rational(q, h);
  return h;
}

std::string RationalMatrix::to_string() const {
  std::string s = "[";
  for (std::size_t i = 0; i < dim_; ++i) {
    s += i ? ",[" : "[";
    for (std::size_t j = 0; j < dim_; ++j) {
      if (j) s += ",";
      s += format_rational((*this)(i, j));
    }
    s += "]";
  }
  return s + "]";
}

std::vector<std::vector<std::string>> RationalMatrix::to_strings() const {
  std::vector<std::vector<std::string>> rows(dim_);
  for (std::size_t i = 0; i < dim_; ++i) {
    for (std::size_t j = 0; j < dim_; ++j) rows[i].push_back(format_rational((*this)(i, j)));
  }
  return rows;
}

RationalMatrix operator*(const RationalMatrix& a, const RationalMatrix& b) {
  if (a.dim_ != b.dim_) throw DimensionError("dimension mismatch in product");
  const std::size_t n = a.dim_;
  RationalMatrix c(n);
  mpq_class t;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      const mpq_class& aik = a.a_[i * n + k];
      if (aik == 0) continue;
      for (std::size_t j = 0; j < n; ++j) {
        t = aik * b.a_[k * n + j];
        c.a_[i * n + j] += t;
      }
    }
  }
  return c;
}

RationalMatrix operator+(const RationalMatrix& a, const RationalMatrix& b) {
  if (a.dim_ != b.dim_) throw DimensionError("dimension mismatch in sum");
  RationalMatrix c(a.dim_);
  for (std::size_t i = 0; i < a.a_.size(); ++i) c.a_[i] = a.a_[i] + b.a_[i];
  return c;
}

RationalMatrix operator-(const RationalMatrix& a, const RationalMatrix& b) {
  if (a.dim_ != b.dim_) throw DimensionError("dimension mismatch in difference");
  RationalMatrix c(a.dim_);
  for (std::size_t i = 0; i < a.a_.size(); ++i) c.a_[i] = a.a_[i] - b.a_[i];
  return c;
}

std::vector<mpq_class> operator*(const RationalMatrix& m, const std::vector<mpq_class>& v) {
  if (v.size() != m.dim()) throw DimensionError("dimension mismatch in matrix-vector product");
  std::vector<mpq_class> out(m.dim());
  for (std::size_t i = 0; i < m.dim(); ++i) {
    for (std::size_t j = 0; j < m.dim(); ++j) out[i] += m(i, j) * v[j];
  }
  return out;
}

RationalMatrix multiply(const RationalMatrix& a, const RationalMatrix& b) { return a * b; }

RationalMatrix invert(const RationalMatrix& a) { return a.inverse(); }

bool is_central(const RationalMatrix& a) { return a.is_central(); }

// ---------------------------------------------------------------------------

ScaledIntegerMatrix::ScaledIntegerMatrix(const RationalMatrix& m) : dim_(m.dim()) {
  den_ = 1;
  for (const auto& q : m.entries()) {
    mpz_lcm(den_.get_mpz_t(), den_.get_mpz_t(), q.get_den_mpz_t());
  }
  num_.resize(dim_ * dim_);
  for (std::size_t i = 0; i < num_.size(); ++i) {
    const mpq_class& q = m.entries()[i];
    num_[i] = q.get_num() * (den_ / q.get_den());
  }
}

ScaledIntegerMatrix ScaledIntegerMatrix::identity(std::size_t dim) {
  ScaledIntegerMatrix m;
  m.dim_ = dim;
  m.num_.assign(dim * dim, 0);
  for (std::size_t i = 0; i < dim; ++i) m.num_[i * dim + i] = 1;
  m.den_ = 1;
  return m;
}

bool ScaledIntegerMatrix::is_identity() const {
  for (std::size_t i = 0; i < dim_; ++i) {
    for (std::size_t j = 0; j < dim_; ++j) {
      if (i != j && sgn(num_[i * dim_ + j]) != 0) return false;
    }
  }
  for (std::size_t i = 0; i < dim_; ++i) {
    if (num_[i * dim_ + i] != den_) return false;
  }
  return true;
}

RationalMatrix ScaledIntegerMatrix::to_rational() const {
  std::vector<mpq_class> entries(num_.size());
  for (std::size_t i = 0; i < num_.size(); ++i) entries[i] = mpq_class(num_[i], den_);
  return RationalMatrix(dim_, std::move(entries));
}

void ScaledIntegerMatrix::multiply(const ScaledIntegerMatrix& a, const ScaledIntegerMatrix& b,
                                   ScaledIntegerMatrix& out) {
  const std::size_t n = a.dim_;
  out.dim_ = n;
  out.num_.resize(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      mpz_ptr acc = out.num_[i * n + j].get_mpz_t();
      mpz_mul(acc, a.num_[i * n].get_mpz_t(), b.num_[j].get_mpz_t());
      for (std::size_t k = 1; k < n; ++k) {
        mpz_addmul(acc, a.num_[i * n + k].get_mpz_t(), b.num_[k * n + j].get_mpz_t());
      }
    }
  }
  mpz_mul(out.den_.get_mpz_t(), a.den_.get_mpz_t(), b.den_.get_mpz_t());
}

}  // namespace rfree
