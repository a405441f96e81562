#pragma once

#include <mpfr.h>
#include <gmpxx.h>

#include <iosfwd>
#include <string>

namespace rfree {

/// Working precision (mantissa bits) used for every newly created enclosure.
int working_precision();
void set_working_precision(int bits);

/// Restores the previous working precision on scope exit.
class PrecisionGuard {
 public:
  explicit PrecisionGuard(int bits);
  ~PrecisionGuard();
  PrecisionGuard(const PrecisionGuard&) = delete;
  PrecisionGuard& operator=(const PrecisionGuard&) = delete;

 private:
  int saved_;
};

/// Closed interval [lo, hi] with MPFR endpoints. Every operation rounds
/// the lower endpoint toward -inf and the upper endpoint toward +inf, so the
/// result always contains the exact result for any point of the operands.
class Interval {
 public:
  Interval();
  Interval(long value);  // NOLINT(google-explicit-constructor)
  explicit Interval(const mpq_class& value);
  explicit Interval(const mpz_class& value);

  static Interval from_double(double value);
  static Interval from_bounds(double lo, double hi);
  static Interval from_strings(const std::string& lo, const std::string& hi);
  static Interval positive_infinity();
  /// Smallest interval containing both arguments.
  static Interval hull(const Interval& a, const Interval& b);

  Interval(const Interval& other);
  Interval(Interval&& other) noexcept;
  Interval& operator=(const Interval& other);
  Interval& operator=(Interval&& other) noexcept;
  ~Interval();

  mpfr_srcptr lo() const { return lo_; }
  mpfr_srcptr hi() const { return hi_; }
  int precision() const { return static_cast<int>(mpfr_get_prec(lo_)); }

  double lo_double() const;
  double hi_double() const;
  double mid_double() const;
  mpq_class lo_rational() const;
  mpq_class hi_rational() const;
  mpq_class mid_rational() const;

  bool is_finite() const;
  bool is_infinite() const;
  bool contains_zero() const;
  bool contains(const mpq_class& value) const;
  bool contains(const Interval& other) const;
  bool overlaps(const Interval& other) const;
  /// hi - lo, rounded up.
  Interval width() const;
  /// (hi - lo) / max(|lo|, |hi|) as a double; 0 for the zero interval.
  double relative_width() const;

  /// Endpoint decimal strings, rounded outward.
  std::string lo_string() const;
  std::string hi_string() const;
  std::string to_string() const;

  Interval& operator+=(const Interval& rhs);
  Interval& operator-=(const Interval& rhs);
  Interval& operator*=(const Interval& rhs);
  Interval& operator/=(const Interval& rhs);

  friend Interval operator+(const Interval& a, const Interval& b);
  friend Interval operator-(const Interval& a, const Interval& b);
  friend Interval operator*(const Interval& a, const Interval& b);
  friend Interval operator/(const Interval& a, const Interval& b);
  friend Interval operator-(const Interval& a);

  friend Interval sqr(const Interval& a);
  friend Interval sqrt(const Interval& a);
  friend Interval log(const Interval& a);
  friend Interval exp(const Interval& a);
  friend Interval abs(const Interval& a);
  friend Interval min(const Interval& a, const Interval& b);
  friend Interval max(const Interval& a, const Interval& b);
  friend Interval pow(const Interval& a, long exponent);
  /// Intersects with [lo, hi]; used to clamp quantities with known range.
  friend Interval clamp(const Interval& a, long lo, long hi);

 private:
  explicit Interval(int prec, bool);

  mpfr_t lo_;
  mpfr_t hi_;
};

/// a < b holds for every point of the enclosures.
bool certainly_less(const Interval& a, const Interval& b);
bool certainly_greater(const Interval& a, const Interval& b);
bool certainly_positive(const Interval& a);

std::ostream& operator<<(std::ostream& os, const Interval& x);

/// Rectangular complex enclosure.
struct ComplexInterval {
  Interval re;
  Interval im;

  ComplexInterval() = default;
  ComplexInterval(Interval r, Interval i) : re(std::move(r)), im(std::move(i)) {}

  friend ComplexInterval operator+(const ComplexInterval& a, const ComplexInterval& b) {
    return {a.re + b.re, a.im + b.im};
  }
  friend ComplexInterval operator-(const ComplexInterval& a, const ComplexInterval& b) {
    return {a.re - b.re, a.im - b.im};
  }
  friend ComplexInterval operator*(const ComplexInterval& a, const ComplexInterval& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend ComplexInterval operator/(const ComplexInterval& a, const ComplexInterval& b) {
    Interval den = sqr(b.re) + sqr(b.im);
    return {(a.re * b.re + a.im * b.im) / den, (a.im * b.re - a.re * b.im) / den};
  }
};

Interval abs(const ComplexInterval& z);

/// Round-to-nearest MPFR scalar for iterative (non-validated) computations.
class BigFloat {
 public:
  BigFloat();
  BigFloat(double value);  // NOLINT(google-explicit-constructor)
  explicit BigFloat(const mpq_class& value);
  BigFloat(const BigFloat& other);
  BigFloat(BigFloat&& other) noexcept;
  BigFloat& operator=(const BigFloat& other);
  BigFloat& operator=(BigFloat&& other) noexcept;
  ~BigFloat();

  mpfr_srcptr get() const { return v_; }
  mpfr_ptr get() { return v_; }
  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
  mpq_class to_rational() const;
  /// Point interval holding exactly this value.
  Interval to_interval() const;

  friend BigFloat operator+(const BigFloat& a, const BigFloat& b);
  friend BigFloat operator-(const BigFloat& a, const BigFloat& b);
  friend BigFloat operator*(const BigFloat& a, const BigFloat& b);
  friend BigFloat operator/(const BigFloat& a, const BigFloat& b);
  friend BigFloat operator-(const BigFloat& a);
  friend BigFloat sqrt(const BigFloat& a);
  friend BigFloat abs(const BigFloat& a);
  friend bool operator<(const BigFloat& a, const BigFloat& b) { return mpfr_less_p(a.v_, b.v_); }
  friend bool operator>(const BigFloat& a, const BigFloat& b) { return mpfr_greater_p(a.v_, b.v_); }

 private:
  mpfr_t v_;
};

}  // namespace rfree
