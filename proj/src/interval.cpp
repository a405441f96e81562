#include "rfree/interval.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <utility>

namespace rfree {

namespace {

std::atomic<int> g_precision{128};

constexpr int kGuardBits = 32;

int decimal_digits(mpfr_prec_t prec) {
  return static_cast<int>(std::ceil(static_cast<double>(prec) * 0.30102999566398120)) + 2;
}

std::string format(mpfr_srcptr x, bool round_up) {
  if (mpfr_nan_p(x)) return "nan";
  if (mpfr_inf_p(x)) return mpfr_sgn(x) > 0 ? "inf" : "-inf";
  if (mpfr_zero_p(x)) return "0";
  char* buf = nullptr;
  const int digits = decimal_digits(mpfr_get_prec(x));
  if (round_up) {
    mpfr_asprintf(&buf, "%.*RUe", digits, x);
  } else {
    mpfr_asprintf(&buf, "%.*RDe", digits, x);
  }
  std::string out(buf);
  mpfr_free_str(buf);
  return out;
}

}  // namespace

int working_precision() { return g_precision.load(std::memory_order_relaxed); }

void set_working_precision(int bits) {
  if (bits < 24 || bits > 1 << 16) throw std::invalid_argument("precision out of range");
  g_precision.store(bits, std::memory_order_relaxed);
}

PrecisionGuard::PrecisionGuard(int bits) : saved_(working_precision()) {
  set_working_precision(bits);
}

PrecisionGuard::~PrecisionGuard() { set_working_precision(saved_); }

// ---------------------------------------------------------------------------
// Interval

Interval::Interval(int prec, bool) {
  mpfr_init2(lo_, prec);
  mpfr_init2(hi_, prec);
}

Interval::Interval() : Interval(working_precision(), true) {
  mpfr_set_zero(lo_, 1);
  mpfr_set_zero(hi_, 1);
}

Interval::Interval(long value) : Interval(working_precision(), true) {
  mpfr_set_si(lo_, value, MPFR_RNDD);
  mpfr_set_si(hi_, value, MPFR_RNDU);
}

Interval::Interval(const mpq_class& value) : Interval(working_precision(), true) {
  mpfr_set_q(lo_, value.get_mpq_t(), MPFR_RNDD);
  mpfr_set_q(hi_, value.get_mpq_t(), MPFR_RNDU);
}

Interval::Interval(const mpz_class& value) : Interval(working_precision(), true) {
  mpfr_set_z(lo_, value.get_mpz_t(), MPFR_RNDD);
  mpfr_set_z(hi_, value.get_mpz_t(), MPFR_RNDU);
}

Interval Interval::from_double(double value) {
  Interval r(std::max(working_precision(), 53), true);
  mpfr_set_d(r.lo_, value, MPFR_RNDD);
  mpfr_set_d(r.hi_, value, MPFR_RNDU);
  return r;
}

Interval Interval::from_bounds(double lo, double hi) {
  if (!(lo <= hi)) throw std::invalid_argument("interval bounds out of order");
  Interval r(std::max(working_precision(), 53), true);
  mpfr_set_d(r.lo_, lo, MPFR_RNDD);
  mpfr_set_d(r.hi_, hi, MPFR_RNDU);
  return r;
}

Interval Interval::from_strings(const std::string& lo, const std::string& hi) {
  Interval r(working_precision(), true);
  if (mpfr_set_str(r.lo_, lo.c_str(), 10, MPFR_RNDD) != 0) {
    throw std::invalid_argument("bad interval endpoint: " + lo);
  }
  if (mpfr_set_str(r.hi_, hi.c_str(), 10, MPFR_RNDU) != 0) {
    throw std::invalid_argument("bad interval endpoint: " + hi);
  }
  if (mpfr_nan_p(r.lo_) || mpfr_nan_p(r.hi_) || mpfr_greater_p(r.lo_, r.hi_)) {
    throw std::invalid_argument("bad interval [" + lo + ", " + hi + "]");
  }
  return r;
}

Interval Interval::positive_infinity() {
  Interval r(working_precision(), true);
  mpfr_set_inf(r.lo_, 1);
  mpfr_set_inf(r.hi_, 1);
  return r;
}

Interval Interval::hull(const Interval& a, const Interval& b) {
  Interval r(std::max(a.precision(), b.precision()), true);
  mpfr_min(r.lo_, a.lo_, b.lo_, MPFR_RNDD);
  mpfr_max(r.hi_, a.hi_, b.hi_, MPFR_RNDU);
  return r;
}

Interval::Interval(const Interval& other) : Interval(other.precision(), true) {
  mpfr_set(lo_, other.lo_, MPFR_RNDD);
  mpfr_set(hi_, other.hi_, MPFR_RNDU);
}

Interval::Interval(Interval&& other) noexcept : Interval(other.precision(), true) {
  mpfr_swap(lo_, other.lo_);
  mpfr_swap(hi_, other.hi_);
}

Interval& Interval::operator=(const Interval& other) {
  if (this != &other) {
    mpfr_set_prec(lo_, mpfr_get_prec(other.lo_));
    mpfr_set_prec(hi_, mpfr_get_prec(other.hi_));
    mpfr_set(lo_, other.lo_, MPFR_RNDD);
    mpfr_set(hi_, other.hi_, MPFR_RNDU);
  }
  return *this;
}

Interval& Interval::operator=(Interval&& other) noexcept {
  mpfr_swap(lo_, other.lo_);
  mpfr_swap(hi_, other.hi_);
  return *this;
}

Interval::~Interval() {
  mpfr_clear(lo_);
  mpfr_clear(hi_);
}

double Interval::lo_double() const { return mpfr_get_d(lo_, MPFR_RNDD); }
double Interval::hi_double() const { return mpfr_get_d(hi_, MPFR_RNDU); }

double Interval::mid_double() const {
  if (is_infinite()) return mpfr_get_d(lo_, MPFR_RNDN);
  return 0.5 * (mpfr_get_d(lo_, MPFR_RNDN) + mpfr_get_d(hi_, MPFR_RNDN));
}

mpq_class Interval::lo_rational() const {
  if (!mpfr_number_p(lo_)) throw std::domain_error("non-finite endpoint");
  mpq_class q;
  mpfr_get_q(q.get_mpq_t(), lo_);
  return q;
}

mpq_class Interval::hi_rational() const {
  if (!mpfr_number_p(hi_)) throw std::domain_error("non-finite endpoint");
  mpq_class q;
  mpfr_get_q(q.get_mpq_t(), hi_);
  return q;
}

mpq_class Interval::mid_rational() const { return (lo_rational() + hi_rational()) / 2; }

bool Interval::is_finite() const { return mpfr_number_p(lo_) && mpfr_number_p(hi_); }
bool Interval::is_infinite() const { return mpfr_inf_p(lo_) || mpfr_inf_p(hi_); }

bool Interval::contains_zero() const { return mpfr_sgn(lo_) <= 0 && mpfr_sgn(hi_) >= 0; }

bool Interval::contains(const mpq_class& value) const {
  return mpfr_cmp_q(lo_, value.get_mpq_t()) <= 0 && mpfr_cmp_q(hi_, value.get_mpq_t()) >= 0;
}

bool Interval::contains(const Interval& other) const {
  return mpfr_lessequal_p(lo_, other.lo_) && mpfr_greaterequal_p(hi_, other.hi_);
}

bool Interval::overlaps(const Interval& other) const {
  return mpfr_lessequal_p(lo_, other.hi_) && mpfr_lessequal_p(other.lo_, hi_);
}

Interval Interval::width() const {
  Interval r(precision(), true);
  mpfr_sub(r.lo_, hi_, lo_, MPFR_RNDD);
  mpfr_sub(r.hi_, hi_, lo_, MPFR_RNDU);
  return r;
}

double Interval::relative_width() const {
  if (!is_finite()) return INFINITY;
  const double w = width().hi_double();
  const double scale = std::max(std::fabs(lo_double()), std::fabs(hi_double()));
  if (scale == 0.0) return 0.0;
  return w / scale;
}

std::string Interval::lo_string() const { return format(lo_, false); }
std::string Interval::hi_string() const { return format(hi_, true); }

std::string Interval::to_string() const { return "[" + lo_string() + ", " + hi_string() + "]"; }

Interval& Interval::operator+=(const Interval& rhs) { return *this = *this + rhs; }
Interval& Interval::operator-=(const Interval& rhs) { return *this = *this - rhs; }
Interval& Interval::operator*=(const Interval& rhs) { return *this = *this * rhs; }
Interval& Interval::operator/=(const Interval& rhs) { return *this = *this / rhs; }

Interval operator+(const Interval& a, const Interval& b) {
  Interval r(working_precision(), true);
  mpfr_add(r.lo_, a.lo_, b.lo_, MPFR_RNDD);
  mpfr_add(r.hi_, a.hi_, b.hi_, MPFR_RNDU);
  return r;
}

Interval operator-(const Interval& a, const Interval& b) {
  Interval r(working_precision(), true);
  mpfr_sub(r.lo_, a.lo_, b.hi_, MPFR_RNDD);
  mpfr_sub(r.hi_, a.hi_, b.lo_, MPFR_RNDU);
  return r;
}

Interval operator-(const Interval& a) {
  Interval r(a.precision(), true);
  mpfr_neg(r.lo_, a.hi_, MPFR_RNDD);
  mpfr_neg(r.hi_, a.lo_, MPFR_RNDU);
  return r;
}

Interval operator*(const Interval& a, const Interval& b) {
  const int prec = working_precision();
  Interval r(prec, true);
  mpfr_t t;
  mpfr_init2(t, prec);
  mpfr_srcptr as[2] = {a.lo_, a.hi_};
  mpfr_srcptr bs[2] = {b.lo_, b.hi_};
  mpfr_set_inf(r.lo_, 1);
  mpfr_set_inf(r.hi_, -1);
  for (mpfr_srcptr x : as) {
    for (mpfr_srcptr y : bs) {
      // 0 * inf contributes 0 (endpoint of a degenerate product).
      if ((mpfr_zero_p(x) && mpfr_inf_p(y)) || (mpfr_inf_p(x) && mpfr_zero_p(y))) {
        mpfr_set_zero(t, 1);
        mpfr_min(r.lo_, r.lo_, t, MPFR_RNDD);
        mpfr_max(r.hi_, r.hi_, t, MPFR_RNDU);
        continue;
      }
      mpfr_mul(t, x, y, MPFR_RNDD);
      mpfr_min(r.lo_, r.lo_, t, MPFR_RNDD);
      mpfr_mul(t, x, y, MPFR_RNDU);
      mpfr_max(r.hi_, r.hi_, t, MPFR_RNDU);
    }
  }
  mpfr_clear(t);
  return r;
}

Interval operator/(const Interval& a, const Interval& b) {
  if (b.contains_zero()) throw std::domain_error("interval division by an enclosure of zero");
  const int prec = working_precision();
  Interval r(prec, true);
  mpfr_t t;
  mpfr_init2(t, prec);
  mpfr_srcptr as[2] = {a.lo_, a.hi_};
  mpfr_srcptr bs[2] = {b.lo_, b.hi_};
  mpfr_set_inf(r.lo_, 1);
  mpfr_set_inf(r.hi_, -1);
  for (mpfr_srcptr x : as) {
    for (mpfr_srcptr y : bs) {
      mpfr_div(t, x, y, MPFR_RNDD);
      mpfr_min(r.lo_, r.lo_, t, MPFR_RNDD);
      mpfr_div(t, x, y, MPFR_RNDU);
      mpfr_max(r.hi_, r.hi_, t, MPFR_RNDU);
    }
  }
  mpfr_clear(t);
  return r;
}

Interval sqr(const Interval& a) {
  const int prec = working_precision();
  Interval r(prec, true);
  if (mpfr_sgn(a.lo_) >= 0) {
    mpfr_sqr(r.lo_, a.lo_, MPFR_RNDD);
    mpfr_sqr(r.hi_, a.hi_, MPFR_RNDU);
  } else if (mpfr_sgn(a.hi_) <= 0) {
    mpfr_sqr(r.lo_, a.hi_, MPFR_RNDD);
    mpfr_sqr(r.hi_, a.lo_, MPFR_RNDU);
  } else {
    mpfr_set_zero(r.lo_, 1);
    mpfr_t t;
    mpfr_init2(t, prec);
    mpfr_sqr(r.hi_, a.lo_, MPFR_RNDU);
    mpfr_sqr(t, a.hi_, MPFR_RNDU);
    mpfr_max(r.hi_, r.hi_, t, MPFR_RNDU);
    mpfr_clear(t);
  }
  return r;
}

Interval sqrt(const Interval& a) {
  if (mpfr_sgn(a.hi_) < 0) throw std::domain_error("sqrt of a negative enclosure");
  Interval r(working_precision(), true);
  if (mpfr_sgn(a.lo_) <= 0) {
    mpfr_set_zero(r.lo_, 1);
  } else {
    mpfr_sqrt(r.lo_, a.lo_, MPFR_RNDD);
  }
  mpfr_sqrt(r.hi_, a.hi_, MPFR_RNDU);
  return r;
}

Interval log(const Interval& a) {
  if (mpfr_sgn(a.lo_) <= 0) throw std::domain_error("log of a non-positive enclosure");
  Interval r(working_precision(), true);
  mpfr_log(r.lo_, a.lo_, MPFR_RNDD);
  mpfr_log(r.hi_, a.hi_, MPFR_RNDU);
  return r;
}

Interval exp(const Interval& a) {
  Interval r(working_precision(), true);
  mpfr_exp(r.lo_, a.lo_, MPFR_RNDD);
  mpfr_exp(r.hi_, a.hi_, MPFR_RNDU);
  return r;
}

Interval abs(const Interval& a) {
  if (mpfr_sgn(a.lo_) >= 0) return a;
  if (mpfr_sgn(a.hi_) <= 0) return -a;
  Interval r(a.precision(), true);
  mpfr_set_zero(r.lo_, 1);
  mpfr_t t;
  mpfr_init2(t, a.precision());
  mpfr_neg(t, a.lo_, MPFR_RNDU);
  mpfr_max(r.hi_, t, a.hi_, MPFR_RNDU);
  mpfr_clear(t);
  return r;
}

Interval min(const Interval& a, const Interval& b) {
  Interval r(std::max(a.precision(), b.precision()), true);
  mpfr_min(r.lo_, a.lo_, b.lo_, MPFR_RNDD);
  mpfr_min(r.hi_, a.hi_, b.hi_, MPFR_RNDU);
  return r;
}

Interval max(const Interval& a, const Interval& b) {
  Interval r(std::max(a.precision(), b.precision()), true);
  mpfr_max(r.lo_, a.lo_, b.lo_, MPFR_RNDD);
  mpfr_max(r.hi_, a.hi_, b.hi_, MPFR_RNDU);
  return r;
}

Interval pow(const Interval& a, long exponent) {
  if (exponent < 0) return Interval(1) / pow(a, -exponent);
  Interval result(1);
  Interval base = a;
  // Even powers through sqr keep the enclosure non-negative.
  while (exponent > 0) {
    if (exponent & 1) result = result * base;
    exponent >>= 1;
    if (exponent > 0) base = sqr(base);
  }
  return result;
}

Interval clamp(const Interval& a, long lo, long hi) {
  Interval r = a;
  if (mpfr_cmp_si(r.lo_, lo) < 0) mpfr_set_si(r.lo_, lo, MPFR_RNDD);
  if (mpfr_cmp_si(r.hi_, hi) > 0) mpfr_set_si(r.hi_, hi, MPFR_RNDU);
  if (mpfr_cmp_si(r.hi_, lo) < 0) mpfr_set_si(r.hi_, lo, MPFR_RNDU);
  if (mpfr_cmp_si(r.lo_, hi) > 0) mpfr_set_si(r.lo_, hi, MPFR_RNDD);
  return r;
}

bool certainly_less(const Interval& a, const Interval& b) { return mpfr_less_p(a.hi(), b.lo()); }
bool certainly_greater(const Interval& a, const Interval& b) { return certainly_less(b, a); }
bool certainly_positive(const Interval& a) { return mpfr_sgn(a.lo()) > 0; }

std::ostream& operator<<(std::ostream& os, const Interval& x) { return os << x.to_string(); }

Interval abs(const ComplexInterval& z) {
  if (z.im.is_finite() && !z.im.contains_zero()) return sqrt(sqr(z.re) + sqr(z.im));
  if (mpfr_zero_p(z.im.lo()) && mpfr_zero_p(z.im.hi())) return abs(z.re);
  return sqrt(sqr(z.re) + sqr(z.im));
}

// ---------------------------------------------------------------------------
// BigFloat

BigFloat::BigFloat() {
  mpfr_init2(v_, working_precision() + kGuardBits);
  mpfr_set_zero(v_, 1);
}

BigFloat::BigFloat(double value) {
  mpfr_init2(v_, working_precision() + kGuardBits);
  mpfr_set_d(v_, value, MPFR_RNDN);
}

BigFloat::BigFloat(const mpq_class& value) {
  mpfr_init2(v_, working_precision() + kGuardBits);
  mpfr_set_q(v_, value.get_mpq_t(), MPFR_RNDN);
}

BigFloat::BigFloat(const BigFloat& other) {
  mpfr_init2(v_, mpfr_get_prec(other.v_));
  mpfr_set(v_, other.v_, MPFR_RNDN);
}

BigFloat::BigFloat(BigFloat&& other) noexcept {
  mpfr_init2(v_, mpfr_get_prec(other.v_));
  mpfr_swap(v_, other.v_);
}

BigFloat& BigFloat::operator=(const BigFloat& other) {
  if (this != &other) {
    mpfr_set_prec(v_, mpfr_get_prec(other.v_));
    mpfr_set(v_, other.v_, MPFR_RNDN);
  }
  return *this;
}

BigFloat& BigFloat::operator=(BigFloat&& other) noexcept {
  mpfr_swap(v_, other.v_);
  return *this;
}

BigFloat::~BigFloat() { mpfr_clear(v_); }

mpq_class BigFloat::to_rational() const {
  mpq_class q;
  mpfr_get_q(q.get_mpq_t(), v_);
  return q;
}

Interval BigFloat::to_interval() const {
  return Interval(to_rational());
}

namespace {
template <typename Op>
BigFloat binary(const BigFloat& a, const BigFloat& b, Op op) {
  BigFloat r;
  op(r.get(), a.get(), b.get(), MPFR_RNDN);
  return r;
}
}  // namespace

BigFloat operator+(const BigFloat& a, const BigFloat& b) { return binary(a, b, mpfr_add); }
BigFloat operator-(const BigFloat& a, const BigFloat& b) { return binary(a, b, mpfr_sub); }
BigFloat operator*(const BigFloat& a, const BigFloat& b) { return binary(a, b, mpfr_mul); }
BigFloat operator/(const BigFloat& a, const BigFloat& b) { return binary(a, b, mpfr_div); }

BigFloat operator-(const BigFloat& a) {
  BigFloat r;
  mpfr_neg(r.v_, a.v_, MPFR_RNDN);
  return r;
}

BigFloat sqrt(const BigFloat& a) {
  BigFloat r;
  mpfr_sqrt(r.v_, a.v_, MPFR_RNDN);
  return r;
}

BigFloat abs(const BigFloat& a) {
  BigFloat r;
  mpfr_abs(r.v_, a.v_, MPFR_RNDN);
  return r;
}

}  // namespace rfree
