#include "rfree/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace rfree {

Polynomial::Polynomial(std::vector<mpq_class> coeffs) : c_(std::move(coeffs)) {
  for (auto& q : c_) q.canonicalize();
  trim();
}

Polynomial Polynomial::constant(const mpq_class& c) { return Polynomial({c}); }

Polynomial Polynomial::linear(const mpq_class& root) { return Polynomial({-root, mpq_class(1)}); }

void Polynomial::trim() {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

Polynomial Polynomial::derivative() const {
  if (c_.size() <= 1) return {};
  std::vector<mpq_class> d(c_.size() - 1);
  for (std::size_t i = 1; i < c_.size(); ++i) d[i - 1] = c_[i] * static_cast<long>(i);
  return Polynomial(std::move(d));
}

Polynomial Polynomial::monic() const {
  if (is_zero()) return {};
  std::vector<mpq_class> m = c_;
  const mpq_class lc = c_.back();
  for (auto& q : m) q /= lc;
  return Polynomial(std::move(m));
}

mpq_class Polynomial::operator()(const mpq_class& x) const {
  mpq_class acc = 0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

Interval Polynomial::operator()(const Interval& x) const {
  Interval acc(0);
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + Interval(*it);
  return acc;
}

ComplexInterval Polynomial::operator()(const ComplexInterval& z) const {
  ComplexInterval acc(Interval(0), Interval(0));
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
    acc = acc * z;
    acc.re = acc.re + Interval(*it);
  }
  return acc;
}

std::string Polynomial::to_string() const {
  if (is_zero()) return "0";
  std::string s;
  for (int i = degree(); i >= 0; --i) {
    const mpq_class& q = c_[static_cast<std::size_t>(i)];
    if (q == 0) continue;
    if (!s.empty()) s += " + ";
    s += "(" + q.get_str() + ")";
    if (i > 0) s += "*x^" + std::to_string(i);
  }
  return s;
}

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
  std::vector<mpq_class> c(std::max(a.c_.size(), b.c_.size()));
  for (std::size_t i = 0; i < a.c_.size(); ++i) c[i] += a.c_[i];
  for (std::size_t i = 0; i < b.c_.size(); ++i) c[i] += b.c_[i];
  return Polynomial(std::move(c));
}

Polynomial operator-(const Polynomial& a, const Polynomial& b) {
  std::vector<mpq_class> c(std::max(a.c_.size(), b.c_.size()));
  for (std::size_t i = 0; i < a.c_.size(); ++i) c[i] += a.c_[i];
  for (std::size_t i = 0; i < b.c_.size(); ++i) c[i] -= b.c_[i];
  return Polynomial(std::move(c));
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<mpq_class> c(a.c_.size() + b.c_.size() - 1);
  for (std::size_t i = 0; i < a.c_.size(); ++i) {
    for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
  }
  return Polynomial(std::move(c));
}

std::pair<Polynomial, Polynomial> divmod(const Polynomial& a, const Polynomial& b) {
  if (b.is_zero()) throw std::domain_error("polynomial division by zero");
  std::vector<mpq_class> rem = a.coefficients();
  const int db = b.degree();
  if (a.degree() < db) return {Polynomial(), a};
  std::vector<mpq_class> quot(static_cast<std::size_t>(a.degree() - db + 1));
  for (int i = a.degree(); i >= db; --i) {
    const mpq_class f = rem[static_cast<std::size_t>(i)] / b.leading();
    quot[static_cast<std::size_t>(i - db)] = f;
    if (f == 0) continue;
    for (int j = 0; j <= db; ++j) {
      rem[static_cast<std::size_t>(i - db + j)] -= f * b.coeff(static_cast<std::size_t>(j));
    }
  }
  return {Polynomial(std::move(quot)), Polynomial(std::move(rem))};
}

Polynomial gcd(const Polynomial& a, const Polynomial& b) {
  Polynomial x = a;
  Polynomial y = b;
  while (!y.is_zero()) {
    Polynomial r = divmod(x, y).second;
    x = std::move(y);
    y = r.monic();
  }
  return x.monic();
}

Polynomial characteristic_polynomial(const RationalMatrix& m) {
  // Faddeev-LeVerrier: M_k = A M_{k-1} + c_{n-k+1} I, c_{n-k} = -tr(A M_k) / k.
  const std::size_t n = m.dim();
  std::vector<mpq_class> c(n + 1);
  c[n] = 1;
  RationalMatrix mk(n);
  for (std::size_t k = 1; k <= n; ++k) {
    RationalMatrix next = m * mk;
    for (std::size_t i = 0; i < n; ++i) next(i, i) += c[n - k + 1];
    mk = std::move(next);
    c[n - k] = -(m * mk).trace() / static_cast<long>(k);
  }
  return Polynomial(std::move(c));
}

RationalMatrix evaluate_at(const Polynomial& p, const RationalMatrix& m) {
  RationalMatrix acc(m.dim());
  for (int i = p.degree(); i >= 0; --i) {
    acc = acc * m;
    for (std::size_t j = 0; j < m.dim(); ++j) acc(j, j) += p.coeff(static_cast<std::size_t>(i));
  }
  return acc;
}

std::vector<std::pair<Polynomial, int>> square_free_factorization(const Polynomial& p) {
  std::vector<std::pair<Polynomial, int>> out;
  if (p.degree() < 1) return out;
  const Polynomial f = p.monic();
  const Polynomial fp = f.derivative();
  Polynomial a = gcd(f, fp);
  Polynomial b = divmod(f, a).first;
  Polynomial c = divmod(fp, a).first;
  Polynomial d = c - b.derivative();
  int i = 1;
  while (b.degree() >= 1) {
    Polynomial ai = gcd(b, d);
    Polynomial bn = divmod(b, ai).first;
    Polynomial cn = divmod(d, ai).first;
    if (ai.degree() >= 1) out.emplace_back(ai.monic(), i);
    b = std::move(bn);
    d = cn - b.derivative();
    ++i;
  }
  return out;
}

Polynomial square_free_part(const Polynomial& p) {
  Polynomial r = Polynomial::constant(1);
  for (const auto& [f, mult] : square_free_factorization(p)) r = r * f;
  return r;
}

// ---------------------------------------------------------------------------
// Root isolation

namespace {

struct BigComplex {
  BigFloat re;
  BigFloat im;
};

BigComplex add(const BigComplex& a, const BigComplex& b) { return {a.re + b.re, a.im + b.im}; }
BigComplex sub(const BigComplex& a, const BigComplex& b) { return {a.re - b.re, a.im - b.im}; }
BigComplex mul(const BigComplex& a, const BigComplex& b) {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}
BigComplex div(const BigComplex& a, const BigComplex& b) {
  BigFloat den = b.re * b.re + b.im * b.im;
  return {(a.re * b.re + a.im * b.im) / den, (a.im * b.re - a.re * b.im) / den};
}
double magnitude(const BigComplex& z) {
  // Only used for convergence tests.
  return std::hypot(z.re.to_double(), z.im.to_double());
}
bool is_zero(const BigComplex& z) { return mpfr_zero_p(z.re.get()) && mpfr_zero_p(z.im.get()); }

double log2_abs(const mpq_class& q) {
  BigFloat x(q);
  mpfr_t l;
  mpfr_init2(l, 64);
  mpfr_abs(x.get(), x.get(), MPFR_RNDN);
  mpfr_log2(l, x.get(), MPFR_RNDN);
  const double out = mpfr_get_d(l, MPFR_RNDN);
  mpfr_clear(l);
  return out;
}

// Starting points on circles read off the Newton polygon of the coefficients.
std::vector<BigComplex> initial_guesses(const Polynomial& f) {
  const int n = f.degree();
  std::vector<std::pair<int, double>> pts;
  for (int i = 0; i <= n; ++i) {
    if (f.coeff(static_cast<std::size_t>(i)) != 0) pts.emplace_back(i, log2_abs(f.coeff(static_cast<std::size_t>(i))));
  }
  std::vector<std::pair<int, double>> hull;
  for (const auto& p : pts) {
    while (hull.size() >= 2) {
      const auto& a = hull[hull.size() - 2];
      const auto& b = hull.back();
      const double cross = (b.first - a.first) * (p.second - a.second) -
                           (b.second - a.second) * (p.first - a.first);
      if (cross >= 0) {
        hull.pop_back();
      } else {
        break;
      }
    }
    hull.push_back(p);
  }
  std::vector<BigComplex> z;
  z.reserve(static_cast<std::size_t>(n));
  int placed = 0;
  // x = 0 roots do not occur: callers strip them.
  for (std::size_t e = 0; e + 1 < hull.size(); ++e) {
    const int count = hull[e + 1].first - hull[e].first;
    const double log_radius = (hull[e].second - hull[e + 1].second) / count;
    const double radius = std::exp2(std::clamp(log_radius, -900.0, 900.0));
    for (int k = 0; k < count; ++k) {
      const double angle = 2.0 * std::numbers::pi * (k + 0.25) / count + 0.7 * placed + 0.3;
      BigFloat r(radius);
      z.push_back({r * BigFloat(std::cos(angle)), r * BigFloat(std::sin(angle))});
    }
    placed += count;
  }
  return z;
}

bool aberth(const Polynomial& f, std::vector<BigComplex>& z, int max_iterations) {
  const int n = f.degree();
  std::vector<BigFloat> coeffs;
  for (const auto& q : f.coefficients()) coeffs.emplace_back(q);
  const double tol = std::ldexp(1.0, -(working_precision() + 8));
  for (int iter = 0; iter < max_iterations; ++iter) {
    bool converged = true;
    for (int k = 0; k < n; ++k) {
      BigComplex p{coeffs.back(), BigFloat(0.0)};
      BigComplex dp{BigFloat(0.0), BigFloat(0.0)};
      for (int i = n - 1; i >= 0; --i) {
        dp = add(mul(dp, z[k]), p);
        p = mul(p, z[k]);
        p.re = p.re + coeffs[static_cast<std::size_t>(i)];
      }
      if (is_zero(p)) continue;
      BigComplex ratio = div(p, dp);
      BigComplex sum{BigFloat(0.0), BigFloat(0.0)};
      for (int j = 0; j < n; ++j) {
        if (j == k) continue;
        BigComplex diff = sub(z[k], z[j]);
        if (is_zero(diff)) continue;
        sum = add(sum, div(BigComplex{BigFloat(1.0), BigFloat(0.0)}, diff));
      }
      BigComplex denom = sub(BigComplex{BigFloat(1.0), BigFloat(0.0)}, mul(ratio, sum));
      BigComplex w = is_zero(denom) ? ratio : div(ratio, denom);
      z[k] = sub(z[k], w);
      const double zmag = magnitude(z[k]);
      const double wmag = magnitude(w);
      if (!(wmag <= tol * std::max(zmag, 1e-300))) converged = false;
    }
    if (converged) return true;
  }
  return false;
}

ComplexInterval box(const BigComplex& z) { return {z.re.to_interval(), z.im.to_interval()}; }

Interval radius_box(const Interval& center, const Interval& r) {
  return Interval::hull(center - r, center + r);
}

void refine_real_root(const Polynomial& f, RootEnclosure& root) {
  mpq_class a = root.value.re.lo_rational();
  mpq_class b = root.value.re.hi_rational();
  const int sa = sgn(f(a));
  const int sb = sgn(f(b));
  if (sa == 0 || sb == 0) {
    root.value.re = Interval(sa == 0 ? a : b);
    return;
  }
  if (sa == sb) return;
  const int target_bits = working_precision() + 4;
  for (int step = 0; step < 4 * target_bits; ++step) {
    mpq_class scale = std::max(abs(a), abs(b));
    mpq_class w = b - a;
    if (scale == 0 || w * (mpz_class(1) << target_bits) <= scale) break;
    mpq_class m = (a + b) / 2;
    const int sm = sgn(f(m));
    if (sm == 0) {
      root.value.re = Interval(m);
      return;
    }
    if (sm == sa) {
      a = m;
    } else {
      b = m;
    }
  }
  root.value.re = Interval::hull(Interval(a), Interval(b));
}

}  // namespace

RootIsolation isolate_roots(const Polynomial& p, const RootOptions& options) {
  RootIsolation out;
  out.isolated = true;
  if (p.degree() < 1) return out;

  for (auto [factor, mult] : square_free_factorization(p)) {
    // Split off the root at zero so the Newton polygon is well defined.
    if (factor.coeff(0) == 0) {
      RootEnclosure zero;
      zero.value = {Interval(0), Interval(0)};
      zero.modulus = Interval(0);
      zero.multiplicity = mult;
      zero.realness = Realness::kReal;
      out.roots.push_back(std::move(zero));
      factor = divmod(factor, Polynomial::linear(0)).first;
    }
    const int n = factor.degree();
    if (n < 1) continue;
    if (n == 1) {
      const mpq_class r = -factor.coeff(0) / factor.coeff(1);
      RootEnclosure root;
      root.value = {Interval(r), Interval(0)};
      root.modulus = abs(root.value.re);
      root.multiplicity = mult;
      root.realness = Realness::kReal;
      out.roots.push_back(std::move(root));
      continue;
    }

    std::vector<BigComplex> z = initial_guesses(factor);
    if (!aberth(factor, z, options.max_iterations)) {
      out.diagnostic += "root iteration did not converge for " + factor.to_string() + "; ";
    }

    std::vector<Interval> radius(static_cast<std::size_t>(n));
    std::vector<ComplexInterval> centers;
    for (const auto& zk : z) centers.push_back(box(zk));
    try {
      const Interval lc(factor.leading());
      for (int k = 0; k < n; ++k) {
        ComplexInterval denom(lc, Interval(0));
        for (int j = 0; j < n; ++j) {
          if (j != k) denom = denom * (centers[k] - centers[j]);
        }
        ComplexInterval w = factor(centers[k]) / denom;
        radius[k] = Interval(n) * abs(w);
      }
    } catch (const std::domain_error&) {
      out.isolated = false;
      out.diagnostic += "coincident root approximations; ";
      continue;
    }

    auto disjoint = [&](const ComplexInterval& ca, const Interval& ra, const ComplexInterval& cb,
                        const Interval& rb) {
      Interval dist = abs(ComplexInterval(ca.re - cb.re, ca.im - cb.im));
      return certainly_greater(dist, ra + rb);
    };

    for (int k = 0; k < n; ++k) {
      for (int j = k + 1; j < n; ++j) {
        if (!disjoint(centers[k], radius[k], centers[j], radius[j])) {
          out.isolated = false;
          out.diagnostic += "inclusion disks overlap; ";
        }
      }
    }

    for (int k = 0; k < n; ++k) {
      RootEnclosure root;
      root.multiplicity = mult;
      const Interval r = Interval::hull(Interval(0), radius[k]);
      ComplexInterval mirror(centers[k].re, -centers[k].im);
      bool mirror_alone = true;
      for (int j = 0; j < n && mirror_alone; ++j) {
        if (j != k && !disjoint(mirror, radius[k], centers[j], radius[j])) mirror_alone = false;
      }
      if (mirror_alone) {
        root.realness = Realness::kReal;
        root.value = {radius_box(centers[k].re, r), Interval(0)};
        refine_real_root(factor, root);
        root.modulus = abs(root.value.re);
      } else {
        if (certainly_greater(abs(centers[k].im), r)) {
          root.realness = Realness::kNonReal;
        } else {
          root.realness = Realness::kUnknown;
          out.isolated = false;
          out.diagnostic += "cannot decide whether a root is real; ";
        }
        root.value = {radius_box(centers[k].re, r), radius_box(centers[k].im, r)};
        Interval m = abs(centers[k]);
        root.modulus = Interval::hull(max(m - r, Interval(0)), m + r);
      }
      out.roots.push_back(std::move(root));
    }
  }
  return out;
}

}  // namespace rfree
