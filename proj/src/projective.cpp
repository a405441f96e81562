#include "rfree/projective.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rfree {

namespace {

void require_same_dim(std::size_t a, std::size_t b) {
  if (a != b) throw DimensionError("projective objects of different dimension");
}

Interval norm_of(const std::vector<Interval>& v) {
  Interval s(0);
  for (const auto& x : v) s += sqr(x);
  return sqrt(s);
}

/// Tightest available enclosure of a representative (not necessarily unit).
std::vector<Interval> representative(const ProjPoint& p) {
  if (p.exact()) {
    std::vector<Interval> v;
    v.reserve(p.dim());
    for (const auto& q : *p.exact()) v.emplace_back(q);
    return v;
  }
  return p.coords();
}

Interval dot(const std::vector<Interval>& a, const std::vector<Interval>& b) {
  Interval s(0);
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

ProjPoint ProjPoint::from_rational(std::vector<mpq_class> v) {
  auto first = std::find_if(v.begin(), v.end(), [](const mpq_class& q) { return q != 0; });
  if (first == v.end()) throw std::invalid_argument("projective point from the zero vector");
  if (*first < 0) {
    for (auto& q : v) q = -q;
  }
  std::vector<Interval> iv;
  iv.reserve(v.size());
  for (const auto& q : v) iv.emplace_back(q);
  const Interval n = norm_of(iv);
  ProjPoint p;
  for (auto& x : iv) p.coords_.push_back(x / n);
  p.exact_ = std::move(v);
  return p;
}

ProjPoint ProjPoint::from_intervals(std::vector<Interval> v) {
  const Interval n = norm_of(v);
  if (!certainly_positive(n)) throw std::invalid_argument("projective point from a vector enclosing zero");
  auto first = std::find_if(v.begin(), v.end(), [](const Interval& x) { return !x.contains_zero(); });
  const bool flip = first != v.end() && mpfr_sgn(first->hi()) < 0;
  ProjPoint p;
  for (auto& x : v) p.coords_.push_back(flip ? -(x / n) : x / n);
  return p;
}

ProjPoint ProjPoint::from_doubles(const std::vector<double>& v) {
  std::vector<mpq_class> q;
  q.reserve(v.size());
  for (double x : v) {
    if (!std::isfinite(x)) throw std::invalid_argument("non-finite coordinate");
    q.emplace_back(x);
  }
  return from_rational(std::move(q));
}

ProjPoint ProjPoint::basis(std::size_t dim, std::size_t index) {
  std::vector<mpq_class> v(dim, 0);
  v.at(index) = 1;
  return from_rational(std::move(v));
}

std::vector<double> ProjPoint::to_doubles() const {
  std::vector<double> out;
  for (const auto& x : coords_) out.push_back(x.mid_double());
  return out;
}

double ProjPoint::max_width() const {
  double w = 0;
  for (const auto& x : coords_) w = std::max(w, x.width().hi_double());
  return w;
}

Interval dist_points(const ProjPoint& p, const ProjPoint& q) {
  require_same_dim(p.dim(), q.dim());
  const auto v = representative(p);
  const auto w = representative(q);
  Interval s(0);
  for (std::size_t i = 0; i < v.size(); ++i) {
    for (std::size_t j = i + 1; j < v.size(); ++j) s += sqr(v[i] * w[j] - v[j] * w[i]);
  }
  return clamp(sqrt(s) / (norm_of(v) * norm_of(w)), 0, 1);
}

Interval incidence_residual(const ProjPoint& p, const Hyperplane& w) {
  require_same_dim(p.dim(), w.dim());
  const auto v = representative(p);
  const auto n = representative(w.normal);
  return clamp(abs(dot(v, n)) / (norm_of(v) * norm_of(n)), 0, 1);
}

Interval dist_point_hyperplane(const ProjPoint& p, const Hyperplane& w) { return incidence_residual(p, w); }

Interval dist_point_locus(const ProjPoint& p, const std::vector<Hyperplane>& locus) {
  if (locus.empty()) throw std::invalid_argument("distance to an empty locus");
  Interval best = dist_point_hyperplane(p, locus.front());
  for (std::size_t i = 1; i < locus.size(); ++i) best = min(best, dist_point_hyperplane(p, locus[i]));
  return best;
}

Interval dist_point_intersection(const ProjPoint& p, const Hyperplane& w1, const Hyperplane& w2) {
  require_same_dim(p.dim(), w1.dim());
  require_same_dim(p.dim(), w2.dim());
  const auto v = representative(p);
  const auto n1 = representative(w1.normal);
  const auto n2 = representative(w2.normal);
  // c^T G^-1 c with c = (<v,n1>, <v,n2>) and G the Gram matrix of (n1, n2).
  const Interval c1 = dot(v, n1);
  const Interval c2 = dot(v, n2);
  const Interval g11 = dot(n1, n1);
  const Interval g12 = dot(n1, n2);
  const Interval g22 = dot(n2, n2);
  const Interval det = g11 * g22 - sqr(g12);
  if (!certainly_positive(det)) throw std::domain_error("hyperplanes are not transverse");
  const Interval quad = (g22 * sqr(c1) - Interval(2) * g12 * c1 * c2 + g11 * sqr(c2)) / det;
  return clamp(sqrt(max(quad, Interval(0)) / dot(v, v)), 0, 1);
}

std::vector<Interval> multiply(const RationalMatrix& m, const std::vector<Interval>& v) {
  require_same_dim(m.dim(), v.size());
  std::vector<Interval> out(v.size());
  for (std::size_t i = 0; i < m.dim(); ++i) {
    Interval s(0);
    for (std::size_t j = 0; j < m.dim(); ++j) {
      if (m(i, j) != 0) s += Interval(m(i, j)) * v[j];
    }
    out[i] = s;
  }
  return out;
}

ProjPoint apply_action(const RationalMatrix& m, const ProjPoint& p) {
  require_same_dim(m.dim(), p.dim());
  if (p.exact()) return ProjPoint::from_rational(m * *p.exact());
  return ProjPoint::from_intervals(multiply(m, p.coords()));
}

Hyperplane apply_dual(const RationalMatrix& inverse_transpose, const Hyperplane& w) {
  return Hyperplane{apply_action(inverse_transpose, w.normal)};
}

Hyperplane apply_action(const RationalMatrix& m, const Hyperplane& w) {
  return apply_dual(m.inverse().transpose(), w);
}

Flag apply_action(const RationalMatrix& m, const Flag& f) {
  return Flag{apply_action(m, f.point), apply_action(m, f.hyperplane)};
}

namespace fast {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

std::vector<double> random_unit_vector(std::size_t dim, Rng& rng) {
  std::normal_distribution<double> gauss;
  std::vector<double> v(dim);
  while (true) {
    for (auto& x : v) x = gauss(rng);
    const double n = norm(v);
    if (n > 1e-12) {
      for (auto& x : v) x /= n;
      return v;
    }
  }
}

std::vector<std::vector<double>> random_frame(std::size_t dim, Rng& rng) {
  std::normal_distribution<double> gauss;
  std::vector<std::vector<double>> cols(dim, std::vector<double>(dim));
  while (true) {
    for (auto& c : cols) {
      for (auto& x : c) x = gauss(rng);
    }
    bool ok = true;
    for (std::size_t k = 0; k < dim && ok; ++k) {
      // Two passes of modified Gram-Schmidt keep the frame orthonormal to
      // rounding level.
      for (int pass = 0; pass < 2; ++pass) {
        for (std::size_t j = 0; j < k; ++j) {
          const double c = dot(cols[k], cols[j]);
          for (std::size_t i = 0; i < dim; ++i) cols[k][i] -= c * cols[j][i];
        }
      }
      const double n = norm(cols[k]);
      if (n < 1e-10) {
        ok = false;
        break;
      }
      for (auto& x : cols[k]) x /= n;
    }
    if (ok) return cols;
  }
}

double dist_points(const std::vector<double>& v, const std::vector<double>& w) {
  double s = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    for (std::size_t j = i + 1; j < v.size(); ++j) {
      const double c = v[i] * w[j] - v[j] * w[i];
      s += c * c;
    }
  }
  return std::min(1.0, std::sqrt(s) / (norm(v) * norm(w)));
}

double dist_point_hyperplane(const std::vector<double>& v, const std::vector<double>& n) {
  return std::min(1.0, std::abs(dot(v, n)) / (norm(v) * norm(n)));
}

double dist_point_intersection(const std::vector<double>& v, const std::vector<double>& n1,
                               const std::vector<double>& n2) {
  const double c1 = dot(v, n1), c2 = dot(v, n2);
  const double g11 = dot(n1, n1), g12 = dot(n1, n2), g22 = dot(n2, n2);
  const double det = g11 * g22 - g12 * g12;
  const double quad = (g22 * c1 * c1 - 2 * g12 * c1 * c2 + g11 * c2 * c2) / det;
  return std::min(1.0, std::sqrt(std::max(quad, 0.0) / dot(v, v)));
}

std::vector<double> apply(const std::vector<double>& m, std::size_t dim, const std::vector<double>& v) {
  std::vector<double> out(dim, 0.0);
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = 0; j < dim; ++j) out[i] += m[i * dim + j] * v[j];
  }
  return out;
}

}  // namespace fast

ProjPoint sample_point(std::size_t dim, Rng& rng) {
  return ProjPoint::from_doubles(fast::random_unit_vector(dim, rng));
}

Flag sample_flag(std::size_t dim, Rng& rng) {
  auto frame = fast::random_frame(dim, rng);
  return Flag{ProjPoint::from_doubles(frame.front()), Hyperplane{ProjPoint::from_doubles(frame.back())}};
}

}  // namespace rfree
