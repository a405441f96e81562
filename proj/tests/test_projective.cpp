#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <random>

#include "rfree/norms.hpp"
#include "rfree/projective.hpp"
#include "support.hpp"

using namespace rfree;
using namespace rfree::testing;

namespace {

ProjPoint point(std::initializer_list<long> v) {
  std::vector<mpq_class> q;
  for (long x : v) q.emplace_back(x);
  return ProjPoint::from_rational(q);
}

Hyperplane plane(std::initializer_list<long> n) { return Hyperplane::from_normal(point(n)); }

/// Rational rotation from the Cayley transform (I - A)(I + A)^-1 of a skew matrix.
RationalMatrix cayley(std::size_t d, std::mt19937_64& rng) {
  std::uniform_int_distribution<long> num(-3, 3), den(1, 3);
  RationalMatrix a(d);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = i + 1; j < d; ++j) {
      a(i, j) = ratio(num(rng), den(rng));
      a(j, i) = -a(i, j);
    }
  }
  const RationalMatrix id = RationalMatrix::identity(d);
  return (id - a) * (id + a).inverse();
}

/// E[sin^2] of the angle between a uniform line and a fixed line, by
/// Simpson quadrature of the angular density sin^(d-2).
double quadrature_mean_sq_distance(std::size_t d) {
  const int n = 20000;
  const double h = M_PI / n;
  double num = 0, den = 0;
  for (int i = 0; i <= n; ++i) {
    const double w = (i == 0 || i == n) ? 1 : (i % 2 ? 4 : 2);
    const double s = std::sin(i * h);
    num += w * std::pow(s, static_cast<double>(d));
    den += w * std::pow(s, static_cast<double>(d) - 2);
  }
  return num / den;
}

double ks_statistic(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::size_t i = 0, j = 0;
  double best = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] <= b[j]) {
      ++i;
    } else {
      ++j;
    }
    best = std::max(best, std::abs(static_cast<double>(i) / a.size() - static_cast<double>(j) / b.size()));
  }
  return best;
}

}  // namespace

TEST_CASE("distance examples") {
  CHECK(dist_points(point({1, 0}), point({0, 1})).contains(mpq_class(1)));
  CHECK(dist_points(point({1, 0}), point({-3, 0})).contains(mpq_class(0)));
  const Interval d = dist_points(point({1, 0}), point({1, 1}));
  CHECK(sqr(d).contains(mpq_class(1, 2)));
  CHECK(dist_point_hyperplane(point({1, 0, 0}), plane({1, 0, 0})).contains(mpq_class(1)));
  CHECK(dist_point_hyperplane(point({1, 0, 0}), plane({0, 0, 1})).contains(mpq_class(0)));
  CHECK(sqr(dist_point_hyperplane(point({1, 1, 0}), plane({0, 1, 0}))).contains(mpq_class(1, 2)));
  CHECK(dist_point_locus(point({1, 0, 0}), {plane({1, 0, 0}), plane({3, 4, 0})}).contains(mpq_class(3, 5)));

  // W1 ∩ W2 = span(e1)
  CHECK(dist_point_intersection(point({1, 0, 0}), plane({0, 0, 1}), plane({0, 1, 0})).contains(mpq_class(0)));
  CHECK(dist_point_intersection(point({0, 1, 0}), plane({0, 0, 1}), plane({0, 1, 0})).contains(mpq_class(1)));
  CHECK_THROWS_AS(dist_point_intersection(point({1, 0, 0}), plane({0, 0, 1}), plane({0, 0, 2})),
                  std::domain_error);
  CHECK_THROWS(dist_points(point({1, 0}), point({1, 0, 0})));
}

TEST_CASE("projective distance satisfies the metric axioms") {
  Rng rng(1);
  for (std::size_t d : {2u, 3u, 4u}) {
    for (int i = 0; i < 200; ++i) {
      const ProjPoint p = sample_point(d, rng), q = sample_point(d, rng), r = sample_point(d, rng);
      CHECK(dist_points(p, p).contains(mpq_class(0)));
      CHECK(dist_points(p, q).overlaps(dist_points(q, p)));
      CHECK(dist_points(p, r).lo_double() <= (dist_points(p, q) + dist_points(q, r)).hi_double());
      CHECK(dist_points(p, q).hi_double() <= 1.0);
    }
  }
}

TEST_CASE("point-to-hyperplane distance is the infimum over the hyperplane") {
  Rng rng(2);
  for (int i = 0; i < 100; ++i) {
    const std::size_t d = 3;
    const auto v = fast::random_unit_vector(d, rng);
    const auto n = fast::random_unit_vector(d, rng);
    const double closed = fast::dist_point_hyperplane(v, n);
    // the orthogonal projection attains it
    std::vector<double> proj(d);
    const double c = fast::dot(v, n);
    for (std::size_t k = 0; k < d; ++k) proj[k] = v[k] - c * n[k];
    CHECK(fast::dist_points(v, proj) == Catch::Approx(closed).margin(1e-12));
    double sampled = 1;
    for (int s = 0; s < 2000; ++s) {
      auto q = fast::random_unit_vector(d, rng);
      const double cq = fast::dot(q, n);
      for (std::size_t k = 0; k < d; ++k) q[k] -= cq * n[k];
      const double dq = fast::dist_points(v, q);
      CHECK(dq >= closed - 1e-12);
      sampled = std::min(sampled, dq);
    }
    CHECK(sampled <= closed + 0.1);
    const Interval exact = dist_point_hyperplane(ProjPoint::from_doubles(v), Hyperplane{ProjPoint::from_doubles(n)});
    CHECK(exact.lo_double() <= closed + 1e-12);
    CHECK(exact.hi_double() >= closed - 1e-12);
  }
}

TEST_CASE("orthogonal matrices act isometrically") {
  std::mt19937_64 mrng(3);
  Rng rng(3);
  for (std::size_t d : {2u, 3u}) {
    for (int i = 0; i < 50; ++i) {
      const RationalMatrix o = cayley(d, mrng);
      REQUIRE(o * o.transpose() == RationalMatrix::identity(d));
      const ProjPoint p = sample_point(d, rng), q = sample_point(d, rng);
      const Hyperplane w{sample_point(d, rng)};
      CHECK(dist_points(apply_action(o, p), apply_action(o, q)).overlaps(dist_points(p, q)));
      CHECK(dist_point_hyperplane(apply_action(o, p), apply_action(o, w)).overlaps(dist_point_hyperplane(p, w)));
    }
  }
}

TEST_CASE("the action is Lipschitz with constant ||h||^2 ||h^-1||^2") {
  std::mt19937_64 mrng(4);
  Rng rng(4);
  for (int i = 0; i < 500; ++i) {
    const std::size_t d = 2 + static_cast<std::size_t>(i % 3);
    const RationalMatrix h = random_rational_unimodular(d, mrng);
    const ProjPoint p = sample_point(d, rng), q = sample_point(d, rng);
    const Interval lhs = dist_points(apply_action(h, p), apply_action(h, q));
    const Interval rhs = lip_bound(h) * dist_points(p, q);
    CHECK(lhs.lo_double() <= rhs.hi_double());
  }
}

TEST_CASE("the action preserves incidence") {
  std::mt19937_64 mrng(5);
  for (int i = 0; i < 100; ++i) {
    const std::size_t d = 3;
    std::uniform_int_distribution<long> c(-5, 5);
    std::vector<mpq_class> n(d), v(d);
    for (auto& x : n) x = c(mrng);
    if (n[0] == 0) n[0] = 1;
    for (auto& x : v) x = c(mrng);
    // force <v, n> = 0 by solving for the first coordinate
    v[0] = -(v[1] * n[1] + v[2] * n[2]) / n[0];
    if (v[0] == 0 && v[1] == 0 && v[2] == 0) continue;
    const ProjPoint p = ProjPoint::from_rational(v);
    const Hyperplane w{ProjPoint::from_rational(n)};
    REQUIRE(incidence_residual(p, w).contains(mpq_class(0)));
    const RationalMatrix h = random_rational_unimodular(d, mrng);
    CHECK(incidence_residual(apply_action(h, p), apply_action(h, w)).hi_double() <= 1e-30);
    const Flag f = apply_action(h, Flag{p, w});
    CHECK(incidence_residual(f.point, f.hyperplane).hi_double() <= 1e-30);
  }
}

TEST_CASE("uniform points have mean squared distance 1 - 1/d") {
  for (std::size_t d : {2u, 3u, 5u}) {
    const double oracle = quadrature_mean_sq_distance(d);
    CHECK(oracle == Catch::Approx(1.0 - 1.0 / static_cast<double>(d)).margin(1e-6));
    Rng rng(100 + d);
    const int n = 40000;
    double sum = 0, sum2 = 0;
    const std::vector<double> fixed = fast::random_unit_vector(d, rng);
    for (int i = 0; i < n; ++i) {
      const double x = std::pow(fast::dist_points(fast::random_unit_vector(d, rng), fixed), 2);
      sum += x;
      sum2 += x * x;
    }
    const double mean = sum / n;
    const double se = std::sqrt((sum2 / n - mean * mean) / n);
    CHECK(std::abs(mean - oracle) <= 4 * se);
  }
}

TEST_CASE("sampled points are rotation invariant") {
  std::mt19937_64 mrng(6);
  const std::size_t d = 3;
  const RationalMatrix o = cayley(d, mrng);
  std::vector<double> od;
  for (const auto& x : o.entries()) od.push_back(x.get_d());
  const std::vector<double> n{0, 0, 1};
  Rng a(61), b(62);
  const int count = 5000;
  std::vector<double> plain, rotated;
  for (int i = 0; i < count; ++i) {
    plain.push_back(fast::dist_point_hyperplane(fast::random_unit_vector(d, a), n));
    rotated.push_back(fast::dist_point_hyperplane(fast::apply(od, d, fast::random_unit_vector(d, b)), n));
  }
  // two-sample Kolmogorov-Smirnov at the 1% level
  CHECK(ks_statistic(plain, rotated) < 1.63 * std::sqrt(2.0 / count));
}

TEST_CASE("sampled flags are incident") {
  Rng rng(7);
  for (std::size_t d : {2u, 3u, 4u}) {
    for (int i = 0; i < 200; ++i) {
      const Flag f = sample_flag(d, rng);
      CHECK(incidence_residual(f.point, f.hyperplane).hi_double() <= 1e-12);
    }
  }
}

TEST_CASE("double kernels agree with the interval kernels") {
  Rng rng(8);
  for (int i = 0; i < 100; ++i) {
    const std::size_t d = 3;
    const auto v = fast::random_unit_vector(d, rng), w = fast::random_unit_vector(d, rng);
    const auto n1 = fast::random_unit_vector(d, rng), n2 = fast::random_unit_vector(d, rng);
    const ProjPoint p = ProjPoint::from_doubles(v), q = ProjPoint::from_doubles(w);
    const Hyperplane h1{ProjPoint::from_doubles(n1)}, h2{ProjPoint::from_doubles(n2)};
    CHECK(fast::dist_points(v, w) == Catch::Approx(dist_points(p, q).mid_double()).margin(1e-12));
    CHECK(fast::dist_point_intersection(v, n1, n2) ==
          Catch::Approx(dist_point_intersection(p, h1, h2).mid_double()).margin(1e-9));
  }
}
