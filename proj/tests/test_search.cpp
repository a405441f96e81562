#include <catch_amalgamated.hpp>

#include <cmath>
#include <sstream>

#include "rfree/certify.hpp"
#include "rfree/search.hpp"
#include "support.hpp"

using namespace rfree;
using namespace rfree::testing;

namespace {

std::vector<RationalMatrix> sanov_ball(int r) { return ball_enumerate(sanov_spec(), r).noncentral(); }

Configuration coordinate_configuration() {
  return make_configuration(ProjPoint::basis(3, 0), Hyperplane{ProjPoint::basis(3, 2)}, ProjPoint::basis(3, 2),
                            Hyperplane{ProjPoint::basis(3, 0)});
}

}  // namespace

TEST_CASE("sampled configurations are incident flags") {
  Rng rng(1);
  for (std::size_t d : {2u, 3u, 4u}) {
    for (int i = 0; i < 200; ++i) {
      const Configuration c = sample_configuration(d, rng);
      CHECK(c.incidence[0].hi_double() <= 1e-12);
      CHECK(c.incidence[1].hi_double() <= 1e-12);
    }
  }
}

TEST_CASE("attracting points are independent and uniform") {
  // in dimension 3, |<p+, p->| is uniform on [0, 1], so P(d < eps) = 1 - sqrt(1 - eps^2)
  Rng rng(2);
  const long n = 200000;
  long hits = 0;
  for (long i = 0; i < n; ++i) {
    const auto c = fast::sample_config(3, rng);
    if (fast::dist_points(c.p_plus, c.p_minus) < 0.1) ++hits;
  }
  const double expected = 1 - std::sqrt(0.99);
  const double p = static_cast<double>(hits) / n;
  CHECK(std::abs(p - expected) <= 3 * std::sqrt(expected * (1 - expected) / n));
}

TEST_CASE("coincident hyperplanes are rare") {
  Rng rng(3);
  long resamples = 0;
  for (int i = 0; i < 10000; ++i) resamples += fast::sample_config(3, rng).resamples;
  CHECK(resamples == 0);
}

TEST_CASE("configuration score examples") {
  const Configuration c = coordinate_configuration();
  CHECK(c.separation[0].contains(mpq_class(1)));
  CHECK(c.separation[1].contains(mpq_class(1)));
  CHECK(c.separation[2].contains(mpq_class(1)));

  // the shear maps e1 into W-
  const RationalMatrix shear{{1, 0, 0}, {1, 1, 0}, {0, 0, 1}};
  const ConfigurationScore s = score_configuration(c, {shear}, 0.5);
  CHECK(s.score.contains(mpq_class(0)));
  CHECK_FALSE(s.accepted);

  // h e1 = (1,1,1)/sqrt3 is at distance 1/sqrt3 from both hyperplanes
  const RationalMatrix h{{1, 0, 1}, {1, 1, 0}, {1, 0, 2}};
  REQUIRE(h.determinant() == 1);
  const ConfigurationScore t = score_configuration(c, {h}, 0.5);
  CHECK(t.accepted);
  CHECK(t.score.lo_double() > 0);
  CHECK(t.score.hi_double() <= 1 / std::sqrt(3.0) + 1e-30);

  const ConfigurationScore v = score_configuration(c, {}, 1.0);
  CHECK(v.vacuous);
  CHECK(v.score.is_infinite());
  CHECK(v.accepted);

  // delta0 close to 0 demands perfect separation, which the sampled flags never have
  Rng rng(4);
  CHECK_FALSE(score_configuration(sample_configuration(3, rng), {h}, 1e-9).accepted);
}

TEST_CASE("realizing the coordinate configuration gives a diagonal matrix") {
  const Realization r = realize_element(coordinate_configuration(), 2);
  CHECK(r.element == RationalMatrix::diagonal({2, 1, mpq_class(1, 2)}));
  CHECK(r.contraction.contains(mpq_class(2)));
  CHECK(r.drift == 0);
  CHECK(r.att_error == 0);
  CHECK(r.conjugator_length == Catch::Approx(0).margin(1e-12));
  CHECK_THROWS_AS(realize_element(coordinate_configuration(), 1), RealizationError);
}

TEST_CASE("realized elements have the sampled loci") {
  Rng rng(5);
  for (std::size_t d : {2u, 3u}) {
    for (int i = 0; i < 20; ++i) {
      const Configuration c = sample_configuration(d, rng);
      const mpq_class t(8);
      const Realization r = realize_element(c, t);
      CHECK(r.element.determinant() == 1);
      CHECK(r.contraction.contains(d == 2 ? t * t : t));
      CHECK(r.drift < 1e-8);
      const Loci l = att_rep_loci(r.element);
      CHECK(dist_points(l.att, r.exact.p_plus).hi_double() <= 1e-25);
      CHECK(dist_points(l.att_inverse, r.exact.p_minus).hi_double() <= 1e-25);
      CHECK(dist_points(l.rep.normal, r.exact.w_plus.normal).hi_double() <= 1e-25);
      CHECK(dist_points(l.rep_inverse.normal, r.exact.w_minus.normal).hi_double() <= 1e-25);
      CHECK(r.exact.incidence[0].contains(mpq_class(0)));
      CHECK(r.exact.incidence[1].contains(mpq_class(0)));
    }
  }
}

TEST_CASE("auto t meets the safety margin") {
  const mpq_class t2 = auto_t(2, 0.3, 34);
  CHECK(35 / t2.get_d() < 0.15);
  CHECK(35 / (t2.get_d() / 2) >= 0.15);
  const mpq_class t3 = auto_t(3, 0.3, 34);
  CHECK(35 / std::sqrt(t3.get_d()) < 0.15);
  CHECK_THROWS_AS(auto_t(3, 1e-300, 1e300, 1e300), BudgetExceeded);
  CHECK_THROWS(auto_t(2, 0, 1));
}

TEST_CASE("search input errors") {
  SearchOptions o;
  o.budget = 0;
  CHECK_THROWS_AS(find_candidate(sanov_ball(1), 2, o), InputError);
  o.budget = 10;
  o.delta0 = 1;
  CHECK_THROWS_AS(find_candidate(sanov_ball(1), 2, o), InputError);
  o.delta0 = 0.5;
  CHECK_THROWS_AS(find_candidate(sanov_ball(1), 3, o), DimensionError);
}

TEST_CASE("search realizes a certified candidate") {
  const std::vector<RationalMatrix> set = sanov_ball(1);
  SearchOptions o;
  o.budget = 3000;
  o.seed = 42;
  const SearchResult r = find_candidate(set, 2, o);
  REQUIRE(r.found_accepted);
  REQUIRE(r.realization);
  REQUIRE(r.realized_score);
  CHECK(r.best_score.accepted);
  // the realized element's D equals the exact configuration's score
  CHECK(geometric_parameter(r.realization->element, set).overlaps(r.realized_score->score));
  CHECK(std::abs(r.realized_score->score.mid_double() - r.best_score.score.mid_double()) < 1e-6);
  const FreenessCertificate c = certify_free_from_set(r.realization->element, set);
  CHECK(c.certified);

  for (std::size_t i = 1; i < r.best_per_block.size(); ++i) CHECK(r.best_per_block[i] >= r.best_per_block[i - 1]);
  CHECK(r.best_per_block.back() == Catch::Approx(r.trace[static_cast<std::size_t>(r.best_index)].score));
  for (const auto& rec : r.trace) {
    if (rec.accepted) CHECK(rec.score <= r.trace[static_cast<std::size_t>(r.best_index)].score);
  }
}

TEST_CASE("search results do not depend on the worker count") {
  const std::vector<RationalMatrix> set = ball_enumerate(sl3_spec(), 1).noncentral();
  SearchOptions o;
  o.budget = 1500;
  o.seed = 7;
  const SearchResult s = serial::find_candidate(set, 3, o);
  for (int w : {1, 2, 3}) {
    set_worker_count(w);
    const SearchResult p = find_candidate(set, 3, o);
    CHECK(p.best_index == s.best_index);
    CHECK(p.trace_csv() == s.trace_csv());
    REQUIRE(p.realization.has_value() == s.realization.has_value());
    if (p.realization) CHECK(p.realization->element == s.realization->element);
  }
  set_worker_count(0);
}

TEST_CASE("trace CSV layout") {
  SearchOptions o;
  o.budget = 5;
  o.seed = 1;
  o.t = mpq_class(4);
  const SearchResult r = find_candidate(sanov_ball(1), 2, o);
  std::istringstream in(r.trace_csv());
  std::string line;
  std::getline(in, line);
  CHECK(line == "sample,score,accepted");
  int rows = 0;
  while (std::getline(in, line)) {
    CHECK(line.rfind(std::to_string(rows) + ",", 0) == 0);
    ++rows;
  }
  CHECK(rows == 5);
  if (r.found_accepted) CHECK(r.t == 4);
}

TEST_CASE("no accepted sample leaves nothing to realize") {
  SearchOptions o;
  o.budget = 50;
  o.seed = 3;
  o.delta0 = 1e-9;
  const SearchResult r = find_candidate(sanov_ball(1), 2, o);
  CHECK_FALSE(r.found_accepted);
  CHECK_FALSE(r.realization);
  CHECK_FALSE(r.diagnosis.empty());
}
