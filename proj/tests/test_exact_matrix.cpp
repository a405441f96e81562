#include <catch_amalgamated.hpp>

#include <cmath>
#include <map>
#include <random>
#include <sstream>

#include "rfree/group.hpp"
#include "rfree/interval.hpp"
#include "rfree/norms.hpp"
#include "rfree/polynomial.hpp"
#include "rfree/rational.hpp"
#include "support.hpp"

using namespace rfree;
using namespace rfree::testing;

TEST_CASE("interval arithmetic encloses exact results") {
  const Interval third = Interval(1) / Interval(3);
  CHECK(third.contains(mpq_class(1, 3)));
  CHECK(certainly_less(third, Interval::from_double(0.3334)));
  const Interval root2 = sqrt(Interval(2));
  CHECK(root2.lo_double() <= std::sqrt(2.0));
  CHECK(root2.hi_double() >= std::sqrt(2.0));
  CHECK(sqr(root2).contains(mpq_class(2)));
  CHECK(root2.relative_width() < 1e-35);
  CHECK(log(exp(Interval(1))).contains(mpq_class(1)));
  CHECK(Interval::positive_infinity().is_infinite());
  const Interval x = Interval::from_strings("0.1", "0.1");
  CHECK(x.contains(mpq_class(1, 10)));
}

TEST_CASE("precision guard restores the working precision") {
  const int before = working_precision();
  {
    PrecisionGuard g(256);
    CHECK(working_precision() == 256);
    CHECK(sqrt(Interval(2)).relative_width() < 1e-70);
  }
  CHECK(working_precision() == before);
}

TEST_CASE("rational parsing, formatting and rationalization") {
  CHECK(parse_rational("-6/4") == mpq_class(-3, 2));
  CHECK(format_rational(mpq_class(-3, 2)) == "-3/2");
  CHECK(format_rational(mpq_class(5)) == "5");
  CHECK_THROWS(parse_rational("1/0"));
  CHECK_THROWS(parse_rational("abc"));
  CHECK(rationalize(M_PI, mpz_class(1000)) == mpq_class(355, 113));
  CHECK(rationalize(0.7, mpz_class(3)) == mpq_class(2, 3));
  CHECK(rationalize(mpq_class(7, 9), mpz_class(100)) == mpq_class(7, 9));
  CHECK(hash_rational(ratio(2, 4), 1) == hash_rational(mpq_class(1, 2), 1));
}

TEST_CASE("group arithmetic examples") {
  const RationalMatrix a{{1, 2}, {0, 1}};
  CHECK(invert(a) == RationalMatrix{{1, -2}, {0, 1}});
  CHECK(is_central(RationalMatrix{{-1, 0}, {0, -1}}));
  CHECK_FALSE(is_central(RationalMatrix::diagonal({2, 1, mpq_class(1, 2)})));
  CHECK_FALSE(is_central(RationalMatrix::diagonal({-1, -1, -1})));
  CHECK(multiply(a, invert(a)).is_identity());
  CHECK(a.power(-3) == RationalMatrix{{1, -6}, {0, 1}});
  CHECK_THROWS_AS(multiply(a, RationalMatrix::identity(3)), DimensionError);
  CHECK_THROWS(RationalMatrix{{1, 1}, {1, 1}}.inverse());
  CHECK(a.to_string() == "[[1,2],[0,1]]");
  CHECK(parse_matrix_literal("[[1,2/3],[0,1]]")(0, 1) == mpq_class(2, 3));
}

TEST_CASE("characteristic polynomial and root isolation") {
  const Polynomial p = characteristic_polynomial(RationalMatrix{{2, 1}, {1, 1}});
  CHECK(p == Polynomial({1, -3, 1}));
  const auto iso = isolate_roots(Polynomial({-2, 0, 1}));
  REQUIRE(iso.isolated);
  REQUIRE(iso.roots.size() == 2);
  for (const auto& r : iso.roots) {
    CHECK(r.realness == Realness::kReal);
    CHECK(r.modulus.lo_double() <= std::sqrt(2.0));
    CHECK(r.modulus.hi_double() >= std::sqrt(2.0));
  }
  const auto complex_roots = isolate_roots(Polynomial({1, 0, 1}));
  REQUIRE(complex_roots.isolated);
  for (const auto& r : complex_roots.roots) CHECK(r.realness == Realness::kNonReal);
  const auto repeated = square_free_factorization(Polynomial({1, -2, 1}));
  REQUIRE(repeated.size() == 1);
  CHECK(repeated[0].second == 2);
}

TEST_CASE("operator norm examples") {
  CHECK(op_norm(RationalMatrix::identity(3)).contains(mpq_class(1)));
  CHECK(op_norm(RationalMatrix::diagonal({2, mpq_class(1, 2)})).contains(mpq_class(2)));
  const Interval n = op_norm(RationalMatrix{{1, 2}, {0, 1}});
  CHECK(n.overlaps(Interval(1) + sqrt(Interval(2))));
  CHECK(n.relative_width() < 1e-25);
  CHECK(n.lo_double() >= 1);
}

TEST_CASE("length examples and brackets") {
  CHECK(length_g(RationalMatrix::identity(2)).contains(mpq_class(0)));
  const Interval l = length_g(RationalMatrix::diagonal({2, mpq_class(1, 2)}));
  CHECK(std::abs(l.mid_double() - std::sqrt(2.0) * std::log(2.0)) < 1e-15);
  std::mt19937_64 rng(5);
  for (int i = 0; i < 50; ++i) {
    const auto m = random_rational_unimodular(2 + static_cast<std::size_t>(i % 2), rng);
    const LengthReport r = length_report(m);
    CHECK(r.length.hi_double() >= r.log_norm.lo_double() - r.length.width().hi_double());
  }
}

TEST_CASE("lipschitz bound examples") {
  CHECK(lip_bound(RationalMatrix::identity(2)).contains(mpq_class(1)));
  CHECK(lip_bound(RationalMatrix::diagonal({2, mpq_class(1, 2)})).contains(mpq_class(16)));
  std::mt19937_64 rng(6);
  for (int i = 0; i < 50; ++i) {
    const auto m = random_rational_unimodular(2 + static_cast<std::size_t>(i % 2), rng);
    CHECK(lip_bound(m).lo_double() <= lip_exp_bound(m).hi_double());
  }
}

TEST_CASE("norm duality") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 100; ++i) {
    const auto m = random_rational_unimodular(2 + static_cast<std::size_t>(i % 2), rng);
    CHECK((op_norm(m) * op_norm(m.inverse())).hi_double() >= 1);
  }
  const RationalMatrix rotation{{0, -1}, {1, 0}};
  CHECK((op_norm(rotation) * op_norm(rotation.inverse())).contains(mpq_class(1)));
  const RationalMatrix perm{{0, 1, 0}, {0, 0, 1}, {1, 0, 0}};
  CHECK((op_norm(perm) * op_norm(perm.inverse())).contains(mpq_class(1)));
}

TEST_CASE("length subadditivity on random pairs") {
  std::mt19937_64 rng(8);
  int violations = 0;
  for (int i = 0; i < 500; ++i) {
    const std::size_t d = 2 + static_cast<std::size_t>(i % 2);
    const auto m = random_rational_unimodular(d, rng);
    const auto n = random_rational_unimodular(d, rng);
    const Interval lm = length_g(m), ln = length_g(n), lmn = length_g(m * n);
    const double slack = 2 * (lm.width().hi_double() + ln.width().hi_double() + lmn.width().hi_double());
    if (lmn.lo_double() > lm.hi_double() + ln.hi_double() + slack) ++violations;
  }
  CHECK(violations == 0);
}

namespace {

/// Independent breadth-first ball keyed by printed matrices.
std::vector<std::size_t> reference_growth(const GroupSpec& spec, int radius) {
  std::map<std::string, int> seen;
  std::vector<RationalMatrix> frontier{RationalMatrix::identity(spec.dim())};
  seen[frontier[0].to_string()] = 0;
  std::vector<std::size_t> growth{1};
  for (int r = 1; r <= radius; ++r) {
    std::vector<RationalMatrix> next;
    for (const auto& m : frontier) {
      for (const auto& g : spec.generators()) {
        for (const auto& s : {g.matrix, g.matrix.inverse()}) {
          RationalMatrix p = m * s;
          if (seen.emplace(p.to_string(), r).second) next.push_back(std::move(p));
        }
      }
    }
    growth.push_back(next.size());
    frontier = std::move(next);
  }
  return growth;
}

}  // namespace

TEST_CASE("ball enumeration examples") {
  const GroupSpec spec = sanov_spec();
  CHECK(ball_enumerate(spec, 0).size() == 1);
  const Ball b1 = ball_enumerate(spec, 1);
  CHECK(b1.size() == 5);
  CHECK(b1.contains(RationalMatrix{{1, -2}, {0, 1}}));
  CHECK(b1.noncentral_size() == 4);
  CHECK(ball_enumerate(spec, 2).size() == 17);
  const Ball b4 = ball_enumerate(spec, 4);
  CHECK(b4.growth() == reference_growth(spec, 4));
  CHECK(b4.size() == 161);
  CHECK(ball_enumerate(sl3_spec(), 1).size() == 13);
  CHECK(ball_enumerate(sl3_spec(), 2).growth() == reference_growth(sl3_spec(), 2));
}

TEST_CASE("ball symmetry, monotonicity and labels") {
  for (const GroupSpec& spec : {sanov_spec(), sl3_spec()}) {
    const int top = spec.dim() == 2 ? 4 : 2;
    Ball prev = ball_enumerate(spec, 0);
    for (int r = 1; r <= top; ++r) {
      const Ball b = ball_enumerate(spec, r);
      for (const auto& e : b.elements()) {
        CHECK(b.contains(e.matrix.inverse()));
        CHECK(spec.element(e.label) == e.matrix);
      }
      for (const auto& e : prev.elements()) CHECK(b.contains(e.matrix));
      prev = b;
    }
  }
}

TEST_CASE("central elements are excluded from the noncentral view") {
  const GroupSpec spec(2, {{"s", RationalMatrix{{0, -1}, {1, 0}}}});
  const Ball b = ball_enumerate(spec, 2);
  CHECK(b.size() == 4);
  CHECK(b.noncentral_size() == 2);
  for (const auto& m : b.noncentral()) CHECK_FALSE(m.is_central());
}

TEST_CASE("parallel and serial ball enumeration agree") {
  const GroupSpec spec = sanov_spec();
  for (int workers : {1, 2, 3}) {
    set_worker_count(workers);
    const Ball p = ball_enumerate(spec, 5);
    const Ball s = serial::ball_enumerate(spec, 5);
    REQUIRE(p.size() == s.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
      CHECK(p.elements()[i].matrix == s.elements()[i].matrix);
      CHECK(p.elements()[i].label == s.elements()[i].label);
    }
  }
  set_worker_count(0);
}

TEST_CASE("ball budget refusal") {
  BallOptions options;
  options.max_elements = 100;
  CHECK_THROWS_AS(ball_enumerate(sanov_spec(), 4, options), BudgetExceeded);
}

TEST_CASE("ball export lines carry label, length, matrix and length enclosure") {
  std::ostringstream os;
  ball_enumerate(sanov_spec(), 1).write_jsonl(os);
  std::istringstream is(os.str());
  std::string line;
  int lines = 0;
  while (std::getline(is, line)) {
    ++lines;
    CHECK(line.find("\"label\"") != std::string::npos);
    CHECK(line.find("\"g_length\"") != std::string::npos);
  }
  CHECK(lines == 5);
}

TEST_CASE("matrix hashing never merges distinct matrices") {
  MatrixSet set;
  std::mt19937_64 rng(9);
  std::uniform_int_distribution<long> small(-50, 50);
  const long n = 1000000;
  long merged = 0;
  for (long i = 0; i < n; ++i) {
    RationalMatrix m(2);
    m(0, 0) = i % 1000;
    m(0, 1) = mpq_class(i / 1000, 7);
    m(1, 0) = small(rng);
    m(1, 1) = ratio(small(rng), 3);
    if (!set.insert(m).second) ++merged;
  }
  CHECK(merged == 0);
  CHECK(set.size() == static_cast<std::size_t>(n));
  CHECK(set.find(set[2005]) == 2005);
  CHECK(set.insert(set[17]).second == false);
  CHECK(RationalMatrix{{2, 4}, {0, 1}}.hash() == RationalMatrix{{mpq_class(4, 2), 4}, {0, 1}}.hash());
}

TEST_CASE("group spec parsing reports the failing path") {
  const std::string good = R"({"dim": 2, "field": "Q", "generators": [
    {"label": "a", "matrix": [["1", "2"], ["0", "1"]]},
    {"label": "b", "matrix": [[1, 0], ["2/1", 1]]}]})";
  const GroupSpec spec = GroupSpec::parse(good);
  CHECK(spec.digest() == sanov_spec().digest());
  CHECK(spec.alphabet().size() == 4);
  CHECK(spec.element("a.b^-1") == RationalMatrix{{1, 2}, {0, 1}} * RationalMatrix{{1, 0}, {-2, 1}});
  CHECK(spec.element("e").is_identity());

  auto message = [](const std::string& text) {
    try {
      GroupSpec::parse(text);
    } catch (const InputError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  CHECK(message(R"({"dim": 2, "generators": [{"label": "a", "matrix": [["1","2"],["0","1"]]},
    {"label": "b", "matrix": [["2","0"],["0","1"]]}]})")
            .find("generators[1]") != std::string::npos);
  CHECK(message(R"({"dim": 2, "generators": [{"label": "a", "matrix": [["1","x"],["0","1"]]}]})")
            .find("generators[0].matrix[0][1]") != std::string::npos);
  CHECK_FALSE(message(R"({"generators": []})").empty());
  CHECK_FALSE(message(R"({"dim": 2, "field": "R", "generators": []})").empty());
  CHECK_FALSE(message("{").empty());
  CHECK_THROWS_AS(spec.element("c"), InputError);

  const GroupSpec loaded = GroupSpec::load(std::string(RFREE_DATA_DIR) + "/sanov.json");
  CHECK(loaded.digest() == spec.digest());
  CHECK(GroupSpec::parse(spec.to_json()).digest() == spec.digest());
}
