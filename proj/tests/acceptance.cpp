// Acceptance checks: one PASS/FAIL line per criterion.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include "rfree/certify.hpp"
#include "rfree/cli.hpp"
#include "rfree/norms.hpp"
#include "rfree/oracle.hpp"
#include "rfree/search.hpp"
#include "support.hpp"

using namespace rfree;
using namespace rfree::testing;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void report(const char* name, const std::function<Outcome()>& check) {
  const auto t0 = Clock::now();
  Outcome o;
  try {
    o = check();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  if (!o.pass) ++failures;
  std::printf("%s %s: %s (%.1fs)\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str(), seconds_since(t0));
  std::fflush(stdout);
}

std::vector<RationalMatrix> sanov_ball(int r) { return ball_enumerate(sanov_spec(), r).noncentral(); }
std::vector<RationalMatrix> sl3_ball() { return ball_enumerate(sl3_spec(), 1).noncentral(); }

Outcome soundness() {
  struct Case {
    GroupSpec spec;
    int radius;
    std::uint64_t seed;
  };
  std::vector<Case> cases;
  for (std::uint64_t s = 1; s <= 7; ++s) cases.push_back({sanov_spec(), 1, s});
  for (std::uint64_t s = 1; s <= 7; ++s) cases.push_back({sanov_spec(), 2, s});
  for (std::uint64_t s = 1; s <= 6; ++s) cases.push_back({sl3_spec(), 1, s});

  const auto t0 = Clock::now();
  int certified = 0, witnesses = 0, d2 = 0, d3 = 0;
  std::size_t largest = 0;
  mpz_class words = 0;
  for (const auto& c : cases) {
    const Ball ball = ball_enumerate(c.spec, c.radius);
    const auto set = ball.noncentral();
    largest = std::max(largest, set.size());
    SearchOptions o;
    o.budget = 4000;
    o.seed = c.seed;
    const SearchResult r = find_candidate(set, c.spec.dim(), o);
    if (!r.realization) continue;
    const FreenessCertificate cert = certify_free_in_ball(r.realization->element, ball, c.spec.digest());
    if (!cert.certified) continue;
    ++certified;
    (c.spec.dim() == 2 ? d2 : d3) += 1;
    const CrossValidation cv = cross_validate(cert, OracleBudgets{6, 3});
    if (!cv.pass) ++witnesses;
    if (cv.report) words += cv.report->words_checked;
  }
  const double elapsed = seconds_since(t0);
  std::ostringstream s;
  s << certified << " certified (d=2: " << d2 << ", d=3: " << d3 << "), largest set " << largest << ", "
    << witnesses << " witnesses in " << words.get_str() << " words at (6,3), " << elapsed << "s";
  return {certified >= 20 && d2 > 0 && d3 > 0 && witnesses == 0 && largest <= 17 && elapsed < 600, s.str()};
}

Outcome trivial_negative() {
  struct Named {
    const char* name;
    std::vector<RationalMatrix> set;
  };
  const std::vector<Named> balls{{"sanov r=1", sanov_ball(1)}, {"sanov r=2", sanov_ball(2)}, {"sl3 r=1", sl3_ball()}};
  int checked = 0, bad = 0;
  std::string first_bad;
  for (const auto& b : balls) {
    const auto coeffs = as_coefficients(b.set);
    for (const auto& g : b.set) {
      ++checked;
      const FreenessCertificate cert = certify_free_from_set(g, b.set);
      const bool zero = !cert.certified && cert.geometric && cert.geometric->contains(mpq_class(0)) &&
                        cert.reason.rfind("D = 0", 0) == 0;
      const WitnessReport w = brute_force_witness(g, coeffs, OracleBudgets{2, 3});
      std::vector<Syllable> raw{Coefficient{g, std::nullopt}, Power{-1}};
      const bool identity = evaluate(normalize(raw, g.dim()), g).is_identity();
      const bool ok = zero && w.witness && w.witness->size() == 2 && evaluate(*w.witness, g).is_identity() && identity;
      if (!ok) {
        ++bad;
        if (first_bad.empty()) first_bad = std::string(b.name) + " " + g.to_string();
      }
    }
  }
  std::ostringstream s;
  s << checked << " elements, " << bad << " failures" << (first_bad.empty() ? "" : " (first: " + first_bad + ")");
  return {bad == 0 && checked == 4 + 16 + 12, s.str()};
}

Outcome criterion_algebra() {
  std::mt19937_64 rng(20240611);
  const auto set2 = sanov_ball(1), set3 = sl3_ball();
  int bad_c = 0, bad_att = 0, bad_rep = 0, bad_d = 0;
  double worst_c = 0, worst_att = 0, worst_rep = 0;
  for (int i = 0; i < 200; ++i) {
    const std::size_t d = i % 2 == 0 ? 2 : 3;
    const RationalMatrix g = random_very_proximal(d, rng);
    const RationalMatrix h = random_rational_unimodular(d, rng);
    const SpectralData s = analyze_spectrum(g), s2 = analyze_spectrum(g * g);
    const Interval c2 = *s2.contraction, c = *s.contraction;
    const Interval diff = abs(c2 - sqr(c));
    const double rel = diff.hi_double() / c2.lo_double();
    worst_c = std::max(worst_c, rel);
    if (!(rel <= 1e-20)) ++bad_c;

    const Loci conj = att_rep_loci(h * g * h.inverse());
    const double att = dist_points(conj.att, apply_action(h, s.loci->att)).hi_double();
    worst_att = std::max(worst_att, att);
    if (!(att <= 1e-10)) ++bad_att;

    const double rep = incidence_residual(s.loci->att, s.loci->rep_inverse).hi_double();
    worst_rep = std::max(worst_rep, rep);
    if (!(rep <= 1e-10)) ++bad_rep;

    const auto& set = d == 2 ? set2 : set3;
    if (!geometric_parameter(g * g, set).overlaps(geometric_parameter(g, set))) ++bad_d;
  }
  std::ostringstream s;
  s << "violations C " << bad_c << " (worst rel " << worst_c << "), Att " << bad_att << " (worst " << worst_att
    << "), Rep " << bad_rep << " (worst " << worst_rep << "), D " << bad_d;
  return {bad_c + bad_att + bad_rep + bad_d == 0, s.str()};
}

Outcome psi_properties() {
  std::mt19937_64 rng(77);
  const auto set2 = sanov_ball(1), set3 = sl3_ball();
  int bad_a = 0;
  for (int i = 0; i < 100; ++i) {
    const std::size_t d = i % 2 == 0 ? 2 : 3;
    const auto& set = d == 2 ? set2 : set3;
    const RationalMatrix a0 = d == 2 ? RationalMatrix{{2, 1}, {1, 1}} : RationalMatrix{{2, 1, 0}, {1, 1, 0}, {0, 0, 1}} *
                                                                           RationalMatrix{{1, 0, 0}, {0, 2, 1}, {0, 1, 1}};
    const Loci loci = att_rep_loci(a0);
    const RationalMatrix g = random_rational_unimodular(d, rng);
    std::uniform_int_distribution<long> k(-3, 3);
    long e = k(rng);
    if (e == 0) e = 2;
    if (!psi(g * a0.power(e), set, loci).overlaps(psi(g, set, loci))) ++bad_a;
  }

  double r = 0;
  for (const auto& h : set2) r = std::max(r, length_g(h).hi_double());
  const Loci loci = att_rep_loci(RationalMatrix{{2, 1}, {1, 1}});
  const Interval constant = Interval(4) * exp(Interval(4) * Interval::from_double(r));
  std::uniform_int_distribution<long> num(-45, 45);
  int bad_l = 0, tested = 0;
  double worst = 0;
  while (tested < 500) {
    RationalMatrix e(2);
    for (std::size_t k = 0; k < 4; ++k) e(k / 2, k % 2) = ratio(num(rng), 100);
    const Interval ns = op_norm(e);
    if (!(ns.hi_double() < 0.5)) continue;
    ++tested;
    const RationalMatrix g = random_unimodular(2, rng, 4);
    const RationalMatrix s = RationalMatrix::identity(2) + e;
    const Interval diff = abs(psi(s * g, set2, loci) - psi(g, set2, loci));
    const Interval bound = constant * ns;
    worst = std::max(worst, diff.lo_double() / bound.hi_double());
    if (!(diff.lo_double() <= bound.hi_double())) ++bad_l;
  }
  std::ostringstream s;
  s << "A-invariance violations " << bad_a << "/100, Lipschitz violations " << bad_l << "/500 (r = " << r
    << ", largest ratio " << worst << ")";
  return {bad_a == 0 && bad_l == 0, s.str()};
}

Outcome monte_carlo() {
  const auto t0 = Clock::now();
  McOptions two;
  two.dim = 2;
  two.samples = 1000000;
  two.seed = 11;
  two.epsilons = {1e-1, 1e-2, 1e-3};
  const McReport r2 = mc_probability_check(two);
  bool closed = true;
  for (const auto& row : r2.rows) closed = closed && row.matches_closed_form.value_or(false);
  const double t2 = seconds_since(t0);

  McOptions tub;
  tub.dim = 3;
  tub.samples = 1000000;
  tub.seed = 12;
  const McReport r3 = mc_probability_check(tub);

  McOptions flag;
  flag.event = McEvent::kFlagPairing;
  flag.dim = 3;
  flag.h = RationalMatrix{{2, 1, 0}, {1, 1, 0}, {0, 0, 1}};
  flag.samples = 1000000;
  flag.seed = 13;
  const McReport rf = mc_probability_check(flag);

  std::ostringstream s;
  s << "d=2 arcsine law " << (closed ? "matched" : "missed") << " (" << t2 << "s); d=3 tubular c=" << r3.fitted_constant
    << (r3.pass ? " held" : " failed") << "; flag pairing c'=" << rf.fitted_constant << (rf.pass ? " held" : " failed");
  return {closed && r2.pass && t2 < 60 && r3.pass && rf.pass, s.str()};
}

Outcome end_to_end() {
  const GroupSpec spec = sanov_spec();
  const Ball ball = ball_enumerate(spec, 1);
  SearchOptions o;
  o.budget = 10000;
  o.seed = 2024;
  const SearchResult r = find_candidate(ball.noncentral(), 2, o);
  if (!r.found_accepted || !r.realization) return {false, "no realized candidate: " + r.diagnosis};
  const FreenessCertificate cert = certify_free_in_ball(r.realization->element, ball, spec.digest());
  if (!cert.certified) return {false, "realized element not certified: " + cert.reason};
  const CrossValidation cv = cross_validate(cert);
  std::ostringstream s;
  s << "score " << r.best_score.score.lo_double() << ", t = " << r.t.get_str() << ", D " << cert.geometric->lo_double()
    << " > " << cert.threshold->hi_double() << ", oracle " << (cv.pass ? "clean" : "found a witness");
  return {certainly_positive(r.best_score.score) && cv.pass, s.str()};
}

Outcome boost_arithmetic() {
  const long q = boost_exponent_q(Interval(1), log(Interval(4)));
  const RationalMatrix a0 = RationalMatrix::diagonal({2, mpq_class(1, 2)});
  const RationalMatrix gamma{{3, 2}, {1, 1}};
  const Loci loci = att_rep_loci(a0);
  bool ok = q == 5;
  std::ostringstream s;
  s << "q = " << q;
  for (int r : {1, 2}) {
    const auto set = sanov_ball(r);
    const Interval p = psi(gamma, set, loci);
    const BoostResult b = boost(gamma, a0, set, r, kappa_from_psi(p, r), p);
    const BoostTrace& tr = *b.certificate.boost;
    mpz_class expected = 1;
    expected <<= static_cast<mp_bitcnt_t>(2 * tr.exponent);  // 4^(2qr)
    const bool contains = b.contraction && b.contraction->contains(mpq_class(expected));
    const double rel = b.contraction ? b.contraction->relative_width() : 1;
    ok = ok && contains && rel <= 1e-20 && b.contraction_matches;
    s << "; r=" << r << ": 2qr = " << tr.exponent << ", C contains 4^" << tr.exponent << " " << (contains ? "yes" : "no")
      << " (rel width " << rel << ")";
  }
  return {ok, s.str()};
}

std::string run_text(const std::vector<std::string>& args, int* code) {
  std::ostringstream out, err;
  *code = run_cli(args, out, err);
  return out.str();
}

Outcome determinism() {
  const std::string spec = std::string(RFREE_DATA_DIR) + "/sanov.json";
  const std::string sl3 = std::string(RFREE_DATA_DIR) + "/sl3_elementary.json";
  int code = 0;
  bool ok = true;
  std::ostringstream s;

  const std::vector<std::vector<std::string>> randomized{
      {"search", "--spec", spec, "--radius", "1", "--seed", "9", "--samples", "3000"},
      {"search", "--spec", sl3, "--radius", "1", "--seed", "9", "--samples", "1000"},
      {"mc-verify", "--event", "flag_pairing", "--spec", spec, "--element", "a.b", "--seed", "9", "--samples", "50000"}};
  int identical = 0;
  for (const auto& args : randomized) {
    std::string first;
    bool same = true;
    for (const char* workers : {"1", "2", "4"}) {
      auto a = args;
      a.push_back("--workers");
      a.push_back(workers);
      const std::string text = run_text(a, &code);
      if (first.empty()) first = text;
      same = same && text == first && !text.empty();
    }
    if (same) ++identical;
  }
  ok = ok && identical == static_cast<int>(randomized.size());
  s << identical << "/" << randomized.size() << " randomized commands bitwise identical across repeats and workers";

  std::string serial_ball;
  {
    std::ostringstream os;
    serial::ball_enumerate(sanov_spec(), 4).write_jsonl(os);
    serial_ball = os.str();
  }
  bool balls = true;
  for (int w : {1, 2, 4}) {
    set_worker_count(w);
    std::ostringstream os;
    ball_enumerate(sanov_spec(), 4).write_jsonl(os);
    balls = balls && os.str() == serial_ball;
  }
  set_worker_count(0);
  ok = ok && balls;
  s << "; ball r=4 " << (balls ? "independent of" : "depends on") << " workers";
  return {ok, s.str()};
}

}  // namespace

int main() {
  report("soundness", soundness);
  report("trivial-negative", trivial_negative);
  report("criterion-algebra", criterion_algebra);
  report("psi-properties", psi_properties);
  report("monte-carlo", monte_carlo);
  report("end-to-end", end_to_end);
  report("boost-arithmetic", boost_arithmetic);
  report("determinism", determinism);
  std::printf("%d failing\n", failures);
  return failures == 0 ? 0 : 1;
}
