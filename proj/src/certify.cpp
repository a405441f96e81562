#include "rfree/certify.hpp"

#include <cmath>

#include "json.hpp"

#include "rfree/norms.hpp"
#include "rfree/parallel.hpp"
#include "rfree/projective.hpp"
#include "rfree/rational.hpp"

namespace rfree {

using nlohmann::json;

namespace {

std::string hex64(std::uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i) {
    s[static_cast<std::size_t>(i)] = digits[v & 15U];
    v >>= 4;
  }
  return s;
}

Interval fold_min(const std::vector<Interval>& values) {
  Interval best = values.front();
  for (std::size_t i = 1; i < values.size(); ++i) best = min(best, values[i]);
  return best;
}

Interval distance_for(const Loci& loci, const std::vector<Hyperplane>& locus, const RationalMatrix& h) {
  const Interval a = dist_point_locus(apply_action(h, loci.att), locus);
  const Interval b = dist_point_locus(apply_action(h, loci.att_inverse), locus);
  return min(a, b);
}

json interval_json(const Interval& x) { return json::array({x.lo_string(), x.hi_string()}); }

Interval interval_from(const json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_string() || !j[1].is_string()) {
    throw InputError("certificate: interval must be a pair of decimal strings");
  }
  return Interval::from_strings(j[0].get<std::string>(), j[1].get<std::string>());
}

json matrix_json(const RationalMatrix& m) { return m.to_strings(); }

RationalMatrix matrix_from(const json& j) {
  try {
    return RationalMatrix::from_strings(j.get<std::vector<std::vector<std::string>>>());
  } catch (const std::exception& e) {
    throw InputError(std::string("certificate: bad matrix: ") + e.what());
  }
}

void put(json& j, const char* key, const std::optional<Interval>& x) {
  if (x) j[key] = interval_json(*x);
}

std::optional<Interval> get(const json& j, const char* key) {
  if (!j.contains(key)) return std::nullopt;
  return interval_from(j[key]);
}

Verdict verdict_from(const std::string& s) {
  if (s == "true") return Verdict::kTrue;
  if (s == "false") return Verdict::kFalse;
  if (s == "undecided") return Verdict::kUndecided;
  throw InputError("certificate: unknown verdict \"" + s + "\"");
}

}  // namespace

std::string set_digest(const std::vector<RationalMatrix>& set) {
  std::uint64_t h = mix64(set.size() + 0x5bd1e995ULL);
  for (const auto& m : set) h = mix64(h ^ m.hash());
  return hex64(h);
}

Interval geometric_parameter(const Loci& loci, const std::vector<RationalMatrix>& set) {
  if (set.empty()) return Interval::positive_infinity();
  const std::vector<Hyperplane> locus{loci.rep, loci.rep_inverse};
  std::vector<Interval> per(set.size());
  parallel_for(static_cast<long>(set.size()), [&](long i) {
    per[static_cast<std::size_t>(i)] = distance_for(loci, locus, set[static_cast<std::size_t>(i)]);
  });
  return fold_min(per);
}

namespace serial {
Interval geometric_parameter(const Loci& loci, const std::vector<RationalMatrix>& set) {
  if (set.empty()) return Interval::positive_infinity();
  const std::vector<Hyperplane> locus{loci.rep, loci.rep_inverse};
  std::vector<Interval> per;
  for (const auto& h : set) per.push_back(distance_for(loci, locus, h));
  return fold_min(per);
}
}  // namespace serial

Interval geometric_parameter(const RationalMatrix& g, const std::vector<RationalMatrix>& set) {
  return geometric_parameter(att_rep_loci(g), set);
}

Interval max_lipschitz(const std::vector<RationalMatrix>& set) {
  if (set.empty()) return Interval(0);
  std::vector<Interval> per(set.size());
  parallel_for(static_cast<long>(set.size()),
               [&](long i) { per[static_cast<std::size_t>(i)] = lip_bound(set[static_cast<std::size_t>(i)]); });
  Interval best = per.front();
  for (const auto& x : per) best = max(best, x);
  return best;
}

FreenessCertificate certify_free_from_set(const RationalMatrix& g, const std::vector<RationalMatrix>& set,
                                          const CertifyOptions& options) {
  FreenessCertificate cert;
  cert.element = g;
  cert.coefficient_set = set;
  cert.set_digest = rfree::set_digest(set);
  cert.spec_digest = options.spec_digest;
  cert.radius = options.radius;
  cert.noncentral_size = set.size();
  cert.ball_size = set.size();
  cert.precision_bits = working_precision();
  for (const auto& h : set) {
    if (h.dim() != g.dim()) throw DimensionError("coefficient dimension does not match the element");
    if (h.is_central()) throw std::invalid_argument("coefficient set contains a central element " + h.to_string());
  }
  g.require_unimodular("element");

  const RationalMatrix g_inv = g.inverse();
  bool member = false;
  for (const auto& h : set) member = member || h == g || h == g_inv;

  const SpectralData spectrum = analyze_spectrum(g);
  cert.very_proximal = spectrum.very_proximal;
  if (member && spectrum.very_proximal != Verdict::kTrue) {
    // The trivial identity g x^-1 settles the question whatever the spectrum.
    cert.geometric = Interval(0);
    cert.reason = "D = 0: the element or its inverse lies in the coefficient set (not very proximal: " +
                  spectrum.diagnostic + ")";
    return cert;
  }
  if (spectrum.very_proximal != Verdict::kTrue) {
    cert.reason = spectrum.very_proximal == Verdict::kFalse
                      ? "not very proximal: D is undefined (" + spectrum.diagnostic + ")"
                      : "spectral verdict undecided: " + spectrum.diagnostic;
    return cert;
  }
  const Interval contraction = *spectrum.contraction;
  cert.contraction = contraction;
  const Interval scale = Interval(1) / sqrt(contraction);

  const Interval lip = options.lipschitz_override ? *options.lipschitz_override : max_lipschitz(set);
  cert.lipschitz = lip;
  cert.threshold = (Interval(1) + lip) * scale;
  if (!set.empty()) {
    Interval lip_exp = lip_exp_bound(set.front());
    for (const auto& h : set) lip_exp = max(lip_exp, lip_exp_bound(h));
    cert.lipschitz_exp = lip_exp;
  }
  if (options.radius) {
    cert.lipschitz_radius = exp(Interval(4L * *options.radius));
    cert.threshold_radius = (Interval(1) + *cert.lipschitz_radius) * scale;
  }

  if (set.empty()) {
    cert.geometric = Interval::positive_infinity();
    cert.vacuous = true;
    cert.certified = true;
    cert.margin = Interval::positive_infinity();
    cert.reason = "vacuous: empty coefficient set, D = +inf";
    return cert;
  }

  if (member) {
    cert.geometric = Interval(0);
    cert.reason = "D = 0: the element or its inverse lies in the coefficient set";
  } else {
    cert.geometric = geometric_parameter(*spectrum.loci, set);
  }
  cert.margin = *cert.geometric - *cert.threshold;
  cert.certified = certainly_greater(*cert.geometric, *cert.threshold);
  if (cert.certified) {
    cert.reason = "D exceeds (1 + L) C^(-1/2)";
  } else if (!member) {
    cert.reason = mpfr_zero_p(cert.geometric->lo()) ? "D = 0 within the enclosure"
                                                    : "D does not exceed (1 + L) C^(-1/2)";
  }
  return cert;
}

FreenessCertificate certify_free_in_ball(const RationalMatrix& g, const Ball& ball, const std::string& spec_digest) {
  CertifyOptions options;
  options.radius = ball.radius();
  options.spec_digest = spec_digest;
  FreenessCertificate cert = certify_free_from_set(g, ball.noncentral(), options);
  cert.ball_size = ball.size();
  return cert;
}

namespace {

FreenessCertificate recompute(const FreenessCertificate& cert) {
  PrecisionGuard guard(cert.precision_bits);
  CertifyOptions options;
  options.radius = cert.radius;
  options.spec_digest = cert.spec_digest;
  FreenessCertificate again = certify_free_from_set(cert.element, cert.coefficient_set, options);
  again.ball_size = cert.ball_size;
  again.boost = cert.boost;
  again.metric = cert.metric;
  again.precision_bits = cert.precision_bits;
  return again;
}

bool same_json(const json& expected, const json& actual, std::string* mismatch) {
  if (expected == actual) return true;
  if (mismatch) {
    *mismatch = "field set differs";
    for (auto it = expected.begin(); it != expected.end(); ++it) {
      if (!actual.contains(it.key()) || actual[it.key()] != it.value()) {
        *mismatch = it.key();
        break;
      }
    }
  }
  return false;
}

}  // namespace

bool reverify(const FreenessCertificate& cert, std::string* mismatch) {
  return same_json(json::parse(cert.to_json()), json::parse(recompute(cert).to_json()), mismatch);
}

bool reverify_text(const std::string& text, std::string* mismatch) {
  const FreenessCertificate cert = FreenessCertificate::from_json(text);
  return same_json(json::parse(text), json::parse(recompute(cert).to_json()), mismatch);
}

Loci transport(const Loci& loci, const RationalMatrix& g) {
  const RationalMatrix dual = g.inverse().transpose();
  return Loci{apply_action(g, loci.att), apply_action(g, loci.att_inverse), apply_dual(dual, loci.rep),
              apply_dual(dual, loci.rep_inverse)};
}

Interval psi(const RationalMatrix& g, const std::vector<RationalMatrix>& set, const Loci& a0_loci) {
  return geometric_parameter(transport(a0_loci, g), set);
}

long boost_exponent_q(const Interval& kappa_hat, const Interval& log_contraction) {
  if (!certainly_positive(log_contraction)) throw std::invalid_argument("log C_{a0} must be positive");
  const Interval x = (Interval(5) + kappa_hat) / log_contraction;
  const double hi = std::ceil(x.hi_double());
  if (!(hi < 1e15)) throw BudgetExceeded("boost exponent q overflows");
  return static_cast<long>(hi);
}

Interval kappa_from_psi(const Interval& psi_value, int radius) {
  if (!certainly_positive(psi_value)) throw std::invalid_argument("psi lower bound must be positive");
  if (radius < 1) throw std::invalid_argument("radius must be positive");
  const Interval k = -log(psi_value) / Interval(radius);
  return max(k, Interval(0));
}

BoostResult boost(const RationalMatrix& gamma, const RationalMatrix& a0, const std::vector<RationalMatrix>& set,
                  int radius, const Interval& kappa_hat, const Interval& psi_value, const BoostOptions& options) {
  if (!certainly_positive(psi_value)) throw std::invalid_argument("psi lower bound must be positive");
  if (radius < 1) throw std::invalid_argument("radius must be positive");
  gamma.require_unimodular("gamma");
  const SpectralData a0_spec = analyze_spectrum(a0);
  if (a0_spec.very_proximal != Verdict::kTrue) throw SpectralError("a0 is not very proximal");

  BoostTrace trace;
  trace.gamma = gamma;
  trace.a0 = a0;
  trace.radius = radius;
  trace.kappa_hat = kappa_hat;
  trace.psi = psi_value;
  trace.log_contraction = log(*a0_spec.contraction);
  trace.q = boost_exponent_q(kappa_hat, trace.log_contraction);
  if (trace.q > options.max_exponent / (2L * radius)) {
    throw BudgetExceeded("boost exponent 2qr = " + std::to_string(2 * trace.q * radius) + " exceeds the cap " +
                         std::to_string(options.max_exponent));
  }
  trace.exponent = 2 * trace.q * radius;
  trace.expected_contraction = pow(*a0_spec.contraction, trace.exponent);

  BoostResult result;
  result.candidate = gamma * a0.power(trace.exponent) * gamma.inverse();
  trace.length = length_g(result.candidate);
  trace.length_bound = Interval(2) * length_g(gamma) + Interval(trace.exponent) * length_g(a0);

  CertifyOptions copt;
  copt.radius = radius;
  result.certificate = certify_free_from_set(result.candidate, set, copt);
  result.contraction = result.certificate.contraction;
  result.contraction_matches = result.contraction && result.contraction->overlaps(trace.expected_contraction);
  result.certificate.boost = trace;
  return result;
}

// ---------------------------------------------------------------------------

std::string FreenessCertificate::to_json() const {
  json j;
  j["version"] = version;
  j["precision_bits"] = precision_bits;
  j["element"] = matrix_json(element);
  j["spec_digest"] = spec_digest;
  j["set_digest"] = set_digest;
  if (radius) j["radius"] = *radius;
  j["metric"] = metric;
  j["coefficient_set"] = json::array();
  for (const auto& h : coefficient_set) j["coefficient_set"].push_back(matrix_json(h));
  j["ball_size"] = ball_size;
  j["noncentral_size"] = noncentral_size;
  j["very_proximal"] = rfree::to_string(very_proximal);
  put(j, "contraction", contraction);
  put(j, "lipschitz", lipschitz);
  put(j, "lipschitz_exp", lipschitz_exp);
  put(j, "lipschitz_radius", lipschitz_radius);
  put(j, "geometric", geometric);
  put(j, "threshold", threshold);
  put(j, "threshold_radius", threshold_radius);
  put(j, "margin", margin);
  j["verdict"] = certified ? "certified" : "not-certified";
  j["vacuous"] = vacuous;
  j["reason"] = reason;
  if (boost) {
    json b;
    b["gamma"] = matrix_json(boost->gamma);
    b["a0"] = matrix_json(boost->a0);
    b["radius"] = boost->radius;
    b["kappa_hat"] = interval_json(boost->kappa_hat);
    b["psi"] = interval_json(boost->psi);
    b["log_contraction"] = interval_json(boost->log_contraction);
    b["q"] = boost->q;
    b["exponent"] = boost->exponent;
    b["expected_contraction"] = interval_json(boost->expected_contraction);
    b["length"] = interval_json(boost->length);
    b["length_bound"] = interval_json(boost->length_bound);
    j["boost"] = b;
  }
  return j.dump(2);
}

FreenessCertificate FreenessCertificate::from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("certificate: ") + e.what());
  }
  FreenessCertificate c;
  try {
    c.version = j.at("version").get<std::string>();
    c.precision_bits = j.at("precision_bits").get<int>();
    PrecisionGuard guard(c.precision_bits);
    c.element = matrix_from(j.at("element"));
    c.spec_digest = j.at("spec_digest").get<std::string>();
    c.set_digest = j.at("set_digest").get<std::string>();
    if (j.contains("radius")) c.radius = j["radius"].get<int>();
    c.metric = j.at("metric").get<std::string>();
    for (const auto& h : j.at("coefficient_set")) c.coefficient_set.push_back(matrix_from(h));
    c.ball_size = j.at("ball_size").get<std::size_t>();
    c.noncentral_size = j.at("noncentral_size").get<std::size_t>();
    c.very_proximal = verdict_from(j.at("very_proximal").get<std::string>());
    c.contraction = get(j, "contraction");
    c.lipschitz = get(j, "lipschitz");
    c.lipschitz_exp = get(j, "lipschitz_exp");
    c.lipschitz_radius = get(j, "lipschitz_radius");
    c.geometric = get(j, "geometric");
    c.threshold = get(j, "threshold");
    c.threshold_radius = get(j, "threshold_radius");
    c.margin = get(j, "margin");
    const std::string verdict = j.at("verdict").get<std::string>();
    if (verdict != "certified" && verdict != "not-certified") throw InputError("certificate: bad verdict");
    c.certified = verdict == "certified";
    c.vacuous = j.at("vacuous").get<bool>();
    c.reason = j.at("reason").get<std::string>();
    if (j.contains("boost")) {
      const auto& b = j["boost"];
      BoostTrace t;
      t.gamma = matrix_from(b.at("gamma"));
      t.a0 = matrix_from(b.at("a0"));
      t.radius = b.at("radius").get<int>();
      t.kappa_hat = interval_from(b.at("kappa_hat"));
      t.psi = interval_from(b.at("psi"));
      t.log_contraction = interval_from(b.at("log_contraction"));
      t.q = b.at("q").get<long>();
      t.exponent = b.at("exponent").get<long>();
      t.expected_contraction = interval_from(b.at("expected_contraction"));
      t.length = interval_from(b.at("length"));
      t.length_bound = interval_from(b.at("length_bound"));
      c.boost = t;
    }
  } catch (const json::exception& e) {
    throw InputError(std::string("certificate: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw InputError(std::string("certificate: ") + e.what());
  }
  if (c.set_digest != rfree::set_digest(c.coefficient_set)) {
    throw InputError("certificate: set digest does not match the coefficient set");
  }
  return c;
}

}  // namespace rfree
