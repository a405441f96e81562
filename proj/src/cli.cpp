#include "rfree/cli.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "rfree/certify.hpp"
#include "rfree/group.hpp"
#include "rfree/norms.hpp"
#include "rfree/oracle.hpp"
#include "rfree/parallel.hpp"
#include "rfree/rational.hpp"
#include "rfree/search.hpp"

namespace rfree {

using nlohmann::json;

namespace {

struct RunConfig {
  std::string spec_path;
  int radius = 1;
  std::string element;
  std::string a0;
  std::optional<std::uint64_t> seed;
  int precision_bits = 128;
  double delta0 = 0.5;
  std::string t = "auto";
  int max_syllables = 6;
  int max_power = 3;
  long samples = 10000;
  std::size_t ball_cap = 1u << 20;
  int workers = 0;
  std::string out;
  std::string certificate;
  std::string trace;
  std::string event = "tubular";
  std::size_t dim = 2;
  std::string epsilons;
  std::string max_words = "500000000";
};

json interval_json(const Interval& x) { return json::array({x.lo_string(), x.hi_string()}); }

json point_json(const ProjPoint& p) {
  if (p.exact()) {
    std::vector<std::string> v;
    for (const auto& q : *p.exact()) v.push_back(format_rational(q));
    return v;
  }
  json out = json::array();
  for (const auto& x : p.coords()) out.push_back(interval_json(x));
  return out;
}

json configuration_json(const Configuration& c) {
  json j;
  j["p_plus"] = point_json(c.p_plus);
  j["p_minus"] = point_json(c.p_minus);
  j["n_plus"] = point_json(c.w_plus.normal);
  j["n_minus"] = point_json(c.w_minus.normal);
  j["separation"] = {interval_json(c.separation[0]), interval_json(c.separation[1]), interval_json(c.separation[2])};
  j["incidence"] = {interval_json(c.incidence[0]), interval_json(c.incidence[1])};
  j["resamples"] = c.resamples;
  return j;
}

json stamp(const GroupSpec* spec, const RunConfig& cfg, bool randomized) {
  json j;
  if (spec) j["spec_digest"] = spec->digest();
  if (randomized && cfg.seed) j["seed"] = std::to_string(*cfg.seed);
  j["precision_bits"] = working_precision();
  j["version"] = kToolVersion;
  return j;
}

void emit(const RunConfig& cfg, const std::string& text, std::ostream& out) {
  if (cfg.out.empty()) {
    out << text << '\n';
    return;
  }
  std::ofstream file(cfg.out);
  if (!file) throw InputError("cannot open output file " + cfg.out);
  file << text << '\n';
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream file(path);
  if (!file) throw InputError("cannot open output file " + path);
  file << text;
}

std::string read_file(const std::string& path) {
  std::ifstream file(path);
  if (!file) throw InputError("cannot read " + path);
  std::stringstream ss;
  ss << file.rdbuf();
  return ss.str();
}

GroupSpec load_spec(const RunConfig& cfg) {
  if (cfg.spec_path.empty()) throw InputError("--spec is required");
  return GroupSpec::load(cfg.spec_path);
}

void require_seed(const RunConfig& cfg) {
  if (!cfg.seed) throw InputError("--seed is required for randomized commands");
}

void require_radius(const RunConfig& cfg) {
  if (cfg.radius < 0) throw InputError("--radius must be non-negative");
}

Ball make_ball(const GroupSpec& spec, const RunConfig& cfg) {
  require_radius(cfg);
  if (cfg.ball_cap == 0) throw InputError("--ball-cap must be positive");
  BallOptions options;
  options.max_elements = cfg.ball_cap;
  return ball_enumerate(spec, cfg.radius, options);
}

RationalMatrix resolve_element(const GroupSpec& spec, const std::string& text, const char* flag) {
  if (text.empty()) throw InputError(std::string(flag) + " is required");
  return spec.element(text);
}

int certificate_status(const FreenessCertificate& cert) {
  if (cert.certified) return kExitPass;
  if (cert.very_proximal == Verdict::kUndecided) return kExitUndecided;
  return kExitFail;
}

int cmd_ball(const RunConfig& cfg, std::ostream& out) {
  const GroupSpec spec = load_spec(cfg);
  const Ball ball = make_ball(spec, cfg);
  json j = stamp(&spec, cfg, false);
  j["radius"] = ball.radius();
  j["size"] = ball.size();
  j["noncentral_size"] = ball.noncentral_size();
  j["growth"] = ball.growth();
  json elements = json::array();
  for (const auto& e : ball.elements()) {
    elements.push_back({{"label", e.label}, {"length", e.length}, {"matrix", e.matrix.to_strings()},
                        {"central", e.central}});
  }
  j["elements"] = elements;
  emit(cfg, j.dump(2), out);
  return kExitPass;
}

int cmd_certify(const RunConfig& cfg, std::ostream& out) {
  const GroupSpec spec = load_spec(cfg);
  const RationalMatrix g = resolve_element(spec, cfg.element, "--element");
  const Ball ball = make_ball(spec, cfg);
  const FreenessCertificate cert = certify_free_in_ball(g, ball, spec.digest());
  emit(cfg, cert.to_json(), out);
  return certificate_status(cert);
}

int cmd_search(const RunConfig& cfg, std::ostream& out) {
  require_seed(cfg);
  const GroupSpec spec = load_spec(cfg);
  const Ball ball = make_ball(spec, cfg);
  SearchOptions options;
  options.budget = cfg.samples;
  options.delta0 = cfg.delta0;
  options.seed = *cfg.seed;
  if (cfg.t != "auto") options.t = parse_rational(cfg.t);
  const SearchResult result = find_candidate(ball.noncentral(), spec.dim(), options);
  if (!cfg.trace.empty()) write_file(cfg.trace, result.trace_csv());

  json j = stamp(&spec, cfg, true);
  j["radius"] = cfg.radius;
  j["samples"] = result.samples;
  j["delta0"] = cfg.delta0;
  j["accepted_count"] = result.accepted_count;
  j["resamples"] = result.resamples;
  j["best_index"] = result.best_index;
  j["found_accepted"] = result.found_accepted;
  j["best_per_block"] = result.best_per_block;
  j["best_configuration"] = configuration_json(result.best);
  j["best_score"] = interval_json(result.best_score.score);
  if (!result.diagnosis.empty()) j["diagnosis"] = result.diagnosis;
  if (result.realization) {
    const auto& r = *result.realization;
    j["t"] = format_rational(result.t);
    j["element"] = r.element.to_string();
    j["element_entries"] = r.element.to_strings();
    j["basis"] = r.basis.to_strings();
    j["exact_configuration"] = configuration_json(r.exact);
    j["drift"] = r.drift;
    j["conjugator_length"] = r.conjugator_length;
    j["smallest_singular_value"] = r.smallest_singular_value;
    j["realized_score"] = interval_json(result.realized_score->score);
  }
  emit(cfg, j.dump(2), out);
  return result.realization ? kExitPass : kExitFail;
}

int cmd_boost(const RunConfig& cfg, std::ostream& out) {
  const GroupSpec spec = load_spec(cfg);
  if (cfg.radius < 1) throw InputError("boost needs --radius >= 1");
  const RationalMatrix gamma = resolve_element(spec, cfg.element, "--element");
  const RationalMatrix a0 = resolve_element(spec, cfg.a0, "--a0");
  const Ball ball = make_ball(spec, cfg);
  const auto set = ball.noncentral();
  const Loci a0_loci = att_rep_loci(a0);
  const Interval psi_value = psi(gamma, set, a0_loci);
  if (!certainly_positive(psi_value)) throw SpectralError("psi(gamma) is not certainly positive");
  const Interval kappa = kappa_from_psi(psi_value, cfg.radius);
  BoostResult result = boost(gamma, a0, set, cfg.radius, kappa, psi_value);
  result.certificate.spec_digest = spec.digest();
  result.certificate.ball_size = ball.size();
  emit(cfg, result.certificate.to_json(), out);
  return certificate_status(result.certificate);
}

int cmd_oracle(const RunConfig& cfg, std::ostream& out) {
  const GroupSpec spec = load_spec(cfg);
  const RationalMatrix gamma = resolve_element(spec, cfg.element, "--element");
  const Ball ball = make_ball(spec, cfg);
  std::vector<Coefficient> coeffs;
  for (const auto& e : ball.elements()) {
    if (!e.central) coeffs.push_back(Coefficient{e.matrix, e.label});
  }
  if (coeffs.empty()) throw InputError("the ball has no noncentral elements");
  OracleBudgets budgets;
  budgets.max_syllables = cfg.max_syllables;
  budgets.max_power = cfg.max_power;
  budgets.max_words = mpz_class(cfg.max_words);
  if (budgets.max_syllables < 1 || budgets.max_power < 1) throw InputError("oracle budgets must be positive");
  const WitnessReport report = brute_force_witness(gamma, coeffs, budgets);
  json j = json::parse(report.to_json(true));
  j["spec_digest"] = spec.digest();
  j["radius"] = cfg.radius;
  emit(cfg, j.dump(2), out);
  return report.witness ? kExitFail : kExitPass;
}

int cmd_mc(const RunConfig& cfg, std::ostream& out) {
  require_seed(cfg);
  McOptions options;
  options.event = parse_event(cfg.event);
  options.dim = cfg.dim;
  options.samples = cfg.samples;
  options.seed = *cfg.seed;
  std::optional<GroupSpec> spec;
  if (!cfg.spec_path.empty()) {
    spec = load_spec(cfg);
    options.dim = spec->dim();
  }
  if (!cfg.element.empty()) {
    options.h = spec ? spec->element(cfg.element) : parse_matrix_literal(cfg.element);
    options.dim = options.h->dim();
  }
  if (!cfg.epsilons.empty()) {
    options.epsilons.clear();
    std::stringstream ss(cfg.epsilons);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      try {
        options.epsilons.push_back(std::stod(tok));
      } catch (const std::exception&) {
        throw InputError("--epsilons: cannot parse \"" + tok + "\"");
      }
    }
  }
  const McReport report = mc_probability_check(options);
  if (!cfg.trace.empty()) write_file(cfg.trace, report.to_csv());
  json j = json::parse(report.to_json());
  const json s = stamp(spec ? &*spec : nullptr, cfg, true);
  j.update(s);
  emit(cfg, j.dump(2), out);
  return report.pass ? kExitPass : kExitFail;
}

int cmd_verify(const RunConfig& cfg, std::ostream& out) {
  if (cfg.certificate.empty()) throw InputError("--certificate is required");
  const std::string text = read_file(cfg.certificate);
  const FreenessCertificate cert = FreenessCertificate::from_json(text);
  std::string mismatch;
  const bool same = reverify_text(text, &mismatch);
  json j;
  j["certificate"] = cfg.certificate;
  j["reproduced"] = same;
  if (!same) j["mismatch"] = mismatch;
  j["certified"] = cert.certified;
  j["precision_bits"] = cert.precision_bits;
  j["spec_digest"] = cert.spec_digest;
  j["version"] = kToolVersion;
  emit(cfg, j.dump(2), out);
  if (!same) return kExitFail;
  return certificate_status(cert);
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Certificates, searches and cross-checks for free mixed-identity violations"};
  app.require_subcommand(1);
  RunConfig cfg;
  std::uint64_t seed = 0;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--precision-bits", cfg.precision_bits, "Interval working precision")->check(CLI::Range(32, 65536));
    sub->add_option("--workers", cfg.workers, "Worker threads (0: runtime default)")->check(CLI::NonNegativeNumber);
    sub->add_option("--out", cfg.out, "Artifact path (default: stdout)");
  };
  auto add_spec = [&](CLI::App* sub) {
    sub->add_option("--spec", cfg.spec_path, "Group spec file")->required();
    sub->add_option("--radius", cfg.radius, "Ball radius");
    sub->add_option("--ball-cap", cfg.ball_cap, "Largest allowed ball");
  };

  auto* ball = app.add_subcommand("ball", "Enumerate a ball and report its growth");
  add_spec(ball);
  add_common(ball);

  auto* certify = app.add_subcommand("certify", "Emit a freeness certificate for an element");
  add_spec(certify);
  add_common(certify);
  certify->add_option("--element", cfg.element, "Word label or matrix literal")->required();

  auto* search = app.add_subcommand("search", "Search flag configurations and realize an element");
  add_spec(search);
  add_common(search);
  search->add_option("--seed", seed, "Master seed")->required();
  search->add_option("--samples", cfg.samples, "Sample budget");
  search->add_option("--delta0", cfg.delta0, "Separation slack");
  search->add_option("--t", cfg.t, "Eigenvalue parameter (rational or auto)");
  search->add_option("--trace", cfg.trace, "CSV trace path");

  auto* boost_cmd = app.add_subcommand("boost", "Conjugate a power of a0 by gamma and certify it");
  add_spec(boost_cmd);
  add_common(boost_cmd);
  boost_cmd->add_option("--element", cfg.element, "gamma")->required();
  boost_cmd->add_option("--a0", cfg.a0, "Very proximal a0")->required();

  auto* oracle = app.add_subcommand("oracle", "Brute-force search for a mixed identity");
  add_spec(oracle);
  add_common(oracle);
  oracle->add_option("--element", cfg.element, "Target element")->required();
  oracle->add_option("--max-syllables", cfg.max_syllables, "Syllable budget");
  oracle->add_option("--max-power", cfg.max_power, "Largest |k| in x^k");
  oracle->add_option("--max-words", cfg.max_words, "Refuse larger enumerations");

  auto* mc = app.add_subcommand("mc-verify", "Monte Carlo probability tables");
  add_common(mc);
  mc->add_option("--spec", cfg.spec_path, "Group spec file (resolves --element labels)");
  mc->add_option("--event", cfg.event, "tubular, almost_fixed or flag_pairing");
  mc->add_option("--dim", cfg.dim, "Dimension when no matrix is given");
  mc->add_option("--element", cfg.element, "Matrix h");
  mc->add_option("--seed", seed, "Master seed")->required();
  mc->add_option("--samples", cfg.samples, "Samples per epsilon");
  mc->add_option("--epsilons", cfg.epsilons, "Comma-separated epsilon grid");
  mc->add_option("--trace", cfg.trace, "CSV table path");

  auto* verify = app.add_subcommand("verify", "Recompute a certificate and compare");
  add_common(verify);
  verify->add_option("--certificate", cfg.certificate, "Certificate file")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitPass : kExitInput;
  }
  if (search->parsed() || mc->parsed()) cfg.seed = seed;

  try {
    set_worker_count(cfg.workers);
    PrecisionGuard precision(cfg.precision_bits);
    if (ball->parsed()) return cmd_ball(cfg, out);
    if (certify->parsed()) return cmd_certify(cfg, out);
    if (search->parsed()) return cmd_search(cfg, out);
    if (boost_cmd->parsed()) return cmd_boost(cfg, out);
    if (oracle->parsed()) return cmd_oracle(cfg, out);
    if (mc->parsed()) return cmd_mc(cfg, out);
    if (verify->parsed()) return cmd_verify(cfg, out);
  } catch (const BudgetExceeded& e) {
    err << "budget: " << e.what() << '\n';
    return kExitBudget;
  } catch (const SpectralError& e) {
    err << "undecided: " << e.what() << '\n';
    return kExitUndecided;
  } catch (const ToleranceError& e) {
    err << "undecided: " << e.what() << '\n';
    return kExitUndecided;
  } catch (const InputError& e) {
    err << "input: " << e.what() << '\n';
    return kExitInput;
  } catch (const DimensionError& e) {
    err << "input: " << e.what() << '\n';
    return kExitInput;
  } catch (const RealizationError& e) {
    err << "search: " << e.what() << '\n';
    return kExitFail;
  } catch (const std::invalid_argument& e) {
    err << "input: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::domain_error& e) {
    err << "input: " << e.what() << '\n';
    return kExitInput;
  }
  return kExitInput;
}

}  // namespace rfree
