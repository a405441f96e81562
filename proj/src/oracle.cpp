#include "rfree/oracle.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

#include "rfree/parallel.hpp"
#include "rfree/projective.hpp"
#include "rfree/proximal.hpp"

namespace rfree {

using nlohmann::json;

std::string WitnessReport::to_json(bool include_timing) const {
  json j;
  j["target"] = target.to_strings();
  j["set_digest"] = set_digest;
  j["max_syllables"] = max_syllables;
  j["max_power"] = max_power;
  j["words_total"] = words_total.get_str();
  j["words_checked"] = words_checked.get_str();
  if (witness) {
    j["witness"] = to_text(*witness);
    j["witness_syllables"] = witness->size();
    j["witness_indices"] = witness_indices;
  } else {
    j["witness"] = nullptr;
  }
  if (include_timing) {
    j["elapsed_seconds"] = elapsed_seconds;
    j["words_per_second"] = words_per_second;
  }
  j["version"] = kToolVersion;
  return j.dump(2);
}

std::vector<Coefficient> as_coefficients(const std::vector<RationalMatrix>& set) {
  std::vector<Coefficient> out;
  out.reserve(set.size());
  for (const auto& m : set) out.push_back(Coefficient{m, std::nullopt});
  return out;
}

namespace {

/// Lexicographically first word with exactly `length` syllables starting at
/// `first` whose value is the identity.
std::optional<std::vector<std::size_t>> search_subtree(const WordEnumerator& en,
                                                       const std::vector<ScaledIntegerMatrix>& letters,
                                                       std::size_t first, int length) {
  const std::size_t m = en.coefficient_count(), a = en.alphabet_size();
  std::vector<ScaledIntegerMatrix> prefix(static_cast<std::size_t>(length));
  std::vector<std::size_t> idx(static_cast<std::size_t>(length));
  idx[0] = first;
  prefix[0] = letters[first];
  if (length == 1) {
    if (prefix[0].is_identity()) return idx;
    return std::nullopt;
  }
  // Iterative DFS over positions 1..length-1; cursor[k] is the next letter to try.
  std::vector<std::size_t> cursor(static_cast<std::size_t>(length), 0);
  auto range = [&](std::size_t pos) {
    return en.is_power_index(idx[pos - 1]) ? std::pair<std::size_t, std::size_t>{0, m}
                                           : std::pair<std::size_t, std::size_t>{m, a};
  };
  std::size_t pos = 1;
  cursor[1] = range(1).first;
  while (pos >= 1) {
    const std::size_t hi = range(pos).second;
    if (cursor[pos] >= hi) {
      --pos;
      continue;
    }
    const std::size_t letter = cursor[pos]++;
    idx[pos] = letter;
    ScaledIntegerMatrix::multiply(prefix[pos - 1], letters[letter], prefix[pos]);
    if (pos + 1 == static_cast<std::size_t>(length)) {
      if (prefix[pos].is_identity()) return idx;
    } else {
      ++pos;
      cursor[pos] = range(pos).first;
    }
  }
  return std::nullopt;
}

WitnessReport run_oracle(const RationalMatrix& gamma, const std::vector<Coefficient>& coeffs,
                         const OracleBudgets& budgets, bool parallel) {
  const auto start = std::chrono::steady_clock::now();
  for (const auto& c : coeffs) {
    if (c.element.dim() != gamma.dim()) throw DimensionError("coefficient dimension does not match the target");
  }
  WordEnumerator en(coeffs, budgets.max_syllables, budgets.max_power);
  WitnessReport report;
  report.target = gamma;
  std::vector<RationalMatrix> plain;
  for (const auto& c : coeffs) plain.push_back(c.element);
  report.set_digest = set_digest(plain);
  report.max_syllables = budgets.max_syllables;
  report.max_power = budgets.max_power;
  report.words_total = en.count();
  if (report.words_total > budgets.max_words) {
    throw BudgetExceeded("enumeration of " + report.words_total.get_str() + " words exceeds the cap of " +
                         budgets.max_words.get_str());
  }

  std::vector<ScaledIntegerMatrix> letters;
  for (std::size_t i = 0; i < en.alphabet_size(); ++i) {
    letters.emplace_back(en.is_power_index(i) ? gamma.power(en.exponent(i)) : coeffs[i].element);
  }

  const long a = static_cast<long>(en.alphabet_size());
  for (int length = 1; length <= budgets.max_syllables && !report.witness; ++length) {
    std::vector<std::optional<std::vector<std::size_t>>> found(static_cast<std::size_t>(a));
    std::atomic<long> best_first{a};
    auto task = [&](long first) {
      if (first > best_first.load()) return;
      auto hit = search_subtree(en, letters, static_cast<std::size_t>(first), length);
      if (hit) {
        found[static_cast<std::size_t>(first)] = std::move(hit);
        long cur = best_first.load();
        while (first < cur && !best_first.compare_exchange_weak(cur, first)) {
        }
      }
    };
    if (parallel) {
      parallel_for(a, task);
    } else {
      for (long f = 0; f < a; ++f) {
        task(f);
        if (found[static_cast<std::size_t>(f)]) break;
      }
    }
    for (auto& hit : found) {
      if (hit) {
        report.witness_indices = *hit;
        report.witness = en.word(*hit);
        break;
      }
    }
  }
  report.words_checked = report.witness ? en.rank(report.witness_indices) : report.words_total;
  report.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  report.words_per_second =
      report.elapsed_seconds > 0 ? report.words_checked.get_d() / report.elapsed_seconds : 0.0;
  return report;
}

}  // namespace

WitnessReport brute_force_witness(const RationalMatrix& gamma, const std::vector<Coefficient>& coeffs,
                                  const OracleBudgets& budgets) {
  return run_oracle(gamma, coeffs, budgets, true);
}

namespace serial {
WitnessReport brute_force_witness(const RationalMatrix& gamma, const std::vector<Coefficient>& coeffs,
                                  const OracleBudgets& budgets) {
  return run_oracle(gamma, coeffs, budgets, false);
}
}  // namespace serial

CrossValidation cross_validate(const FreenessCertificate& cert, const OracleBudgets& budgets) {
  if (!cert.certified) throw std::invalid_argument("cross validation needs a certified certificate");
  CrossValidation out;
  if (cert.coefficient_set.empty()) {
    out.pass = true;
    out.vacuous = true;
    return out;
  }
  out.report = brute_force_witness(cert.element, as_coefficients(cert.coefficient_set), budgets);
  out.pass = !out.report->witness.has_value();
  return out;
}

// ---------------------------------------------------------------------------

const char* to_string(McEvent e) {
  switch (e) {
    case McEvent::kTubular:
      return "tubular";
    case McEvent::kAlmostFixed:
      return "almost_fixed";
    case McEvent::kFlagPairing:
      return "flag_pairing";
  }
  return "?";
}

McEvent parse_event(const std::string& name) {
  if (name == "tubular") return McEvent::kTubular;
  if (name == "almost_fixed") return McEvent::kAlmostFixed;
  if (name == "flag_pairing") return McEvent::kFlagPairing;
  throw InputError("unknown Monte Carlo event \"" + name + "\"");
}

std::string McReport::to_json() const {
  json j;
  j["event"] = rfree::to_string(event);
  j["dim"] = dim;
  j["samples"] = samples;
  j["seed"] = std::to_string(seed);
  j["exponent"] = exponent;
  if (omega) j["omega"] = *omega;
  j["fitted_constant"] = fitted_constant;
  j["pass"] = pass;
  j["version"] = kToolVersion;
  json rows_json = json::array();
  for (const auto& r : rows) {
    json row{{"epsilon", r.epsilon},        {"hits", r.hits},   {"probability", r.probability},
             {"standard_error", r.standard_error}, {"bound", r.bound}, {"held_out", r.held_out},
             {"within_bound", r.within_bound}};
    if (r.closed_form) row["closed_form"] = *r.closed_form;
    if (r.matches_closed_form) row["matches_closed_form"] = *r.matches_closed_form;
    rows_json.push_back(row);
  }
  j["rows"] = rows_json;
  return j.dump(2);
}

std::string McReport::to_csv() const {
  std::ostringstream out;
  out.precision(17);
  out << "epsilon,hits,probability,standard_error,bound,held_out,within_bound,closed_form\n";
  for (const auto& r : rows) {
    out << r.epsilon << ',' << r.hits << ',' << r.probability << ',' << r.standard_error << ',' << r.bound << ','
        << (r.held_out ? 1 : 0) << ',' << (r.within_bound ? 1 : 0) << ',';
    if (r.closed_form) out << *r.closed_form;
    out << '\n';
  }
  return out.str();
}

namespace {

double wedge_norm(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = i + 1; j < a.size(); ++j) {
      const double c = a[i] * b[j] - a[j] * b[i];
      s += c * c;
    }
  }
  return std::sqrt(s);
}

McReport run_mc(const McOptions& options, bool parallel) {
  if (options.samples < 10000) throw InputError("Monte Carlo needs at least 10^4 samples");
  if (options.dim < 2) throw InputError("Monte Carlo needs dimension at least 2");
  if (options.epsilons.size() < 2) throw InputError("epsilon grid needs at least two values");
  for (double e : options.epsilons) {
    if (!(e > 0 && e < 1)) throw InputError("epsilon values must lie in (0, 1)");
  }
  if (options.block <= 0) throw InputError("block size must be positive");
  const std::size_t d = options.dim;

  McReport report;
  report.event = options.event;
  report.dim = d;
  report.samples = options.samples;
  report.seed = options.seed;

  std::vector<double> h;
  if (options.event != McEvent::kTubular) {
    if (!options.h) throw InputError(std::string(to_string(options.event)) + " needs a matrix h");
    if (options.h->dim() != d) throw DimensionError("h has the wrong dimension");
    for (const auto& x : options.h->entries()) h.push_back(x.get_d());
  }
  switch (options.event) {
    case McEvent::kTubular:
      report.exponent = 1.0;
      break;
    case McEvent::kAlmostFixed: {
      const ScalarDeviation dev = scalar_deviation(*options.h);
      report.omega = dev.omega.mid_double();
      report.exponent = 0.5;
      break;
    }
    case McEvent::kFlagPairing:
      report.exponent = 0.25;
      break;
  }

  // One statistic per sample; an event at eps is statistic < eps.
  auto statistic = [&](Rng& rng) {
    switch (options.event) {
      case McEvent::kTubular: {
        const auto v = fast::random_unit_vector(d, rng);
        return std::abs(v[d - 1]);
      }
      case McEvent::kAlmostFixed: {
        const auto v = fast::random_unit_vector(d, rng);
        return wedge_norm(fast::apply(h, d, v), v);
      }
      case McEvent::kFlagPairing: {
        const auto frame = fast::random_frame(d, rng);
        return fast::dist_point_hyperplane(fast::apply(h, d, frame.front()), frame.back());
      }
    }
    return 1.0;
  };

  const std::size_t grid = options.epsilons.size();
  const long blocks = (options.samples + options.block - 1) / options.block;
  std::vector<std::vector<long>> counts(static_cast<std::size_t>(blocks), std::vector<long>(grid, 0));
  auto body = [&](long b) {
    Rng rng(derive_seed(options.seed, static_cast<std::uint64_t>(b)));
    const long begin = b * options.block, end = std::min(options.samples, begin + options.block);
    auto& c = counts[static_cast<std::size_t>(b)];
    for (long i = begin; i < end; ++i) {
      const double s = statistic(rng);
      for (std::size_t k = 0; k < grid; ++k) {
        if (s < options.epsilons[k]) ++c[k];
      }
    }
  };
  if (parallel) {
    parallel_for(blocks, body);
  } else {
    for (long b = 0; b < blocks; ++b) body(b);
  }

  const double n = static_cast<double>(options.samples);
  for (std::size_t k = 0; k < grid; ++k) {
    McRow row;
    row.epsilon = options.epsilons[k];
    for (const auto& c : counts) row.hits += c[k];
    row.probability = static_cast<double>(row.hits) / n;
    row.standard_error = std::sqrt(row.probability * (1 - row.probability) / n);
    row.shape = std::pow(row.epsilon, report.exponent) * report.omega.value_or(1.0);
    row.held_out = k % 2 == 1;
    if (options.event == McEvent::kTubular && d == 2) {
      const double exact = 2 / M_PI * std::asin(row.epsilon);
      row.closed_form = exact;
      row.matches_closed_form = std::abs(row.probability - exact) <= 3 * std::sqrt(exact * (1 - exact) / n);
    }
    report.rows.push_back(row);
  }
  for (const auto& r : report.rows) {
    if (!r.held_out) report.fitted_constant = std::max(report.fitted_constant, r.probability / r.shape);
  }
  report.pass = true;
  for (auto& r : report.rows) {
    r.bound = report.fitted_constant * r.shape;
    if (r.held_out) r.within_bound = r.probability <= r.bound + 3 * r.standard_error;
    report.pass = report.pass && r.within_bound && r.matches_closed_form.value_or(true);
  }
  return report;
}

}  // namespace

McReport mc_probability_check(const McOptions& options) { return run_mc(options, true); }

namespace serial {
McReport mc_probability_check(const McOptions& options) { return run_mc(options, false); }
}  // namespace serial

}  // namespace rfree
