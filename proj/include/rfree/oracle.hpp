#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "rfree/certify.hpp"
#include "rfree/rational_matrix.hpp"
#include "rfree/words.hpp"

namespace rfree {

struct OracleBudgets {
  int max_syllables = 6;
  int max_power = 3;
  /// Refuse enumerations with more words than this.
  mpz_class max_words = mpz_class(500000000);
};

struct WitnessReport {
  RationalMatrix target;
  std::string set_digest;
  int max_syllables = 0;
  int max_power = 0;
  mpz_class words_total;
  /// 1-based rank of the witness, or words_total when there is none.
  mpz_class words_checked;
  std::optional<Word> witness;
  std::vector<std::size_t> witness_indices;
  double elapsed_seconds = 0;
  double words_per_second = 0;

  /// Timing fields are left out unless requested, so reports from equal
  /// inputs compare equal.
  std::string to_json(bool include_timing = false) const;
};

/// Coefficients from plain matrices, without labels.
std::vector<Coefficient> as_coefficients(const std::vector<RationalMatrix>& set);

/// Searches all normal-form words within the budgets for one with
/// w(gamma) = e. The witness returned is the first in enumeration order.
/// Throws BudgetExceeded when the word count exceeds budgets.max_words.
WitnessReport brute_force_witness(const RationalMatrix& gamma, const std::vector<Coefficient>& coeffs,
                                  const OracleBudgets& budgets = {});
namespace serial {
WitnessReport brute_force_witness(const RationalMatrix& gamma, const std::vector<Coefficient>& coeffs,
                                  const OracleBudgets& budgets = {});
}

struct CrossValidation {
  bool pass = false;
  /// Empty coefficient set: nothing to check.
  bool vacuous = false;
  std::optional<WitnessReport> report;
};

/// Runs the brute-force search on a certified certificate's element and set.
/// Throws std::invalid_argument when the certificate is not certified.
CrossValidation cross_validate(const FreenessCertificate& cert, const OracleBudgets& budgets = {});

// ---------------------------------------------------------------------------
// Monte Carlo checks of the geometric probability bounds.

enum class McEvent {
  /// d(v, W) < eps for uniform v and the fixed hyperplane e_d^perp.
  kTubular,
  /// ||h v ^ v|| < eps for uniform unit v; h diagonalizable and not scalar.
  kAlmostFixed,
  /// d(h v, W) < eps for a uniform flag (v, W).
  kFlagPairing,
};

const char* to_string(McEvent e);
McEvent parse_event(const std::string& name);

struct McOptions {
  McEvent event = McEvent::kTubular;
  std::size_t dim = 2;
  /// Required by almost_fixed and flag_pairing.
  std::optional<RationalMatrix> h;
  std::vector<double> epsilons{1e-1, 3e-2, 1e-2, 3e-3, 1e-3, 3e-4};
  long samples = 1000000;
  std::uint64_t seed = 0;
  /// Samples per seeded block; block b uses derive_seed(seed, b).
  long block = 4096;
};

struct McRow {
  double epsilon = 0;
  long hits = 0;
  double probability = 0;
  double standard_error = 0;
  /// shape(eps) = eps^exponent, times omega(h) for almost_fixed.
  double shape = 0;
  /// fitted constant * shape
  double bound = 0;
  bool held_out = false;
  /// Held-out rows: probability <= bound + 3 se. Fit rows are true.
  bool within_bound = true;
  /// Dimension-2 tubular only: (2/pi) arcsin(eps) and the 3 se check against it.
  std::optional<double> closed_form;
  std::optional<bool> matches_closed_form;
};

struct McReport {
  McEvent event = McEvent::kTubular;
  std::size_t dim = 0;
  long samples = 0;
  std::uint64_t seed = 0;
  double exponent = 0;
  std::optional<double> omega;
  double fitted_constant = 0;
  std::vector<McRow> rows;
  bool pass = false;

  std::string to_json() const;
  std::string to_csv() const;
};

/// Rows at even grid positions fit the constant (the largest p / shape);
/// rows at odd positions are checked against it.
McReport mc_probability_check(const McOptions& options);
namespace serial {
McReport mc_probability_check(const McOptions& options);
}

}  // namespace rfree
