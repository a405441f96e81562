#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "rfree/group.hpp"
#include "rfree/interval.hpp"
#include "rfree/projective.hpp"
#include "rfree/rational_matrix.hpp"

namespace rfree {

/// Two flags (p+, W-) and (p-, W+); W0 = W+ ∩ W-.
struct Configuration {
  ProjPoint p_plus;
  ProjPoint p_minus;
  Hyperplane w_plus;
  Hyperplane w_minus;
  /// d(p+, p-), d(p+, W0), d(p-, W0); in dimension 2, W0 = 0 and the last two are 1.
  std::array<Interval, 3> separation;
  /// |<p+, n->| and |<p-, n+>|.
  std::array<Interval, 2> incidence;
  int resamples = 0;
};

Configuration make_configuration(ProjPoint p_plus, Hyperplane w_minus, ProjPoint p_minus, Hyperplane w_plus);

// Double-precision configuration used inside the sampling loop.
namespace fast {

struct Config {
  std::vector<double> p_plus, p_minus, n_plus, n_minus;
  int resamples = 0;
};

/// Two independent uniform flags; redrawn while the hyperplanes coincide.
Config sample_config(std::size_t dim, Rng& rng);
std::array<double, 3> separations(const Config& c);
/// min over h and q in {p+, p-} of the distance from h.q to W+ ∪ W-;
/// matrices row-major. +inf for an empty set.
double score(const Config& c, const std::vector<std::vector<double>>& set, std::size_t dim);
std::vector<std::vector<double>> to_doubles(const std::vector<RationalMatrix>& set);

}  // namespace fast

Configuration to_configuration(const fast::Config& c);

/// Samples two uniform flags from rng.
Configuration sample_configuration(std::size_t dim, Rng& rng);

struct ConfigurationScore {
  Interval score;
  bool accepted = false;
  bool vacuous = false;
};

/// score = min over h in the set and q in {p+, p-} of d(h.q, W+ ∪ W-);
/// accepted iff score > 0 and every separation >= 1 - delta0.
ConfigurationScore score_configuration(const Configuration& cfg, const std::vector<RationalMatrix>& set,
                                       double delta0);

struct RealizeOptions {
  /// Coordinates are rationalized with this denominator bound.
  mpz_class max_denominator = mpz_class(1) << 32;
  /// Smallest singular value allowed for the unit-column basis.
  double min_singular_value = 1e-8;
};

struct Realization {
  /// B diag(t, 1, ..., 1, 1/t) B^-1, exact, det 1.
  RationalMatrix element;
  /// Columns p+, a basis of W0, p-.
  RationalMatrix basis;
  /// Exact configuration the element realizes (Att = p+, Rep = W+, and the
  /// same for the inverse with p-, W-).
  Configuration exact;
  /// Largest projective distance between the input and the exact points.
  double drift = 0;
  /// |.| length of the basis with unit columns rescaled to det 1 (double).
  double conjugator_length = 0;
  double smallest_singular_value = 0;
  /// Contraction of the realized element from its own spectrum.
  Interval contraction;
  /// Largest d_P between its attracting points and p+, p- (upper bounds).
  double att_error = 0;
};

class RealizationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Throws RealizationError when the basis is ill-conditioned or t <= 1.
Realization realize_element(const Configuration& cfg, const mpq_class& t, const RealizeOptions& options = {});

/// Smallest power of two t >= 2 with (1 + L) C(t)^(-1/2) < score / safety,
/// where C(t) = t^2 in dimension 2 and t otherwise.
mpq_class auto_t(std::size_t dim, double score_lower, double lipschitz, double safety = 2.0);

struct SearchOptions {
  long budget = 10000;
  double delta0 = 0.5;
  /// Eigenvalue parameter; empty means auto_t.
  std::optional<mpq_class> t;
  std::uint64_t seed = 0;
  RealizeOptions realize;
};

struct TraceRecord {
  long sample = 0;
  double score = 0;
  bool accepted = false;
};

struct SearchResult {
  long samples = 0;
  long accepted_count = 0;
  long resamples = 0;
  long best_index = -1;
  bool found_accepted = false;
  Configuration best;
  ConfigurationScore best_score;
  std::vector<TraceRecord> trace;
  /// Best accepted score after every 1000 samples.
  std::vector<double> best_per_block;
  mpq_class t;
  std::optional<Realization> realization;
  /// Interval score of the exact configuration; equals D of the realized element.
  std::optional<ConfigurationScore> realized_score;
  std::string diagnosis;

  /// CSV: sample,score,accepted
  std::string trace_csv() const;
};

/// Samples `budget` configurations (sample i uses seed derive_seed(seed, i)),
/// keeps the best accepted one (lowest index on ties) and realizes it.
SearchResult find_candidate(const std::vector<RationalMatrix>& set, std::size_t dim, const SearchOptions& options);
namespace serial {
SearchResult find_candidate(const std::vector<RationalMatrix>& set, std::size_t dim, const SearchOptions& options);
}

}  // namespace rfree
