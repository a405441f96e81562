#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rfree/group.hpp"
#include "rfree/interval.hpp"
#include "rfree/proximal.hpp"
#include "rfree/rational_matrix.hpp"

namespace rfree {

inline constexpr const char* kToolVersion = "0.1.0";

struct BoostTrace {
  RationalMatrix gamma;
  RationalMatrix a0;
  int radius = 0;
  Interval kappa_hat;
  Interval psi;
  /// log C_{a0}
  Interval log_contraction;
  long q = 0;
  /// 2 q r
  long exponent = 0;
  /// C_{a0}^(2qr), to compare against the boosted element's contraction.
  Interval expected_contraction;
  /// |gamma~| and the bound 2|gamma| + 2qr|a0|.
  Interval length;
  Interval length_bound;
};

struct FreenessCertificate {
  RationalMatrix element;
  std::string spec_digest;
  std::string set_digest;
  std::optional<int> radius;
  std::string metric = "word";
  std::vector<RationalMatrix> coefficient_set;
  std::size_t ball_size = 0;
  std::size_t noncentral_size = 0;

  Verdict very_proximal = Verdict::kUndecided;
  std::optional<Interval> contraction;
  /// max ||h||^2 ||h^-1||^2 over the set.
  std::optional<Interval> lipschitz;
  /// max exp(4|h|) over the set, and exp(4r) when a radius is given.
  std::optional<Interval> lipschitz_exp;
  std::optional<Interval> lipschitz_radius;
  std::optional<Interval> geometric;
  /// (1 + L) C^(-1/2)
  std::optional<Interval> threshold;
  /// Same with L replaced by exp(4r), for comparison.
  std::optional<Interval> threshold_radius;
  /// D - threshold; positive lower bound means certified.
  std::optional<Interval> margin;

  bool certified = false;
  bool vacuous = false;
  std::string reason;
  std::optional<BoostTrace> boost;
  int precision_bits = 0;
  std::string version = kToolVersion;

  std::string to_json() const;
  static FreenessCertificate from_json(const std::string& text);
};

/// Canonical digest of an ordered element set.
std::string set_digest(const std::vector<RationalMatrix>& set);

/// min over h in F and a in {att, att_inverse} of the distance from h.a to
/// rep ∪ rep_inverse; +inf for an empty set.
Interval geometric_parameter(const Loci& loci, const std::vector<RationalMatrix>& set);
namespace serial {
Interval geometric_parameter(const Loci& loci, const std::vector<RationalMatrix>& set);
}

/// Same quantity for the loci of g; throws SpectralError unless g is very proximal.
Interval geometric_parameter(const RationalMatrix& g, const std::vector<RationalMatrix>& set);

/// max ||h||^2 ||h^-1||^2 over the set (0 for the empty set).
Interval max_lipschitz(const std::vector<RationalMatrix>& set);

struct CertifyOptions {
  std::optional<Interval> lipschitz_override;
  std::optional<int> radius;
  std::string spec_digest;
};

/// Checks D > (1 + L) C^(-1/2) with interval-sound comparison. The set must
/// not contain central elements.
FreenessCertificate certify_free_from_set(const RationalMatrix& g, const std::vector<RationalMatrix>& set,
                                          const CertifyOptions& options = {});

FreenessCertificate certify_free_in_ball(const RationalMatrix& g, const Ball& ball, const std::string& spec_digest);

/// Recomputes a certificate from its element and set; true when verdict and
/// every interval agree.
bool reverify(const FreenessCertificate& cert, std::string* mismatch = nullptr);
/// Same check against the certificate's own text, so decimal endpoints are
/// compared as written rather than after a parse and reprint.
bool reverify_text(const std::string& text, std::string* mismatch = nullptr);

/// Loci of a0 transported by g: g.Att(a0), g.Rep(a0), and likewise for a0^-1.
Loci transport(const Loci& loci, const RationalMatrix& g);

/// psi(g) = D of g a0 g^-1 over the set, computed from a0's loci moved by g.
Interval psi(const RationalMatrix& g, const std::vector<RationalMatrix>& set, const Loci& a0_loci);

struct BoostOptions {
  /// Largest allowed exponent 2qr.
  long max_exponent = 4096;
};

struct BoostResult {
  RationalMatrix candidate;
  FreenessCertificate certificate;
  /// Contraction of the boosted element from its own spectrum.
  std::optional<Interval> contraction;
  bool contraction_matches = false;
};

/// q = ceil((5 + kappa) / l) with l = log C_{a0}, decided on enclosures
/// (the upper candidate is taken when the enclosure straddles an integer).
long boost_exponent_q(const Interval& kappa_hat, const Interval& log_contraction);

/// Smallest kappa with psi >= exp(-kappa r), i.e. -log(psi_lo)/r rounded outward.
Interval kappa_from_psi(const Interval& psi_value, int radius);

/// gamma~ = gamma a0^(2qr) gamma^-1, then certify_free_from_set over the set.
BoostResult boost(const RationalMatrix& gamma, const RationalMatrix& a0, const std::vector<RationalMatrix>& set,
                  int radius, const Interval& kappa_hat, const Interval& psi_value,
                  const BoostOptions& options = {});

}  // namespace rfree
