#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rfree/interval.hpp"
#include "rfree/polynomial.hpp"
#include "rfree/projective.hpp"
#include "rfree/rational_matrix.hpp"

namespace rfree {

enum class Verdict { kTrue, kFalse, kUndecided };

const char* to_string(Verdict v);

/// Attracting points and repelling hyperplanes of g and g^-1.
struct Loci {
  ProjPoint att;          // Att(g)
  ProjPoint att_inverse;  // Att(g^-1)
  Hyperplane rep;         // Rep(g)
  Hyperplane rep_inverse; // Rep(g^-1)
};

struct SpectralData {
  /// |lambda_1| >= ... >= |lambda_d|, with multiplicity.
  std::vector<Interval> moduli;
  Interval top_gap;
  Interval bottom_gap;
  Verdict very_proximal = Verdict::kUndecided;
  std::string diagnostic;
  /// max(top_gap, bottom_gap), set when very proximal.
  std::optional<Interval> contraction;
  std::optional<Loci> loci;
  /// Set when the matrix is diagonalizable and not scalar.
  std::optional<Interval> theta;
  std::optional<Interval> omega;

  std::string to_json() const;
};

class SpectralError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Eigenvalue moduli, very-proximal verdict, contraction and loci of a det-1
/// matrix. A "true" verdict is only returned when both gaps are certified.
SpectralData analyze_spectrum(const RationalMatrix& m);

/// Diagonalizable over C: square-free characteristic polynomial, or the
/// radical of the characteristic polynomial annihilates m.
bool is_diagonalizable(const RationalMatrix& m);

struct ScalarDeviation {
  /// max |lambda_i - lambda_j|
  Interval theta;
  /// sqrt((||m|| + theta) / theta^2)
  Interval omega;
};

/// Throws SpectralError for scalar or non-diagonalizable input, or when the
/// roots cannot be isolated.
ScalarDeviation scalar_deviation(const RationalMatrix& m);

/// Throws SpectralError unless m is very proximal.
Loci att_rep_loci(const RationalMatrix& m);

/// Right and left eigenvectors of a simple real eigenvalue, from a column and
/// a row of adj(M - lambda Id). Exact when lambda is rational.
struct EigenPair {
  ProjPoint right;
  ProjPoint left;
};
std::optional<EigenPair> simple_eigenvectors(const RationalMatrix& m, const RootEnclosure& root);

}  // namespace rfree
