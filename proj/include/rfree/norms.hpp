#pragma once

#include <stdexcept>

#include "rfree/interval.hpp"
#include "rfree/rational_matrix.hpp"

namespace rfree {

class ToleranceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct NormOptions {
  /// Required relative width of norm enclosures; 0 means 2^(32 - working precision).
  double relative_tolerance = 0;
};

/// Euclidean operator norm sqrt(lambda_max(M^T M)), enclosed from the exact
/// characteristic polynomial of M^T M. For det-1 inputs the enclosure is
/// intersected with [1, inf).
Interval op_norm(const RationalMatrix& m, const NormOptions& options = {});

/// Squared singular values of M with multiplicity, largest first.
std::vector<Interval> squared_singular_values(const RationalMatrix& m);

struct LengthReport {
  /// sqrt(sum_i log^2 sigma_i(M))
  Interval length;
  Interval log_norm;
  /// sqrt(d) * log ||M||
  Interval upper_bracket;
};

LengthReport length_report(const RationalMatrix& m);
inline Interval length_g(const RationalMatrix& m) { return length_report(m).length; }

/// ||M||^2 ||M^-1||^2, an upper bound for the Lipschitz constant of the
/// projective action.
Interval lip_bound(const RationalMatrix& m);
/// exp(4 |M|), the coarser bound, for comparison.
Interval lip_exp_bound(const RationalMatrix& m);

}  // namespace rfree
