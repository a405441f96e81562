#include "rfree/norms.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rfree/polynomial.hpp"

namespace rfree {

namespace {

std::vector<Interval> gram_eigenvalues(const RationalMatrix& m) {
  const RationalMatrix gram = m.transpose() * m;
  const RootIsolation iso = isolate_roots(characteristic_polynomial(gram));
  if (!iso.isolated) {
    throw ToleranceError("singular values of " + m.to_string() +
                         " could not be isolated: " + iso.diagnostic);
  }
  std::vector<Interval> values;
  for (const auto& root : iso.roots) {
    // M^T M is symmetric positive semidefinite, so every root is real and >= 0;
    // the real part of the enclosure holds it.
    Interval v = max(root.value.re, Interval(0));
    for (int k = 0; k < root.multiplicity; ++k) values.push_back(v);
  }
  std::sort(values.begin(), values.end(), [](const Interval& a, const Interval& b) {
    return mpfr_greater_p(a.hi(), b.hi());
  });
  return values;
}

}  // namespace

std::vector<Interval> squared_singular_values(const RationalMatrix& m) { return gram_eigenvalues(m); }

Interval op_norm(const RationalMatrix& m, const NormOptions& options) {
  std::vector<Interval> values = gram_eigenvalues(m);
  Interval top = values.front();
  for (const auto& v : values) top = max(top, v);
  Interval norm = sqrt(top);
  if (m.has_unit_determinant()) norm = max(norm, Interval(1));
  const double tolerance = options.relative_tolerance > 0
                               ? options.relative_tolerance
                               : std::ldexp(1.0, 32 - working_precision());
  if (norm.relative_width() > tolerance) {
    throw ToleranceError("operator norm enclosure of " + m.to_string() + " is too wide: " +
                         norm.to_string());
  }
  return norm;
}

LengthReport length_report(const RationalMatrix& m) {
  std::vector<Interval> values = gram_eigenvalues(m);
  Interval sum(0);
  for (const auto& mu : values) {
    if (!certainly_positive(mu)) throw std::domain_error("length of a singular matrix");
    Interval half_log = log(mu) / Interval(2);
    sum += sqr(half_log);
  }
  LengthReport report;
  report.length = sqrt(sum);
  report.log_norm = log(op_norm(m));
  report.upper_bracket = sqrt(Interval(static_cast<long>(m.dim()))) * report.log_norm;
  return report;
}

Interval lip_bound(const RationalMatrix& m) {
  return sqr(op_norm(m)) * sqr(op_norm(m.inverse()));
}

Interval lip_exp_bound(const RationalMatrix& m) { return exp(Interval(4) * length_g(m)); }

}  // namespace rfree
