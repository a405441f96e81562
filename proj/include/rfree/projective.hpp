#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <optional>
#include <random>
#include <vector>

#include "rfree/interval.hpp"
#include "rfree/rational_matrix.hpp"

namespace rfree {

using Rng = std::mt19937_64;

/// A point [v] of the projective space P(R^d).
///
/// `coords` encloses the unit representative whose first non-negligible
/// coordinate is positive. When the point is known exactly, `exact` holds an
/// integer-or-rational representative with the same sign convention.
class ProjPoint {
 public:
  ProjPoint() = default;
  static ProjPoint from_rational(std::vector<mpq_class> v);
  static ProjPoint from_intervals(std::vector<Interval> v);
  static ProjPoint from_doubles(const std::vector<double>& v);
  static ProjPoint basis(std::size_t dim, std::size_t index);

  std::size_t dim() const { return coords_.size(); }
  const std::vector<Interval>& coords() const { return coords_; }
  const std::optional<std::vector<mpq_class>>& exact() const { return exact_; }
  std::vector<double> to_doubles() const;
  /// Width of the widest coordinate enclosure.
  double max_width() const;

 private:
  std::vector<Interval> coords_;
  std::optional<std::vector<mpq_class>> exact_;
};

/// A hyperplane W of R^d, i.e. a point of Gr_{d-1}, stored by its normal.
struct Hyperplane {
  ProjPoint normal;

  static Hyperplane from_normal(ProjPoint n) { return Hyperplane{std::move(n)}; }
  std::size_t dim() const { return normal.dim(); }
};

struct Flag {
  ProjPoint point;
  Hyperplane hyperplane;
};

/// ||v ^ w|| / (||v|| ||w||), clipped to [0, 1].
Interval dist_points(const ProjPoint& p, const ProjPoint& q);
/// |<v, n>| / (||v|| ||n||): the infimum of dist_points over the hyperplane.
Interval dist_point_hyperplane(const ProjPoint& p, const Hyperplane& w);
/// Minimum over a non-empty union of hyperplanes.
Interval dist_point_locus(const ProjPoint& p, const std::vector<Hyperplane>& locus);
/// Distance to the codimension-2 subspace W1 ∩ W2: the norm of the
/// projection of the unit representative onto span(n1, n2).
Interval dist_point_intersection(const ProjPoint& p, const Hyperplane& w1, const Hyperplane& w2);

/// |<v, n>| for the unit representatives; the incidence residual.
Interval incidence_residual(const ProjPoint& p, const Hyperplane& w);

/// v -> M v.
ProjPoint apply_action(const RationalMatrix& m, const ProjPoint& p);
/// n -> (M^-1)^T n.
Hyperplane apply_action(const RationalMatrix& m, const Hyperplane& w);
Flag apply_action(const RationalMatrix& m, const Flag& f);
/// Hyperplane action with a precomputed (M^-1)^T.
Hyperplane apply_dual(const RationalMatrix& inverse_transpose, const Hyperplane& w);

/// Interval matrix-vector product with exact rational entries.
std::vector<Interval> multiply(const RationalMatrix& m, const std::vector<Interval>& v);

// Double-precision kernels used by the samplers and the Monte Carlo harness.
namespace fast {

/// Independent standard Gaussians, normalized.
std::vector<double> random_unit_vector(std::size_t dim, Rng& rng);
/// Uniformly random orthonormal frame; columns returned as frame[k].
std::vector<std::vector<double>> random_frame(std::size_t dim, Rng& rng);
double dist_points(const std::vector<double>& v, const std::vector<double>& w);
double dist_point_hyperplane(const std::vector<double>& v, const std::vector<double>& n);
double dist_point_intersection(const std::vector<double>& v, const std::vector<double>& n1,
                               const std::vector<double>& n2);
std::vector<double> apply(const std::vector<double>& m, std::size_t dim, const std::vector<double>& v);
double dot(const std::vector<double>& a, const std::vector<double>& b);
double norm(const std::vector<double>& a);

}  // namespace fast

/// Uniform point: normalized Gaussian vector.
ProjPoint sample_point(std::size_t dim, Rng& rng);
/// Uniform flag: first and last columns of a random orthonormal frame.
Flag sample_flag(std::size_t dim, Rng& rng);

}  // namespace rfree
