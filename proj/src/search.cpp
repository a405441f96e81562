#include "rfree/search.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "rfree/certify.hpp"
#include "rfree/parallel.hpp"
#include "rfree/proximal.hpp"
#include "rfree/rational.hpp"

namespace rfree {

Configuration make_configuration(ProjPoint p_plus, Hyperplane w_minus, ProjPoint p_minus, Hyperplane w_plus) {
  Configuration c;
  c.p_plus = std::move(p_plus);
  c.p_minus = std::move(p_minus);
  c.w_plus = std::move(w_plus);
  c.w_minus = std::move(w_minus);
  c.separation[0] = dist_points(c.p_plus, c.p_minus);
  if (c.p_plus.dim() == 2) {
    c.separation[1] = Interval(1);
    c.separation[2] = Interval(1);
  } else {
    c.separation[1] = dist_point_intersection(c.p_plus, c.w_plus, c.w_minus);
    c.separation[2] = dist_point_intersection(c.p_minus, c.w_plus, c.w_minus);
  }
  c.incidence[0] = incidence_residual(c.p_plus, c.w_minus);
  c.incidence[1] = incidence_residual(c.p_minus, c.w_plus);
  return c;
}

namespace fast {

Config sample_config(std::size_t dim, Rng& rng) {
  if (dim < 2) throw std::invalid_argument("configurations need dimension at least 2");
  Config c;
  for (;;) {
    auto first = random_frame(dim, rng);
    auto second = random_frame(dim, rng);
    c.p_plus = first.front();
    c.n_minus = first.back();
    c.p_minus = second.front();
    c.n_plus = second.back();
    if (std::abs(dot(c.n_plus, c.n_minus)) < 1 - 1e-12) return c;
    ++c.resamples;
  }
}

std::array<double, 3> separations(const Config& c) {
  if (c.p_plus.size() == 2) return {dist_points(c.p_plus, c.p_minus), 1.0, 1.0};
  return {dist_points(c.p_plus, c.p_minus), dist_point_intersection(c.p_plus, c.n_plus, c.n_minus),
          dist_point_intersection(c.p_minus, c.n_plus, c.n_minus)};
}

double score(const Config& c, const std::vector<std::vector<double>>& set, std::size_t dim) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& h : set) {
    for (const auto* q : {&c.p_plus, &c.p_minus}) {
      const auto v = apply(h, dim, *q);
      best = std::min({best, dist_point_hyperplane(v, c.n_plus), dist_point_hyperplane(v, c.n_minus)});
    }
  }
  return best;
}

std::vector<std::vector<double>> to_doubles(const std::vector<RationalMatrix>& set) {
  std::vector<std::vector<double>> out;
  out.reserve(set.size());
  for (const auto& h : set) {
    std::vector<double> flat;
    for (const auto& x : h.entries()) flat.push_back(x.get_d());
    out.push_back(std::move(flat));
  }
  return out;
}

}  // namespace fast

Configuration to_configuration(const fast::Config& c) {
  Configuration out = make_configuration(ProjPoint::from_doubles(c.p_plus), Hyperplane{ProjPoint::from_doubles(c.n_minus)},
                                         ProjPoint::from_doubles(c.p_minus), Hyperplane{ProjPoint::from_doubles(c.n_plus)});
  out.resamples = c.resamples;
  return out;
}

Configuration sample_configuration(std::size_t dim, Rng& rng) { return to_configuration(fast::sample_config(dim, rng)); }

ConfigurationScore score_configuration(const Configuration& cfg, const std::vector<RationalMatrix>& set,
                                       double delta0) {
  ConfigurationScore out;
  const Loci loci{cfg.p_plus, cfg.p_minus, cfg.w_plus, cfg.w_minus};
  out.score = geometric_parameter(loci, set);
  out.vacuous = set.empty();
  bool separated = true;
  for (const auto& s : cfg.separation) separated = separated && s.lo_double() >= 1 - delta0;
  out.accepted = separated && certainly_positive(out.score);
  return out;
}

namespace {

using QVector = std::vector<mpq_class>;

mpq_class dot(const QVector& a, const QVector& b) {
  mpq_class s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

QVector rationalized(const ProjPoint& p, const mpz_class& bound) {
  if (p.exact() && std::all_of(p.exact()->begin(), p.exact()->end(),
                               [&](const mpq_class& q) { return q.get_den() <= bound; })) {
    return *p.exact();
  }
  QVector out;
  for (double x : p.to_doubles()) out.push_back(rationalize(x, bound));
  return out;
}

/// v - (<v,n>/<n,n>) n, scaled by <n,n> to stay polynomial in the inputs.
QVector project_onto(const QVector& v, const QVector& n) {
  const mpq_class nn = dot(n, n), vn = dot(v, n);
  QVector out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = nn * v[i] - vn * n[i];
  return out;
}

/// Basis of {x : <a,x> = 0 and <b,x> = 0} by row reduction.
std::vector<QVector> common_kernel(const QVector& a, const QVector& b) {
  const std::size_t d = a.size();
  std::vector<QVector> rows{a, b};
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t col = 0; col < d && r < 2; ++col) {
    std::size_t pick = r;
    while (pick < 2 && rows[pick][col] == 0) ++pick;
    if (pick == 2) continue;
    std::swap(rows[r], rows[pick]);
    const mpq_class lead = rows[r][col];
    for (auto& x : rows[r]) x /= lead;
    for (std::size_t other = 0; other < 2; ++other) {
      if (other == r || rows[other][col] == 0) continue;
      const mpq_class f = rows[other][col];
      for (std::size_t j = 0; j < d; ++j) rows[other][j] -= f * rows[r][j];
    }
    pivots.push_back(col);
    ++r;
  }
  if (r < 2) throw RealizationError("the two hyperplanes coincide after rounding");
  std::vector<QVector> basis;
  for (std::size_t free = 0; free < d; ++free) {
    if (std::find(pivots.begin(), pivots.end(), free) != pivots.end()) continue;
    QVector v(d, 0);
    v[free] = 1;
    for (std::size_t k = 0; k < pivots.size(); ++k) v[pivots[k]] = -rows[k][free];
    basis.push_back(std::move(v));
  }
  return basis;
}

/// Eigenvalues of a small symmetric matrix by cyclic Jacobi rotations.
std::vector<double> symmetric_eigenvalues(std::vector<std::vector<double>> a) {
  const std::size_t n = a.size();
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) off += a[i][j] * a[i][j];
    if (off < 1e-30) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        if (a[p][q] == 0) continue;
        const double theta = (a[q][q] - a[p][p]) / (2 * a[p][q]);
        const double t = (theta >= 0 ? 1 : -1) / (std::abs(theta) + std::sqrt(theta * theta + 1));
        const double c = 1 / std::sqrt(t * t + 1), s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a[k][p], akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a[p][k], aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
      }
    }
  }
  std::vector<double> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(a[i][i]);
  return out;
}

std::vector<double> to_double_vector(const QVector& v) {
  std::vector<double> out;
  for (const auto& x : v) out.push_back(x.get_d());
  return out;
}

}  // namespace

Realization realize_element(const Configuration& cfg, const mpq_class& t, const RealizeOptions& options) {
  if (t <= 1) throw RealizationError("eigenvalue parameter t must exceed 1");
  const std::size_t d = cfg.p_plus.dim();
  const mpz_class& bound = options.max_denominator;
  const QVector n_plus = rationalized(cfg.w_plus.normal, bound);
  const QVector n_minus = rationalized(cfg.w_minus.normal, bound);
  const QVector p_plus = project_onto(rationalized(cfg.p_plus, bound), n_minus);
  const QVector p_minus = project_onto(rationalized(cfg.p_minus, bound), n_plus);
  auto zero = [](const QVector& v) { return std::all_of(v.begin(), v.end(), [](const mpq_class& x) { return x == 0; }); };
  if (zero(p_plus) || zero(p_minus) || zero(n_plus) || zero(n_minus)) {
    throw RealizationError("degenerate configuration: a point lies on the normal of its hyperplane");
  }

  std::vector<QVector> columns{p_plus};
  if (d > 2) {
    for (auto& v : common_kernel(n_plus, n_minus)) columns.push_back(std::move(v));
  }
  columns.push_back(p_minus);
  if (columns.size() != d) throw RealizationError("basis has the wrong size");

  Realization out;
  out.basis = RationalMatrix(d);
  for (std::size_t j = 0; j < d; ++j)
    for (std::size_t i = 0; i < d; ++i) out.basis(i, j) = columns[j][i];

  std::vector<std::vector<double>> unit(d);
  for (std::size_t j = 0; j < d; ++j) {
    unit[j] = to_double_vector(columns[j]);
    const double n = fast::norm(unit[j]);
    for (auto& x : unit[j]) x /= n;
  }
  std::vector<std::vector<double>> gram(d, std::vector<double>(d));
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) gram[i][j] = fast::dot(unit[i], unit[j]);
  const auto mu = symmetric_eigenvalues(gram);
  const double mu_min = *std::min_element(mu.begin(), mu.end());
  out.smallest_singular_value = std::sqrt(std::max(mu_min, 0.0));
  if (out.smallest_singular_value < options.min_singular_value) {
    throw RealizationError("ill-conditioned basis: smallest singular value " +
                           std::to_string(out.smallest_singular_value));
  }
  std::vector<double> logs;
  for (double m : mu) logs.push_back(0.5 * std::log(m));
  double mean = 0;
  for (double l : logs) mean += l / static_cast<double>(d);
  double sum = 0;
  for (double l : logs) sum += (l - mean) * (l - mean);
  out.conjugator_length = std::sqrt(sum);

  RationalMatrix inverse;
  try {
    inverse = out.basis.inverse();
  } catch (const std::domain_error&) {
    throw RealizationError("basis is singular");
  }
  std::vector<mpq_class> diag(d, 1);
  diag.front() = t;
  diag.back() = 1 / t;
  out.element = out.basis * RationalMatrix::diagonal(diag) * inverse;

  out.exact = make_configuration(ProjPoint::from_rational(p_plus), Hyperplane{ProjPoint::from_rational(n_minus)},
                                 ProjPoint::from_rational(p_minus), Hyperplane{ProjPoint::from_rational(n_plus)});
  const SpectralData spectrum = analyze_spectrum(out.element);
  if (spectrum.very_proximal != Verdict::kTrue || !spectrum.loci) {
    throw RealizationError("realized element is not certified very proximal: " + spectrum.diagnostic);
  }
  out.contraction = *spectrum.contraction;
  out.att_error = std::max(dist_points(spectrum.loci->att, out.exact.p_plus).hi_double(),
                           dist_points(spectrum.loci->att_inverse, out.exact.p_minus).hi_double());
  out.drift = std::max({fast::dist_points(to_double_vector(p_plus), cfg.p_plus.to_doubles()),
                        fast::dist_points(to_double_vector(p_minus), cfg.p_minus.to_doubles()),
                        fast::dist_points(to_double_vector(n_plus), cfg.w_plus.normal.to_doubles()),
                        fast::dist_points(to_double_vector(n_minus), cfg.w_minus.normal.to_doubles())});
  return out;
}

mpq_class auto_t(std::size_t dim, double score_lower, double lipschitz, double safety) {
  if (!(score_lower > 0)) throw std::invalid_argument("auto t needs a positive score");
  if (std::isinf(score_lower)) return 2;
  const double needed = 2 * (std::log2(1 + lipschitz) + std::log2(safety) - std::log2(score_lower));
  const double per_step = dim == 2 ? 2.0 : 1.0;
  const long k = std::max(1L, static_cast<long>(std::floor(needed / per_step)) + 1);
  if (k > 4096) throw BudgetExceeded("auto t would need t = 2^" + std::to_string(k));
  mpz_class t = 1;
  t <<= static_cast<mp_bitcnt_t>(k);
  return mpq_class(t);
}

std::string SearchResult::trace_csv() const {
  std::ostringstream out;
  out << "sample,score,accepted\n";
  out.precision(17);
  for (const auto& r : trace) out << r.sample << ',' << r.score << ',' << (r.accepted ? 1 : 0) << '\n';
  return out.str();
}

namespace {

SearchResult run_search(const std::vector<RationalMatrix>& set, std::size_t dim, const SearchOptions& options,
                        bool parallel) {
  if (options.budget <= 0) throw InputError("search budget must be positive");
  if (!(options.delta0 > 0 && options.delta0 < 1)) throw InputError("delta0 must lie in (0, 1)");
  for (const auto& h : set) {
    if (h.dim() != dim) throw DimensionError("set element has the wrong dimension");
  }
  const auto doubles = fast::to_doubles(set);
  const long n = options.budget;
  std::vector<double> scores(static_cast<std::size_t>(n));
  std::vector<char> accepted(static_cast<std::size_t>(n));
  std::vector<int> resamples(static_cast<std::size_t>(n));
  auto body = [&](long i) {
    Rng rng(derive_seed(options.seed, static_cast<std::uint64_t>(i)));
    const auto c = fast::sample_config(dim, rng);
    const double s = fast::score(c, doubles, dim);
    const auto sep = fast::separations(c);
    const auto k = static_cast<std::size_t>(i);
    scores[k] = s;
    resamples[k] = c.resamples;
    accepted[k] = s > 0 && std::all_of(sep.begin(), sep.end(), [&](double x) { return x >= 1 - options.delta0; });
  };
  if (parallel) {
    parallel_for(n, body);
  } else {
    for (long i = 0; i < n; ++i) body(i);
  }

  SearchResult result;
  result.samples = n;
  long best_any = 0;
  double best_block = -1;
  for (long i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    result.trace.push_back({i, scores[k], accepted[k] != 0});
    result.resamples += resamples[k];
    if (scores[k] > scores[static_cast<std::size_t>(best_any)]) best_any = i;
    if (accepted[k]) {
      ++result.accepted_count;
      if (result.best_index < 0 || scores[k] > scores[static_cast<std::size_t>(result.best_index)]) {
        result.best_index = i;
      }
      best_block = std::max(best_block, scores[k]);
    }
    if ((i + 1) % 1000 == 0 || i + 1 == n) result.best_per_block.push_back(best_block);
  }
  result.found_accepted = result.best_index >= 0;
  if (!result.found_accepted) {
    result.best_index = best_any;
    result.diagnosis = "no sampled configuration met the separation threshold with a positive score";
  }

  Rng rng(derive_seed(options.seed, static_cast<std::uint64_t>(result.best_index)));
  result.best = sample_configuration(dim, rng);
  result.best_score = score_configuration(result.best, set, options.delta0);
  if (!result.found_accepted) return result;

  if (options.t) {
    result.t = *options.t;
  } else {
    const double lip = set.empty() ? 0.0 : max_lipschitz(set).hi_double();
    result.t = auto_t(dim, result.best_score.score.lo_double(), lip);
  }
  try {
    result.realization = realize_element(result.best, result.t, options.realize);
    result.realized_score = score_configuration(result.realization->exact, set, options.delta0);
  } catch (const RealizationError& e) {
    result.diagnosis = e.what();
  }
  return result;
}

}  // namespace

SearchResult find_candidate(const std::vector<RationalMatrix>& set, std::size_t dim, const SearchOptions& options) {
  return run_search(set, dim, options, true);
}

namespace serial {
SearchResult find_candidate(const std::vector<RationalMatrix>& set, std::size_t dim, const SearchOptions& options) {
  return run_search(set, dim, options, false);
}
}  // namespace serial

}  // namespace rfree
