#include "rfree/proximal.hpp"

#include <algorithm>

#include "json.hpp"

#include "rfree/norms.hpp"
#include "rfree/rational.hpp"

namespace rfree {

namespace {

using IntervalMatrix = std::vector<std::vector<Interval>>;

Interval interval_det(const IntervalMatrix& a) {
  const std::size_t n = a.size();
  if (n == 0) return Interval(1);
  if (n == 1) return a[0][0];
  if (n == 2) return a[0][0] * a[1][1] - a[0][1] * a[1][0];
  Interval s(0);
  for (std::size_t j = 0; j < n; ++j) {
    IntervalMatrix minor(n - 1);
    for (std::size_t r = 1; r < n; ++r) {
      for (std::size_t c = 0; c < n; ++c) {
        if (c != j) minor[r - 1].push_back(a[r][c]);
      }
    }
    Interval term = a[0][j] * interval_det(minor);
    s = (j % 2 == 0) ? s + term : s - term;
  }
  return s;
}

/// adj(A)[i][j] = (-1)^(i+j) det(A without row j and column i).
IntervalMatrix interval_adjugate(const IntervalMatrix& a) {
  const std::size_t n = a.size();
  IntervalMatrix adj(n, std::vector<Interval>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      IntervalMatrix minor;
      for (std::size_t r = 0; r < n; ++r) {
        if (r == j) continue;
        minor.emplace_back();
        for (std::size_t c = 0; c < n; ++c) {
          if (c != i) minor.back().push_back(a[r][c]);
        }
      }
      Interval d = interval_det(minor);
      adj[i][j] = ((i + j) % 2 == 0) ? d : -d;
    }
  }
  return adj;
}

RationalMatrix rational_adjugate(const RationalMatrix& a) {
  const std::size_t n = a.dim();
  RationalMatrix adj(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      std::vector<mpq_class> entries;
      for (std::size_t r = 0; r < n; ++r) {
        if (r == j) continue;
        for (std::size_t c = 0; c < n; ++c) {
          if (c != i) entries.push_back(a(r, c));
        }
      }
      mpq_class d = n == 1 ? mpq_class(1) : RationalMatrix(n - 1, std::move(entries)).determinant();
      adj(i, j) = ((i + j) % 2 == 0) ? d : mpq_class(-d);
    }
  }
  return adj;
}

/// A rational value of the root if it has a small denominator.
std::optional<mpq_class> rational_root(const Polynomial& p, const RootEnclosure& root) {
  if (root.realness != Realness::kReal) return std::nullopt;
  const mpz_class bound = mpz_class(1) << std::max(8, working_precision() / 3);
  const mpq_class guess = rationalize(root.value.re.mid_rational(), bound);
  if (root.value.re.contains(guess) && p(guess) == 0) return guess;
  return std::nullopt;
}

struct Entry {
  const RootEnclosure* root;
  Interval modulus;
};

Interval max_of(const std::vector<Interval>& v, std::size_t skip) {
  std::optional<Interval> m;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i == skip) continue;
    m = m ? max(*m, v[i]) : v[i];
  }
  return *m;
}

Interval min_of(const std::vector<Interval>& v, std::size_t skip) {
  std::optional<Interval> m;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i == skip) continue;
    m = m ? min(*m, v[i]) : v[i];
  }
  return *m;
}

/// True when whichever distinct root attains the extreme modulus provably
/// shares it with another eigenvalue (a repeated root, a conjugate pair, or
/// a rational pair r, -r).
bool extreme_is_tied(const Polynomial& p, const std::vector<RootEnclosure>& roots, bool top) {
  Interval bound = roots.front().modulus;
  for (const auto& r : roots) bound = top ? max(bound, r.modulus) : min(bound, r.modulus);
  for (const auto& r : roots) {
    const bool candidate = top ? !mpfr_less_p(r.modulus.hi(), bound.lo())
                               : !mpfr_greater_p(r.modulus.lo(), bound.hi());
    if (!candidate) continue;
    if (r.multiplicity >= 2 || r.realness == Realness::kNonReal) continue;
    const auto q = rational_root(p, r);
    if (!q || p(-*q) != 0) return false;
  }
  return true;
}

nlohmann::json interval_json(const Interval& x) { return {x.lo_string(), x.hi_string()}; }

nlohmann::json point_json(const ProjPoint& p) {
  nlohmann::json out;
  out["coords"] = nlohmann::json::array();
  for (const auto& c : p.coords()) out["coords"].push_back(interval_json(c));
  if (p.exact()) {
    out["exact"] = nlohmann::json::array();
    for (const auto& q : *p.exact()) out["exact"].push_back(format_rational(q));
  }
  return out;
}

}  // namespace

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::kTrue:
      return "true";
    case Verdict::kFalse:
      return "false";
    case Verdict::kUndecided:
      return "undecided";
  }
  return "undecided";
}

std::optional<EigenPair> simple_eigenvectors(const RationalMatrix& m, const RootEnclosure& root) {
  const std::size_t n = m.dim();
  const Polynomial p = characteristic_polynomial(m);
  if (auto q = rational_root(p, root)) {
    const RationalMatrix adj = rational_adjugate(m - RationalMatrix::diagonal(std::vector<mpq_class>(n, *q)));
    std::size_t col = n, row = n;
    for (std::size_t j = 0; j < n && col == n; ++j) {
      for (std::size_t i = 0; i < n; ++i) {
        if (adj(i, j) != 0) {
          col = j;
          row = i;
          break;
        }
      }
    }
    if (col == n) return std::nullopt;
    std::vector<mpq_class> right(n), left(n);
    for (std::size_t i = 0; i < n; ++i) right[i] = adj(i, col);
    for (std::size_t j = 0; j < n; ++j) left[j] = adj(row, j);
    return EigenPair{ProjPoint::from_rational(std::move(right)), ProjPoint::from_rational(std::move(left))};
  }
  if (root.realness != Realness::kReal) return std::nullopt;
  IntervalMatrix a(n, std::vector<Interval>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      a[i][j] = Interval(m(i, j));
      if (i == j) a[i][j] -= root.value.re;
    }
  }
  const IntervalMatrix adj = interval_adjugate(a);
  auto mid_norm = [](const std::vector<Interval>& v) {
    double s = 0;
    for (const auto& x : v) s += x.mid_double() * x.mid_double();
    return s;
  };
  std::size_t best_col = 0, best_row = 0;
  double col_score = -1, row_score = -1;
  std::vector<std::vector<Interval>> cols(n, std::vector<Interval>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) cols[j][i] = adj[i][j];
  }
  for (std::size_t k = 0; k < n; ++k) {
    if (double s = mid_norm(cols[k]); s > col_score) {
      col_score = s;
      best_col = k;
    }
    if (double s = mid_norm(adj[k]); s > row_score) {
      row_score = s;
      best_row = k;
    }
  }
  try {
    return EigenPair{ProjPoint::from_intervals(cols[best_col]), ProjPoint::from_intervals(adj[best_row])};
  } catch (const std::invalid_argument&) {
    return std::nullopt;
  }
}

SpectralData analyze_spectrum(const RationalMatrix& m) {
  const std::size_t d = m.dim();
  if (d < 2) throw DimensionError("spectral analysis needs dimension >= 2");
  if (m.determinant() == 0) throw std::invalid_argument("spectral analysis of a singular matrix");
  SpectralData out;
  const Polynomial p = characteristic_polynomial(m);
  const RootIsolation iso = isolate_roots(p);
  out.diagnostic = iso.diagnostic;

  std::vector<Entry> entries;
  for (const auto& r : iso.roots) {
    for (int k = 0; k < r.multiplicity; ++k) entries.push_back({&r, r.modulus});
  }
  std::stable_sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    return a.modulus.mid_double() > b.modulus.mid_double();
  });
  for (const auto& e : entries) out.moduli.push_back(e.modulus);
  out.top_gap = out.moduli.front() / max_of(out.moduli, 0);
  out.bottom_gap = min_of(out.moduli, d - 1) / out.moduli.back();

  const bool single_value = square_free_part(p).degree() == 1;
  if (single_value) {
    out.very_proximal = Verdict::kFalse;
    out.diagnostic += "all eigenvalues coincide";
  } else if (!iso.isolated) {
    out.very_proximal = Verdict::kUndecided;
  } else if (extreme_is_tied(p, iso.roots, true) || extreme_is_tied(p, iso.roots, false)) {
    out.very_proximal = Verdict::kFalse;
    out.diagnostic += "extreme eigenvalue modulus is shared";
  } else if (certainly_greater(out.top_gap, Interval(1)) &&
             certainly_greater(out.bottom_gap, Interval(1)) && entries.front().root->multiplicity == 1 &&
             entries.back().root->multiplicity == 1) {
    auto top = simple_eigenvectors(m, *entries.front().root);
    auto bottom = simple_eigenvectors(m, *entries.back().root);
    if (top && bottom) {
      out.very_proximal = Verdict::kTrue;
      out.contraction = max(out.top_gap, out.bottom_gap);
      out.loci = Loci{top->right, bottom->right, Hyperplane{top->left}, Hyperplane{bottom->left}};
    } else {
      out.very_proximal = Verdict::kUndecided;
      out.diagnostic += "eigenvector enclosure degenerate";
    }
  } else {
    out.very_proximal = Verdict::kUndecided;
    out.diagnostic += "eigenvalue gap not resolved";
  }

  if (!m.is_scalar() && iso.isolated && is_diagonalizable(m)) {
    const ScalarDeviation dev = scalar_deviation(m);
    out.theta = dev.theta;
    out.omega = dev.omega;
  }
  return out;
}

bool is_diagonalizable(const RationalMatrix& m) {
  const Polynomial p = characteristic_polynomial(m);
  const Polynomial radical = square_free_part(p);
  if (radical.degree() == p.degree()) return true;
  const RationalMatrix r = evaluate_at(radical, m);
  for (const auto& q : r.entries()) {
    if (q != 0) return false;
  }
  return true;
}

ScalarDeviation scalar_deviation(const RationalMatrix& m) {
  if (m.is_scalar()) throw SpectralError("scalar matrix: theta = 0 and omega is undefined");
  if (!is_diagonalizable(m)) throw SpectralError("matrix is not diagonalizable");
  const RootIsolation iso = isolate_roots(characteristic_polynomial(m));
  if (!iso.isolated) throw SpectralError("eigenvalues could not be isolated: " + iso.diagnostic);
  std::optional<Interval> theta;
  for (std::size_t i = 0; i < iso.roots.size(); ++i) {
    for (std::size_t j = i + 1; j < iso.roots.size(); ++j) {
      Interval diff = abs(iso.roots[i].value - iso.roots[j].value);
      theta = theta ? max(*theta, diff) : diff;
    }
  }
  ScalarDeviation out;
  out.theta = *theta;
  out.omega = sqrt((op_norm(m) + out.theta) / sqr(out.theta));
  return out;
}

Loci att_rep_loci(const RationalMatrix& m) {
  SpectralData s = analyze_spectrum(m);
  if (s.very_proximal != Verdict::kTrue) {
    throw SpectralError(std::string("not very proximal (verdict ") + to_string(s.very_proximal) + ")");
  }
  return *s.loci;
}

std::string SpectralData::to_json() const {
  nlohmann::json j;
  j["moduli"] = nlohmann::json::array();
  for (const auto& x : moduli) j["moduli"].push_back(interval_json(x));
  j["top_gap"] = interval_json(top_gap);
  j["bottom_gap"] = interval_json(bottom_gap);
  j["very_proximal"] = rfree::to_string(very_proximal);
  j["diagnostic"] = diagnostic;
  if (contraction) j["contraction"] = interval_json(*contraction);
  if (loci) {
    j["att"] = point_json(loci->att);
    j["att_inverse"] = point_json(loci->att_inverse);
    j["rep_normal"] = point_json(loci->rep.normal);
    j["rep_inverse_normal"] = point_json(loci->rep_inverse.normal);
  }
  if (theta) j["theta"] = interval_json(*theta);
  if (omega) j["omega"] = interval_json(*omega);
  return j.dump(2);
}

}  // namespace rfree
