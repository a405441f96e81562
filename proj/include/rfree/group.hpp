#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "rfree/interval.hpp"
#include "rfree/parallel.hpp"
#include "rfree/rational_matrix.hpp"

namespace rfree {

struct Generator {
  std::string label;
  RationalMatrix matrix;
};

/// Finitely generated subgroup of SL_d(Q) given by labeled generators.
///
/// File format:
///   { "dim": 2, "field": "Q",
///     "generators": [ {"label": "a", "matrix": [["1","2"],["0","1"]]}, ... ] }
class GroupSpec {
 public:
  GroupSpec() = default;
  GroupSpec(std::size_t dim, std::vector<Generator> generators);

  static GroupSpec parse(const std::string& json_text);
  static GroupSpec load(const std::string& path);

  std::size_t dim() const { return dim_; }
  const std::vector<Generator>& generators() const { return generators_; }
  /// Generators followed by their formal inverses: a, b, ..., a^-1, b^-1, ...
  const std::vector<Generator>& alphabet() const { return alphabet_; }

  /// 16 hex digits identifying the canonical content of the spec.
  const std::string& digest() const { return digest_; }
  std::string to_json() const;

  /// Element named by a dotted alphabet word ("a.b^-1", "e") or an inline
  /// matrix literal ("[[1,2],[0,1]]").
  RationalMatrix element(const std::string& text) const;

 private:
  std::size_t dim_ = 0;
  std::vector<Generator> generators_;
  std::vector<Generator> alphabet_;
  std::string digest_;
};

/// Parses "[[1,2/3],[0,1]]" into a square rational matrix.
RationalMatrix parse_matrix_literal(const std::string& text);

/// Hash set of exact matrices; equality is re-checked on every hash hit.
class MatrixSet {
 public:
  /// Index of m if present, otherwise -1.
  long find(const RationalMatrix& m, std::uint64_t hash) const;
  long find(const RationalMatrix& m) const { return find(m, m.hash()); }
  /// Inserts m unless an equal matrix is present. Returns the index of the
  /// stored matrix and whether it was newly added.
  std::pair<long, bool> insert(const RationalMatrix& m, std::uint64_t hash);
  std::pair<long, bool> insert(const RationalMatrix& m) { return insert(m, m.hash()); }
  std::size_t size() const { return items_.size(); }
  const RationalMatrix& operator[](std::size_t i) const { return items_[i]; }
  /// Number of hash hits that turned out to be different matrices.
  std::size_t false_hits() const { return false_hits_; }

 private:
  std::unordered_multimap<std::uint64_t, long> buckets_;
  std::vector<RationalMatrix> items_;
  mutable std::size_t false_hits_ = 0;
};

struct BallElement {
  RationalMatrix matrix;
  /// Shortest word found by the breadth-first search, e.g. "a.b^-1"; "e" for the identity.
  std::string label;
  int length = 0;
  bool central = false;
};

/// B(r) in the word metric, in breadth-first discovery order.
class Ball {
 public:
  Ball() = default;
  /// Wraps an explicit element list; duplicates are rejected.
  static Ball from_elements(int radius, std::vector<BallElement> elements);

  int radius() const { return radius_; }
  const std::vector<BallElement>& elements() const { return elements_; }
  std::size_t size() const { return elements_.size(); }
  /// B°(r): the elements that are not central.
  std::vector<RationalMatrix> noncentral() const;
  std::size_t noncentral_size() const;
  bool contains(const RationalMatrix& m) const;
  /// Elements of length exactly k, for k = 0..r.
  std::vector<std::size_t> growth() const;

  /// One JSON record per line: label, length, matrix, central, |g| enclosure.
  void write_jsonl(std::ostream& os) const;

 private:
  int radius_ = 0;
  std::vector<BallElement> elements_;
  MatrixSet set_;
};

struct BallOptions {
  std::size_t max_elements = 1u << 20;
};

/// Breadth-first closure of words of length <= r over the alphabet. Products
/// of each level are formed in parallel and merged serially in (frontier,
/// letter) order, so the result does not depend on the schedule.
Ball ball_enumerate(const GroupSpec& spec, int radius, const BallOptions& options = {});

namespace serial {
Ball ball_enumerate(const GroupSpec& spec, int radius, const BallOptions& options = {});
}

}  // namespace rfree
