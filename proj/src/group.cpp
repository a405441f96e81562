#include "rfree/group.hpp"

#include <omp.h>

#include <cctype>
#include <fstream>
#include <ostream>
#include <sstream>

#include "json.hpp"

#include "rfree/norms.hpp"
#include "rfree/rational.hpp"

namespace rfree {

using nlohmann::json;

namespace {

std::string hex64(std::uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i) {
    s[static_cast<std::size_t>(i)] = digits[v & 15U];
    v >>= 4;
  }
  return s;
}

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return mix64(h);
}

std::string inverse_label(const std::string& label) { return label + "^-1"; }

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw InputError(where + ": " + what);
}

}  // namespace

GroupSpec::GroupSpec(std::size_t dim, std::vector<Generator> generators)
    : dim_(dim), generators_(std::move(generators)) {
  if (dim_ < 2) throw InputError("dim: must be at least 2");
  if (generators_.empty()) throw InputError("generators: at least one generator is required");
  std::string canonical = "dim=" + std::to_string(dim_) + ";";
  for (std::size_t i = 0; i < generators_.size(); ++i) {
    const auto& g = generators_[i];
    const std::string where = "generators[" + std::to_string(i) + "]";
    if (g.label.empty() || g.label == "e") fail(where + ".label", "label must be non-empty and not \"e\"");
    for (char c : g.label) {
      if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) {
        fail(where + ".label", "label may only contain letters, digits and '_'");
      }
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (generators_[j].label == g.label) fail(where + ".label", "duplicate label \"" + g.label + "\"");
    }
    if (g.matrix.dim() != dim_) {
      fail(where + ".matrix", "dimension " + std::to_string(g.matrix.dim()) + " does not match dim " +
                                  std::to_string(dim_));
    }
    if (!g.matrix.has_unit_determinant()) {
      fail(where + ".matrix", "determinant is " + format_rational(g.matrix.determinant()) + ", expected 1");
    }
    canonical += g.label + "=" + g.matrix.to_string() + ";";
  }
  digest_ = hex64(fnv1a(canonical));
  alphabet_ = generators_;
  for (const auto& g : generators_) alphabet_.push_back({inverse_label(g.label), g.matrix.inverse()});
}

GroupSpec GroupSpec::parse(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("spec: ") + e.what());
  }
  if (!doc.is_object()) fail("spec", "top level must be an object");
  if (!doc.contains("dim") || !doc["dim"].is_number_integer()) fail("dim", "missing or not an integer");
  const long dim = doc["dim"].get<long>();
  if (dim < 2) fail("dim", "must be at least 2");
  if (doc.contains("field") && doc["field"] != "Q") fail("field", "only \"Q\" is supported");
  if (!doc.contains("generators") || !doc["generators"].is_array()) {
    fail("generators", "missing or not an array");
  }
  std::vector<Generator> gens;
  const auto& arr = doc["generators"];
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::string where = "generators[" + std::to_string(i) + "]";
    const auto& g = arr[i];
    if (!g.is_object()) fail(where, "must be an object");
    if (!g.contains("label") || !g["label"].is_string()) fail(where + ".label", "missing or not a string");
    if (!g.contains("matrix") || !g["matrix"].is_array()) fail(where + ".matrix", "missing or not an array");
    const auto& rows = g["matrix"];
    if (rows.size() != static_cast<std::size_t>(dim)) {
      fail(where + ".matrix", "has " + std::to_string(rows.size()) + " rows, expected " + std::to_string(dim));
    }
    std::vector<mpq_class> entries;
    for (std::size_t r = 0; r < rows.size(); ++r) {
      const std::string rw = where + ".matrix[" + std::to_string(r) + "]";
      if (!rows[r].is_array() || rows[r].size() != static_cast<std::size_t>(dim)) {
        fail(rw, "must be an array of " + std::to_string(dim) + " entries");
      }
      for (std::size_t c = 0; c < rows[r].size(); ++c) {
        const std::string ew = rw + "[" + std::to_string(c) + "]";
        const auto& e = rows[r][c];
        std::string text;
        if (e.is_string()) {
          text = e.get<std::string>();
        } else if (e.is_number_integer()) {
          text = std::to_string(e.get<long long>());
        } else {
          fail(ew, "entry must be a \"p/q\" string or an integer");
        }
        try {
          entries.push_back(parse_rational(text));
        } catch (const std::invalid_argument& ex) {
          fail(ew, ex.what());
        }
      }
    }
    gens.push_back({g["label"].get<std::string>(),
                    RationalMatrix(static_cast<std::size_t>(dim), std::move(entries))});
  }
  return GroupSpec(static_cast<std::size_t>(dim), std::move(gens));
}

GroupSpec GroupSpec::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError(path + ": cannot open spec file");
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse(ss.str());
  } catch (const InputError& e) {
    throw InputError(path + ": " + e.what());
  }
}

std::string GroupSpec::to_json() const {
  json doc;
  doc["dim"] = dim_;
  doc["field"] = "Q";
  doc["generators"] = json::array();
  for (const auto& g : generators_) {
    doc["generators"].push_back({{"label", g.label}, {"matrix", g.matrix.to_strings()}});
  }
  return doc.dump(2);
}

RationalMatrix GroupSpec::element(const std::string& text) const {
  if (!text.empty() && text.front() == '[') {
    RationalMatrix m = parse_matrix_literal(text);
    if (m.dim() != dim_) throw InputError("element " + text + ": dimension does not match the spec");
    if (!m.has_unit_determinant()) throw InputError("element " + text + ": determinant is not 1");
    return m;
  }
  RationalMatrix m = RationalMatrix::identity(dim_);
  if (text == "e") return m;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t dot = text.find('.', start);
    if (dot == std::string::npos) dot = text.size();
    const std::string letter = text.substr(start, dot - start);
    bool found = false;
    for (const auto& g : alphabet_) {
      if (g.label == letter) {
        m = m * g.matrix;
        found = true;
        break;
      }
    }
    if (!found) throw InputError("element " + text + ": unknown generator \"" + letter + "\"");
    start = dot + 1;
  }
  return m;
}

RationalMatrix parse_matrix_literal(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::size_t i = 0;
  auto skip = [&]() {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  };
  auto expect = [&](char c) {
    skip();
    if (i >= text.size() || text[i] != c) {
      throw InputError("matrix literal at offset " + std::to_string(i) + ": expected '" +
                       std::string(1, c) + "'");
    }
    ++i;
  };
  expect('[');
  while (true) {
    expect('[');
    rows.emplace_back();
    while (true) {
      skip();
      std::size_t j = i;
      while (j < text.size() && text[j] != ',' && text[j] != ']' &&
             !std::isspace(static_cast<unsigned char>(text[j]))) {
        ++j;
      }
      rows.back().push_back(text.substr(i, j - i));
      i = j;
      skip();
      if (i < text.size() && text[i] == ',') {
        ++i;
        continue;
      }
      expect(']');
      break;
    }
    skip();
    if (i < text.size() && text[i] == ',') {
      ++i;
      continue;
    }
    expect(']');
    break;
  }
  skip();
  if (i != text.size()) throw InputError("matrix literal: trailing characters at offset " + std::to_string(i));
  try {
    return RationalMatrix::from_strings(rows);
  } catch (const std::invalid_argument& e) {
    throw InputError(std::string("matrix literal: ") + e.what());
  }
}

long MatrixSet::find(const RationalMatrix& m, std::uint64_t hash) const {
  auto [lo, hi] = buckets_.equal_range(hash);
  for (auto it = lo; it != hi; ++it) {
    if (items_[static_cast<std::size_t>(it->second)] == m) return it->second;
    ++false_hits_;
  }
  return -1;
}

std::pair<long, bool> MatrixSet::insert(const RationalMatrix& m, std::uint64_t hash) {
  const long found = find(m, hash);
  if (found >= 0) return {found, false};
  const long id = static_cast<long>(items_.size());
  items_.push_back(m);
  buckets_.emplace(hash, id);
  return {id, true};
}

Ball Ball::from_elements(int radius, std::vector<BallElement> elements) {
  Ball ball;
  ball.radius_ = radius;
  for (auto& e : elements) {
    if (!ball.set_.insert(e.matrix).second) throw std::invalid_argument("duplicate ball element " + e.label);
    e.central = e.matrix.is_central();
  }
  ball.elements_ = std::move(elements);
  return ball;
}

std::vector<RationalMatrix> Ball::noncentral() const {
  std::vector<RationalMatrix> out;
  for (const auto& e : elements_) {
    if (!e.central) out.push_back(e.matrix);
  }
  return out;
}

std::size_t Ball::noncentral_size() const {
  std::size_t n = 0;
  for (const auto& e : elements_) n += e.central ? 0 : 1;
  return n;
}

bool Ball::contains(const RationalMatrix& m) const { return set_.find(m) >= 0; }

std::vector<std::size_t> Ball::growth() const {
  std::vector<std::size_t> g(static_cast<std::size_t>(radius_) + 1, 0);
  for (const auto& e : elements_) ++g[static_cast<std::size_t>(e.length)];
  return g;
}

void Ball::write_jsonl(std::ostream& os) const {
  for (const auto& e : elements_) {
    const Interval len = length_g(e.matrix);
    json rec;
    rec["label"] = e.label;
    rec["length"] = e.length;
    rec["matrix"] = e.matrix.to_strings();
    rec["central"] = e.central;
    rec["g_length"] = {len.lo_string(), len.hi_string()};
    os << rec.dump() << '\n';
  }
}

namespace {

struct Candidate {
  RationalMatrix matrix;
  std::uint64_t hash = 0;
};

std::string child_label(const std::string& parent, const std::string& letter) {
  return parent == "e" ? letter : parent + "." + letter;
}

Ball enumerate(const GroupSpec& spec, int radius, const BallOptions& options, bool parallel) {
  if (radius < 0) throw std::invalid_argument("radius must be non-negative");
  std::vector<BallElement> elements;
  MatrixSet seen;
  const RationalMatrix id = RationalMatrix::identity(spec.dim());
  seen.insert(id);
  elements.push_back({id, "e", 0, true});
  std::size_t frontier_begin = 0;
  const auto& alphabet = spec.alphabet();
  const std::size_t letters = alphabet.size();
  for (int len = 1; len <= radius; ++len) {
    const std::size_t frontier_end = elements.size();
    const std::size_t count = (frontier_end - frontier_begin) * letters;
    std::vector<Candidate> products(count);
    auto form = [&](std::size_t k) {
      const auto& parent = elements[frontier_begin + k / letters].matrix;
      products[k].matrix = parent * alphabet[k % letters].matrix;
      products[k].hash = products[k].matrix.hash();
    };
    if (parallel) {
      const long n = static_cast<long>(count);
#pragma omp parallel for schedule(dynamic, 16) num_threads(worker_count())
      for (long k = 0; k < n; ++k) form(static_cast<std::size_t>(k));
    } else {
      for (std::size_t k = 0; k < count; ++k) form(k);
    }
    for (std::size_t k = 0; k < count; ++k) {
      if (!seen.insert(products[k].matrix, products[k].hash).second) continue;
      if (elements.size() >= options.max_elements) {
        throw BudgetExceeded("ball of radius " + std::to_string(radius) + " exceeds " +
                             std::to_string(options.max_elements) + " elements");
      }
      const auto& parent = elements[frontier_begin + k / letters];
      BallElement e;
      e.label = child_label(parent.label, alphabet[k % letters].label);
      e.length = len;
      e.central = products[k].matrix.is_central();
      e.matrix = std::move(products[k].matrix);
      elements.push_back(std::move(e));
    }
    frontier_begin = frontier_end;
    if (frontier_begin == elements.size()) break;
  }
  Ball ball = Ball::from_elements(radius, std::move(elements));
  return ball;
}

}  // namespace

Ball ball_enumerate(const GroupSpec& spec, int radius, const BallOptions& options) {
  return enumerate(spec, radius, options, true);
}

namespace serial {
Ball ball_enumerate(const GroupSpec& spec, int radius, const BallOptions& options) {
  return enumerate(spec, radius, options, false);
}
}  // namespace serial

}  // namespace rfree
