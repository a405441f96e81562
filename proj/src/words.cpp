#include "rfree/words.hpp"

#include <stdexcept>

#include "rfree/group.hpp"
#include "rfree/parallel.hpp"

namespace rfree {

bool is_power(const Syllable& s) { return std::holds_alternative<Power>(s); }

bool same_syllable(const Syllable& a, const Syllable& b) {
  if (a.index() != b.index()) return false;
  if (is_power(a)) return std::get<Power>(a).k == std::get<Power>(b).k;
  return std::get<Coefficient>(a).element == std::get<Coefficient>(b).element;
}

bool operator==(const Word& a, const Word& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!same_syllable(a.syllables_[i], b.syllables_[i])) return false;
  }
  return true;
}

Word normalize(std::vector<Syllable> raw, std::size_t dim) {
  Word w;
  auto& out = w.syllables_;
  for (auto& s : raw) {
    if (auto* p = std::get_if<Power>(&s)) {
      if (p->k == 0) continue;
      if (!out.empty() && is_power(out.back())) {
        std::get<Power>(out.back()).k += p->k;
        if (std::get<Power>(out.back()).k == 0) out.pop_back();
      } else {
        out.push_back(*p);
      }
      continue;
    }
    auto& c = std::get<Coefficient>(s);
    if (c.element.dim() != dim) {
      throw DimensionError("coefficient of dimension " + std::to_string(c.element.dim()) +
                           " in a word over dimension " + std::to_string(dim));
    }
    if (c.element.is_identity()) continue;
    if (!out.empty() && !is_power(out.back())) {
      auto& top = std::get<Coefficient>(out.back());
      top.element = top.element * c.element;
      if (top.label && c.label) {
        top.label = *top.label + "." + *c.label;
      } else {
        top.label.reset();
      }
      if (top.element.is_identity()) out.pop_back();
    } else {
      out.push_back(std::move(c));
    }
  }
  return w;
}

Word normalize(std::vector<Syllable> raw, const GroupSpec& spec) { return normalize(std::move(raw), spec.dim()); }

Word concat(const Word& w1, const Word& w2, std::size_t dim) {
  std::vector<Syllable> raw = w1.syllables();
  raw.insert(raw.end(), w2.syllables().begin(), w2.syllables().end());
  return normalize(std::move(raw), dim);
}

RationalMatrix evaluate(const Word& w, const RationalMatrix& gamma) {
  RationalMatrix out = RationalMatrix::identity(gamma.dim());
  for (const auto& s : w.syllables()) {
    if (const auto* p = std::get_if<Power>(&s)) {
      out = out * gamma.power(p->k);
    } else {
      out = out * std::get<Coefficient>(s).element;
    }
  }
  return out;
}

Word boundary_conjugate(const Word& w) {
  if (w.trivial()) throw std::invalid_argument("boundary conjugate of the trivial word");
  if (w.starts_with_power() && w.ends_with_power()) return w;
  long left = 0;
  if (w.starts_with_power()) {
    left = std::get<Power>(w.syllables().front()).k > 0 ? 1 : -1;
  } else if (w.ends_with_power()) {
    left = std::get<Power>(w.syllables().back()).k > 0 ? -1 : 1;
  } else {
    left = -1;
  }
  std::vector<Syllable> raw;
  raw.push_back(Power{left});
  raw.insert(raw.end(), w.syllables().begin(), w.syllables().end());
  raw.push_back(Power{-left});
  const std::size_t dim = std::get<Coefficient>(w.syllables()[w.starts_with_power() ? 1 : 0]).element.dim();
  return normalize(std::move(raw), dim);
}

std::string to_text(const Word& w) {
  if (w.trivial()) return "e";
  std::string out;
  for (const auto& s : w.syllables()) {
    if (!out.empty()) out += "*";
    if (const auto* p = std::get_if<Power>(&s)) {
      out += "x^" + std::to_string(p->k);
    } else {
      const auto& c = std::get<Coefficient>(s);
      out += c.label ? "{" + *c.label + "}" : c.element.to_string();
    }
  }
  return out;
}

Word parse_word(const std::string& text, const GroupSpec& spec) {
  if (text == "e") return Word{};
  std::vector<Syllable> raw;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t star = text.find('*', start);
    if (star == std::string::npos) star = text.size();
    const std::string tok = text.substr(start, star - start);
    if (tok.empty()) throw InputError("word: empty syllable at offset " + std::to_string(start));
    if (tok == "x") {
      raw.push_back(Power{1});
    } else if (tok.rfind("x^", 0) == 0) {
      try {
        std::size_t used = 0;
        const long k = std::stol(tok.substr(2), &used);
        if (used != tok.size() - 2) throw std::invalid_argument(tok);
        raw.push_back(Power{k});
      } catch (const std::exception&) {
        throw InputError("word: malformed power \"" + tok + "\"");
      }
    } else if (tok.front() == '{' && tok.back() == '}') {
      const std::string label = tok.substr(1, tok.size() - 2);
      raw.push_back(Coefficient{spec.element(label), label});
    } else if (tok.front() == '[') {
      RationalMatrix m = parse_matrix_literal(tok);
      if (m.dim() != spec.dim()) throw InputError("word: coefficient " + tok + " has the wrong dimension");
      raw.push_back(Coefficient{std::move(m), std::nullopt});
    } else {
      throw InputError("word: unrecognized syllable \"" + tok + "\"");
    }
    start = star + 1;
  }
  return normalize(std::move(raw), spec.dim());
}

// ---------------------------------------------------------------------------

WordEnumerator::WordEnumerator(std::vector<Coefficient> coeffs, int max_syllables, int max_power)
    : coeffs_(std::move(coeffs)), max_syllables_(max_syllables), max_power_(max_power) {
  if (coeffs_.empty()) throw std::invalid_argument("word enumeration needs at least one coefficient");
  if (max_syllables_ < 1 || max_power_ < 1) throw std::invalid_argument("word budgets must be positive");
  MatrixSet seen;
  for (const auto& c : coeffs_) {
    if (c.element.is_identity()) throw std::invalid_argument("coefficient set contains the identity");
    if (!seen.insert(c.element).second) throw std::invalid_argument("coefficient set has repeated elements");
  }
}

long WordEnumerator::exponent(std::size_t index) const {
  const std::size_t j = index - coeffs_.size();
  const long magnitude = static_cast<long>(j / 2) + 1;
  return j % 2 == 0 ? magnitude : -magnitude;
}

Syllable WordEnumerator::syllable(std::size_t index) const {
  if (is_power_index(index)) return Power{exponent(index)};
  return coeffs_[index];
}

Word WordEnumerator::word(const std::vector<std::size_t>& indices) const {
  std::vector<Syllable> raw;
  raw.reserve(indices.size());
  for (std::size_t i : indices) raw.push_back(syllable(i));
  return normalize(std::move(raw), coeffs_.front().element.dim());
}

namespace {

mpz_class pow_ui(std::size_t base, long exp) {
  mpz_class r;
  mpz_ui_pow_ui(r.get_mpz_t(), base, static_cast<unsigned long>(exp));
  return r;
}

/// Alternating sequences of length r whose first letter has the given type.
mpz_class completions(std::size_t m, std::size_t p, bool first_is_power, long r) {
  if (r <= 0) return 1;
  const long first = (r + 1) / 2, second = r / 2;
  return first_is_power ? pow_ui(p, first) * pow_ui(m, second) : pow_ui(m, first) * pow_ui(p, second);
}

}  // namespace

mpz_class WordEnumerator::count_with(int syllables) const {
  if (syllables <= 0) return 0;
  const std::size_t m = coefficient_count(), p = power_count();
  return completions(m, p, false, syllables) + completions(m, p, true, syllables);
}

mpz_class WordEnumerator::count() const {
  mpz_class total = 0;
  for (int s = 1; s <= max_syllables_; ++s) total += count_with(s);
  return total;
}

mpz_class WordEnumerator::rank(const std::vector<std::size_t>& indices) const {
  const long s = static_cast<long>(indices.size());
  const std::size_t m = coefficient_count(), p = power_count();
  mpz_class r = 0;
  for (long t = 1; t < s; ++t) r += count_with(static_cast<int>(t));
  for (long i = 0; i < s; ++i) {
    const std::size_t idx = indices[static_cast<std::size_t>(i)];
    const long rest = s - i - 1;
    // Completions after position i start with the type opposite to position i.
    if (i == 0) {
      if (idx < m) {
        r += mpz_class(static_cast<unsigned long>(idx)) * completions(m, p, true, rest);
      } else {
        r += mpz_class(static_cast<unsigned long>(m)) * completions(m, p, true, rest);
        r += mpz_class(static_cast<unsigned long>(idx - m)) * completions(m, p, false, rest);
      }
    } else if (idx < m) {
      r += mpz_class(static_cast<unsigned long>(idx)) * completions(m, p, true, rest);
    } else {
      r += mpz_class(static_cast<unsigned long>(idx - m)) * completions(m, p, false, rest);
    }
  }
  return r + 1;
}

void WordEnumerator::for_each(const std::function<bool(const std::vector<std::size_t>&)>& visit) const {
  const std::size_t m = coefficient_count(), a = alphabet_size();
  std::vector<std::size_t> idx;
  bool stop = false;
  std::function<void(int)> dfs = [&](int remaining) {
    if (stop) return;
    if (remaining == 0) {
      if (!visit(idx)) stop = true;
      return;
    }
    std::size_t lo = 0, hi = a;
    if (!idx.empty()) {
      if (is_power_index(idx.back())) {
        hi = m;
      } else {
        lo = m;
      }
    }
    for (std::size_t k = lo; k < hi && !stop; ++k) {
      idx.push_back(k);
      dfs(remaining - 1);
      idx.pop_back();
    }
  };
  for (int s = 1; s <= max_syllables_ && !stop; ++s) dfs(s);
}

mpz_class word_count_formula(std::size_t m, int max_syllables, int max_power) {
  const std::size_t p = static_cast<std::size_t>(2 * max_power);
  mpz_class total = 0;
  for (int s = 1; s <= max_syllables; ++s) {
    if (s % 2 == 0) {
      total += 2 * pow_ui(m * p, s / 2);
    } else {
      total += pow_ui(m, (s + 1) / 2) * pow_ui(p, (s - 1) / 2) + pow_ui(p, (s + 1) / 2) * pow_ui(m, (s - 1) / 2);
    }
  }
  return total;
}

}  // namespace rfree
