#include "rfree/rational.hpp"

#include <cctype>
#include <stdexcept>

namespace rfree {

mpq_class parse_rational(std::string_view text) {
  std::string s(text);
  auto bad = [&]() { return std::invalid_argument("malformed rational \"" + s + "\""); };
  if (s.empty()) throw bad();
  const auto slash = s.find('/');
  auto valid_int = [](const std::string& part, bool allow_sign) {
    std::size_t i = 0;
    if (allow_sign && !part.empty() && (part[0] == '-' || part[0] == '+')) i = 1;
    if (i >= part.size()) return false;
    for (; i < part.size(); ++i) {
      if (!std::isdigit(static_cast<unsigned char>(part[i]))) return false;
    }
    return true;
  };
  std::string num = s.substr(0, slash);
  std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
  if (!valid_int(num, true) || !valid_int(den, false)) throw bad();
  if (num[0] == '+') num.erase(0, 1);
  mpz_class n(num, 10);
  mpz_class d(den, 10);
  if (d == 0) throw std::invalid_argument("zero denominator in \"" + s + "\"");
  mpq_class q(n, d);
  q.canonicalize();
  return q;
}

std::string format_rational(const mpq_class& value) { return value.get_str(10); }

mpq_class rationalize(const mpq_class& value, const mpz_class& max_denominator) {
  if (max_denominator < 1) throw std::invalid_argument("denominator bound must be positive");
  if (value.get_den() <= max_denominator) return value;
  // Convergents h/k of the continued fraction; keep the last within bound and
  // compare with the best semiconvergent.
  mpz_class h_prev2 = 0, h_prev = 1, k_prev2 = 1, k_prev = 0;
  mpq_class x = value;
  mpz_class a;
  while (true) {
    mpz_fdiv_q(a.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
    mpz_class h = a * h_prev + h_prev2;
    mpz_class k = a * k_prev + k_prev2;
    if (k > max_denominator) {
      // Largest semiconvergent t with t*k_prev + k_prev2 <= bound.
      mpz_class t = (max_denominator - k_prev2) / k_prev;
      mpq_class convergent(h_prev, k_prev);
      convergent.canonicalize();
      if (t > 0) {
        mpq_class semi(t * h_prev + h_prev2, t * k_prev + k_prev2);
        semi.canonicalize();
        if (abs(semi - value) < abs(convergent - value)) return semi;
      }
      return convergent;
    }
    h_prev2 = h_prev;
    h_prev = h;
    k_prev2 = k_prev;
    k_prev = k;
    mpq_class frac = x - mpq_class(a);
    if (frac == 0) {
      mpq_class exact(h, k);
      exact.canonicalize();
      return exact;
    }
    x = 1 / frac;
  }
}

mpq_class rationalize(double value, const mpz_class& max_denominator) {
  return rationalize(mpq_class(value), max_denominator);
}

std::uint64_t hash_rational(const mpq_class& value, std::uint64_t seed) {
  std::uint64_t h = mix64(seed ^ 0x9e3779b97f4a7c15ULL);
  auto absorb = [&h](mpz_srcptr z) {
    h = mix64(h ^ static_cast<std::uint64_t>(mpz_sgn(z) + 2));
    const std::size_t limbs = mpz_size(z);
    for (std::size_t i = 0; i < limbs; ++i) {
      h = mix64(h + static_cast<std::uint64_t>(mpz_getlimbn(z, static_cast<mp_size_t>(i))));
    }
  };
  absorb(value.get_num_mpz_t());
  absorb(value.get_den_mpz_t());
  return h;
}

}  // namespace rfree
