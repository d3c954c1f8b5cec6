#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "perioda/error.hpp"

namespace perioda {

using Integer = mpz_class;
using Rational = mpq_class;

inline Rational make_rational(const Integer& num, const Integer& den) {
  if (den == 0) throw InputError("zero denominator");
  Rational r(num, den);
  r.canonicalize();
  return r;
}

namespace detail {

/// The value of x if it fits in a signed word.
inline bool small_value(mpz_srcptr x, long& out) {
  int n = x->_mp_size;
  if (n == 0) {
    out = 0;
    return true;
  }
  if (n > 1 || n < -1) return false;
  mp_limb_t l = x->_mp_d[0];
  if (l > static_cast<mp_limb_t>(std::numeric_limits<long>::max())) return false;
  out = n > 0 ? static_cast<long>(l) : -static_cast<long>(l);
  return true;
}

}  // namespace detail

/// Three-way comparison with a word-size shortcut.
inline int compare(const Rational& a, const Rational& b) {
  long an, ad, bn, bd;
  if (detail::small_value(a.get_num_mpz_t(), an) && detail::small_value(a.get_den_mpz_t(), ad) &&
      detail::small_value(b.get_num_mpz_t(), bn) && detail::small_value(b.get_den_mpz_t(), bd)) {
    if (ad == bd) return an < bn ? -1 : (an > bn ? 1 : 0);
    __int128 x = static_cast<__int128>(an) * bd;
    __int128 y = static_cast<__int128>(bn) * ad;
    return x < y ? -1 : (x > y ? 1 : 0);
  }
  int c = mpq_cmp(a.get_mpq_t(), b.get_mpq_t());
  return c < 0 ? -1 : (c > 0 ? 1 : 0);
}

inline Rational make_rational(long num, long den = 1) {
  return make_rational(Integer(num), Integer(den));
}

/// Parses "a/b", "a" (optional sign). Result is canonical.
inline Rational parse_rational(std::string_view text) {
  std::string s(text);
  if (s.empty()) throw InputError("empty rational");
  auto valid_int = [](const std::string& t) {
    std::size_t i = (!t.empty() && (t[0] == '-' || t[0] == '+')) ? 1 : 0;
    if (i == t.size()) return false;
    for (; i < t.size(); ++i)
      if (t[i] < '0' || t[i] > '9') return false;
    return true;
  };
  auto strip_plus = [](std::string t) {
    if (!t.empty() && t[0] == '+') t.erase(0, 1);
    return t;
  };
  auto slash = s.find('/');
  std::string num = s.substr(0, slash);
  std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
  if (!valid_int(num) || !valid_int(den) || den[0] == '-' || den[0] == '+')
    throw InputError("malformed rational '" + s + "'");
  Integer n(strip_plus(num)), d(den);
  return make_rational(n, d);
}

/// Always "num/den" with den > 0 and the fraction reduced.
inline std::string to_string(const Rational& r) {
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

/// Shorter human form: integers print without "/1".
inline std::string to_display(const Rational& r) {
  if (r.get_den() == 1) return r.get_num().get_str();
  return to_string(r);
}

inline Integer floor(const Rational& r) {
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return q;
}

inline Rational frac(const Rational& r) { return r - Rational(floor(r)); }

inline bool is_integer(const Rational& r) { return r.get_den() == 1; }

inline Integer abs(const Integer& v) { return v < 0 ? Integer(-v) : v; }

inline Integer gcd(const Integer& a, const Integer& b) {
  Integer g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

inline Integer lcm(const Integer& a, const Integer& b) {
  Integer g;
  mpz_lcm(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

inline Integer pow(const Integer& base, unsigned long e) {
  Integer r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
  return r;
}

/// p-adic valuation of a nonzero integer.
inline long valuation(const Integer& x, const Integer& p) {
  if (x == 0) throw InputError("valuation of zero");
  Integer t = abs(x);
  long v = 0;
  while (mpz_divisible_p(t.get_mpz_t(), p.get_mpz_t())) {
    t /= p;
    ++v;
  }
  return v;
}

/// p-adic valuation of a nonzero rational.
inline long valuation(const Rational& x, const Integer& p) {
  return valuation(x.get_num(), p) - valuation(x.get_den(), p);
}

/// Distinct prime divisors of |n|, n >= 1, ascending.
inline std::vector<Integer> prime_factors(Integer n) {
  n = abs(n);
  std::vector<Integer> out;
  for (Integer p = 2; p * p <= n; ++p) {
    if (mpz_divisible_p(n.get_mpz_t(), p.get_mpz_t())) {
      out.push_back(p);
      while (mpz_divisible_p(n.get_mpz_t(), p.get_mpz_t())) n /= p;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

inline bool is_prime(const Integer& n) {
  return n >= 2 && mpz_probab_prime_p(n.get_mpz_t(), 40) > 0;
}

/// Extended gcd: returns g = gcd(a, b) and sets a*s + b*t = g.
inline Integer ext_gcd(const Integer& a, const Integer& b, Integer& s, Integer& t) {
  Integer g;
  mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

/// P^a = Q^b only for a = b = 0.
inline bool multiplicatively_independent(const Integer& p, const Integer& q) {
  if (p < 2 || q < 2) return false;
  // Dependent iff both are powers of a common base; equivalently the
  // exponent vectors over their joint primes are proportional.
  auto primes = prime_factors(p * q);
  long ref_a = 0, ref_b = 0;
  bool have_ref = false;
  for (const auto& r : primes) {
    long a = mpz_divisible_p(p.get_mpz_t(), r.get_mpz_t()) ? valuation(p, r) : 0;
    long b = mpz_divisible_p(q.get_mpz_t(), r.get_mpz_t()) ? valuation(q, r) : 0;
    if (a == 0 || b == 0) return true;
    if (!have_ref) {
      ref_a = a;
      ref_b = b;
      have_ref = true;
    } else if (a * ref_b != b * ref_a) {
      return true;
    }
  }
  return false;
}

}  // namespace perioda
