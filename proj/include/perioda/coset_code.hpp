#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "perioda/quasi_periodic.hpp"

namespace perioda {

/// Rational cosets of L whose basis coordinates lie in (1/N)Z. Digits are
/// a_j = N * coordinate_j in [0, N); a coset packs into one 128-bit key
/// sum_j a_j N^j.
class CosetCode {
 public:
  using Key = unsigned __int128;

  struct Hash {
    std::size_t operator()(Key k) const {
      std::uint64_t lo = static_cast<std::uint64_t>(k), hi = static_cast<std::uint64_t>(k >> 64);
      std::uint64_t h = lo * 0x9e3779b97f4a7c15ULL ^ (hi + 0x632be59bd9b4e019ULL) * 0xff51afd7ed558ccdULL;
      return static_cast<std::size_t>(h ^ (h >> 31));
    }
  };

  /// Word-size coordinate numerators of a rational point over their least
  /// common denominator.
  struct Scaled {
    std::vector<long> num;
    long den = 1;
  };

  static std::optional<Scaled> scale(const Lattice& lat, const Point& x) {
    Scaled s;
    if (!x.is_rational() || !lat.small_coordinates(x, s.num, s.den)) return std::nullopt;
    long g = s.den;
    for (long v : s.num) g = std::gcd(g, v);
    if (g > 1) {
      for (auto& v : s.num) v /= g;
      s.den /= g;
    }
    return s;
  }

  /// Smallest denominator of the coordinates.
  static long denominator(const Scaled& s) { return s.den; }

  /// nullopt when N^r does not fit in a key.
  static std::optional<CosetCode> make(const Lattice& lat, std::uint64_t n) {
    if (n < 1 || n > (1ULL << 62)) return std::nullopt;
    Key cap = 1;
    for (std::size_t j = 0; j < lat.rank(); ++j) {
      if (cap > (~Key(0)) / n) return std::nullopt;
      cap *= n;
    }
    CosetCode c;
    c.lat_ = &lat;
    c.n_ = n;
    c.r_ = lat.rank();
    return c;
  }

  std::uint64_t n() const { return n_; }
  std::size_t rank() const { return r_; }

  /// Digits of the coset; the denominator must divide N.
  void digits(const Scaled& s, std::vector<std::uint64_t>& out) const {
    out.resize(r_);
    const __int128 f = n_ / static_cast<std::uint64_t>(s.den);
    const __int128 n = n_;
    for (std::size_t j = 0; j < r_; ++j) {
      __int128 t = static_cast<__int128>(s.num[j]) * f % n;
      if (t < 0) t += n;
      out[j] = static_cast<std::uint64_t>(t);
    }
  }

  Key pack(const std::vector<std::uint64_t>& a) const {
    Key k = 0;
    for (std::size_t j = r_; j-- > 0;) k = k * n_ + a[j];
    return k;
  }

  void unpack(Key k, std::vector<std::uint64_t>& a) const {
    a.resize(r_);
    for (std::size_t j = 0; j < r_; ++j) {
      a[j] = static_cast<std::uint64_t>(k % n_);
      k /= n_;
    }
  }

  /// Reduced representative of the coset.
  Point point(Key k) const {
    std::vector<std::uint64_t> a;
    unpack(k, a);
    std::vector<Integer> num(r_);
    for (std::size_t j = 0; j < r_; ++j) num[j] = Integer(static_cast<unsigned long>(a[j]));
    return Point::rational(lat_->from_numerators(num, Integer(static_cast<unsigned long>(n_))));
  }

  /// Digits of m x, in place.
  void times(std::vector<std::uint64_t>& a, std::uint64_t m) const {
    for (auto& v : a) v = static_cast<std::uint64_t>(static_cast<unsigned __int128>(v) * m % n_);
  }

 private:
  const Lattice* lat_ = nullptr;
  std::uint64_t n_ = 1;
  std::size_t r_ = 0;
};

namespace detail {

/// The function f (m = 1) or x -> f(m x) - f(x) (m >= 2) on one coset.
inline Rational dilated_value(const QuasiPeriodicFn& f, const Integer& m, const Point& x) {
  if (m == 1) return f.coset_value(x);
  return f.coset_value(Rational(m) * x) - f.coset_value(x);
}

/// Raises n to a multiple of d; false past 2^62.
inline bool include_denominator(std::uint64_t& n, std::uint64_t d) {
  if (n % d == 0) return true;
  unsigned __int128 l = static_cast<unsigned __int128>(n / std::gcd(n, d)) * d;
  if (l > (1ULL << 62)) return false;
  n = static_cast<std::uint64_t>(l);
  return true;
}

/// Word coordinates of every entry, raising n to a multiple of each den * m;
/// false if an entry is irrational or too large.
inline bool scale_entries(const QuasiPeriodicFn& f, std::uint64_t m,
                          std::vector<std::pair<CosetCode::Scaled, const Rational*>>& out, std::uint64_t& n) {
  out.reserve(out.size() + f.size());
  for (const auto& [k, v] : f.entries()) {
    auto s = CosetCode::scale(f.lattice(), k);
    if (!s) return false;
    unsigned __int128 d = static_cast<unsigned __int128>(CosetCode::denominator(*s)) * m;
    if (d > (1ULL << 62) || !include_denominator(n, static_cast<std::uint64_t>(d))) return false;
    out.emplace_back(std::move(*s), &v);
  }
  return true;
}

}  // namespace detail

/// Exact coset comparison of A and B, where each side is f itself (m = 1) or
/// the dilation difference x -> f(m x) - f(x). Equivalent to equal_on_cosets
/// on the materialized functions, without building them when all cosets are
/// rational.
inline CosetComparison compare_dilations(const QuasiPeriodicFn& a, const Integer& ma, const QuasiPeriodicFn& b,
                                         const Integer& mb) {
  auto materialize = [](const QuasiPeriodicFn& f, const Integer& m) { return m == 1 ? f : dilate_diff(f, m); };
  auto slow = [&] { return equal_on_cosets(materialize(a, ma), materialize(b, mb)); };
  if (ma < 1 || mb < 1) throw InputError("dilation factor must be positive");
  if (!(a.lattice() == b.lattice())) return slow();
  if (mpz_sizeinbase(ma.get_mpz_t(), 2) > 20 || mpz_sizeinbase(mb.get_mpz_t(), 2) > 20) return slow();
  const Lattice& lat = a.lattice();
  const std::uint64_t ua = ma.get_ui(), ub = mb.get_ui();

  std::vector<std::pair<CosetCode::Scaled, const Rational*>> sa, sb;
  std::uint64_t n = 1;
  if (!detail::scale_entries(a, ua, sa, n) || !detail::scale_entries(b, ub, sb, n)) return slow();
  auto code = CosetCode::make(lat, n);
  if (!code) return slow();
  // Preimages under x -> m x multiply the count by m^r.
  const double r = static_cast<double>(lat.rank());
  double count = static_cast<double>(sa.size()) * (ua == 1 ? 1.0 : std::pow(ua, r) + 1) +
                 static_cast<double>(sb.size()) * (ub == 1 ? 1.0 : std::pow(ub, r) + 1);
  if (count > 5.0e7) return slow();

  std::unordered_map<CosetCode::Key, Rational, CosetCode::Hash> acc;
  acc.reserve(static_cast<std::size_t>(std::min(count, 4.0e6)));
  auto add = [&](CosetCode::Key key, const Rational& v, bool negate) {
    auto [it, inserted] = acc.try_emplace(key);
    if (negate) it->second -= v;
    else it->second += v;
  };
  const std::size_t rr = lat.rank();
  auto accumulate = [&](const auto& src, std::uint64_t m, bool negate) {
    std::vector<std::uint64_t> base, key(rr), k(rr);
    const std::uint64_t step = n / m;
    for (const auto& [s, v] : src) {
      code->digits(s, base);
      if (m == 1) {
        add(code->pack(base), *v, negate);
        continue;
      }
      // Preimage digits (a_j + k_j N) / m; N is a multiple of den * m.
      std::fill(k.begin(), k.end(), 0);
      for (;;) {
        for (std::size_t j = 0; j < rr; ++j) key[j] = base[j] / m + k[j] * step;
        add(code->pack(key), *v, negate);
        std::size_t j = 0;
        while (j < rr && ++k[j] == m) k[j++] = 0;
        if (j == rr) break;
      }
      add(code->pack(base), *v, !negate);
    }
  };
  accumulate(sa, ua, false);
  accumulate(sb, ub, true);

  std::optional<CosetCode::Key> first;
  for (const auto& [key, v] : acc)
    if (v != 0 && (!first || key < *first)) first = key;
  if (first) {
    Point z = code->point(*first);
    return {false, z, detail::dilated_value(a, ma, z), detail::dilated_value(b, mb, z)};
  }
  Rational za = ua == 1 ? a.zero_value() : Rational(0);
  Rational zb = ub == 1 ? b.zero_value() : Rational(0);
  if (za != zb) return {false, Point(lat.rank()), za, zb};
  return {};
}

}  // namespace perioda
