#pragma once

#include <optional>
#include <set>
#include <utility>

#include "perioda/coset_code.hpp"
#include "perioda/quasi_periodic.hpp"

namespace perioda {

/// {P^n x mod L : n >= 1, x in starts}. For rational starts the orbits are
/// eventually periodic, so the walk stops at the first revisited coset.
inline std::set<Point> forward_orbits(const Lattice& lat, const std::set<Point>& starts, const Integer& factor) {
  // Walk in basis coordinates, where reduction mod L is the fractional part.
  using Coords = std::vector<Rational>;
  std::set<Coords> seen;
  auto step = [&](Coords c) {
    for (auto& v : c) {
      v *= factor;
      mpz_fdiv_r(v.get_num_mpz_t(), v.get_num_mpz_t(), v.get_den_mpz_t());
      if (v.get_num() == 0) v = 0;
    }
    return c;
  };
  for (const auto& s : starts) {
    if (!s.is_rational()) continue;
    Coords x = step(lat.coordinates(s.rat_part()));
    while (seen.insert(x).second) x = step(x);
  }
  std::set<Point> out;
  for (const auto& c : seen) out.insert(Point::rational(lat.basis().apply(c)));
  return out;
}

/// The unique (n, m), both >= 1, with P^n / Q^m = ratio, if any.
inline std::optional<std::pair<long, long>> solve_exponents(const Integer& p, const Integer& q, const Rational& ratio) {
  if (ratio <= 0) return std::nullopt;
  long bits = static_cast<long>(mpz_sizeinbase(ratio.get_num_mpz_t(), 2) + mpz_sizeinbase(ratio.get_den_mpz_t(), 2));
  long qbits = static_cast<long>(mpz_sizeinbase(q.get_mpz_t(), 2));
  long pbits = static_cast<long>(mpz_sizeinbase(p.get_mpz_t(), 2));
  long limit = (bits + 1) * (std::max(qbits, pbits) + 1) + 1;
  Integer pn = 1;
  for (long n = 1; n <= limit; ++n) {
    pn *= p;
    Rational rest = Rational(pn) / ratio;  // must equal Q^m
    if (rest.get_den() != 1) continue;
    Integer v = rest.get_num();
    long m = 0;
    while (v > 1 && mpz_divisible_p(v.get_mpz_t(), q.get_mpz_t())) {
      v /= q;
      ++m;
    }
    if (v == 1 && m >= 1) return std::make_pair(n, m);
  }
  return std::nullopt;
}

namespace detail {

/// The rational part of support_cosets in word arithmetic; false when the
/// common denominator or the factors do not fit.
inline bool rational_orbit_intersection(const QuasiPeriodicFn& gp, const QuasiPeriodicFn& gq, const Integer& p,
                                        const Integer& q, std::set<Point>& out) {
  const Lattice& lat = gp.lattice();
  if (mpz_sizeinbase(p.get_mpz_t(), 2) > 62 || mpz_sizeinbase(q.get_mpz_t(), 2) > 62) return false;
  std::vector<CosetCode::Scaled> a, b;
  std::uint64_t n = 1;
  auto collect = [&](const QuasiPeriodicFn& src, std::vector<CosetCode::Scaled>& dst) {
    dst.reserve(src.size());
    for (const auto& [s, v] : src.entries()) {
      if (!s.is_rational()) continue;
      auto sc = CosetCode::scale(lat, s);
      if (!sc || !include_denominator(n, static_cast<std::uint64_t>(CosetCode::denominator(*sc)))) return false;
      dst.push_back(std::move(*sc));
    }
    return true;
  };
  if (!collect(gp, a) || !collect(gq, b)) return false;
  auto code = CosetCode::make(lat, n);
  if (!code) return false;
  // Forward orbits stop at the first revisited coset.
  using KeySet = std::unordered_set<CosetCode::Key, CosetCode::Hash>;
  auto orbits = [&](const std::vector<CosetCode::Scaled>& starts, std::uint64_t factor) {
    KeySet seen;
    std::vector<std::uint64_t> x;
    for (const auto& s : starts) {
      code->digits(s, x);
      code->times(x, factor);
      while (seen.insert(code->pack(x)).second) code->times(x, factor);
    }
    return seen;
  };
  auto oa = orbits(a, p.get_ui());
  auto ob = orbits(b, q.get_ui());
  for (auto x : oa)
    if (ob.count(x)) out.insert(code->point(x));
  return true;
}

}  // namespace detail

/// Cosets mod L that can carry the support of any f with f_P = gP, f_Q = gQ:
/// the intersection of the forward orbits P^n supp(gP) and Q^m supp(gQ).
/// Off-M representatives match for at most one (n, m).
inline std::set<Point> support_cosets(const QuasiPeriodicFn& gp, const QuasiPeriodicFn& gq, const Integer& p,
                                      const Integer& q) {
  if (!multiplicatively_independent(p, q)) throw InputError("P and Q must be multiplicatively independent");
  if (!(gp.lattice() == gq.lattice())) throw InputError("gP and gQ must share a lattice");
  const Lattice& lat = gp.lattice();
  std::set<Point> out;
  if (!detail::rational_orbit_intersection(gp, gq, p, q, out)) {
    std::set<Point> sp, sq;
    for (const auto& [k, v] : gp.entries()) sp.insert(k);
    for (const auto& [k, v] : gq.entries()) sq.insert(k);
    auto a = forward_orbits(lat, sp, p);
    auto b = forward_orbits(lat, sq, q);
    for (const auto& x : a)
      if (b.count(x)) out.insert(x);
  }

  for (const auto& [s, sv] : gp.entries()) {
    if (s.is_rational()) continue;
    for (const auto& [t, tv] : gq.entries()) {
      if (t.is_rational()) continue;
      // Need P^n irr(s) = Q^m irr(t) coordinatewise.
      std::optional<Rational> ratio;
      bool ok = true;
      for (std::size_t j = 0; j < s.rank() && ok; ++j) {
        if ((s[j].irr == 0) != (t[j].irr == 0)) ok = false;
        if (!ok || s[j].irr == 0) continue;
        Rational rj = t[j].irr / s[j].irr;
        if (ratio && *ratio != rj) ok = false;
        ratio = rj;
      }
      if (!ok || !ratio) continue;
      auto nm = solve_exponents(p, q, *ratio);
      if (!nm) continue;
      Point ps = lat.reduce(Rational(pow(p, nm->first)) * s);
      Point qt = lat.reduce(Rational(pow(q, nm->second)) * t);
      if (ps == qt) out.insert(ps);
    }
  }
  return out;
}

}  // namespace perioda
