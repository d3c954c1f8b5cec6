#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "perioda/support.hpp"
#include "perioda/telescope.hpp"
#include "perioda/window.hpp"

namespace perioda {

// ---------------------------------------------------------------------------
// P-chains

/// The part {z, Pz, ..., P^n(z) z} of the orbit of an off-M point z that meets
/// the support of gP.
struct ChainReport {
  Point z;
  std::vector<Point> points;    // P^n z for the hit exponents n >= 0, ascending
  std::vector<long> exponents;  // the matching n
  long exponent = 0;            // n(z), the last hit (0 if none)
  bool primitive = true;        // no P^n z with n < 0 in the support
  Rational chain_sum = 0;       // sum of gP over the chain
};

/// Every integer n (any sign) with P^n z in the support of gP. Off M the
/// orbit points are pairwise distinct mod L, so each support coset matches at
/// most one n.
inline std::vector<long> orbit_hits(const QuasiPeriodicFn& gp, const Point& z, const Integer& p) {
  std::vector<long> hits;
  const Lattice& lat = gp.lattice();
  for (const auto& [s, v] : gp.entries()) {
    if (s.is_rational()) continue;
    std::optional<Rational> ratio;
    bool ok = true;
    for (std::size_t j = 0; j < z.rank() && ok; ++j) {
      if ((s[j].irr == 0) != (z[j].irr == 0)) ok = false;
      if (!ok || z[j].irr == 0) continue;
      Rational rj = s[j].irr / z[j].irr;
      if (ratio && *ratio != rj) ok = false;
      ratio = rj;
    }
    if (!ok || !ratio || *ratio <= 0) continue;
    bool inverted = *ratio < 1;
    Rational mag = inverted ? Rational(1) / *ratio : *ratio;
    if (mag.get_den() != 1) continue;
    Integer t = mag.get_num();
    long n = 0;
    while (t > 1 && mpz_divisible_p(t.get_mpz_t(), p.get_mpz_t())) {
      t /= p;
      ++n;
    }
    if (t != 1) continue;
    if (inverted) n = -n;
    Rational scale = n >= 0 ? Rational(pow(p, n)) : Rational(1) / Rational(pow(p, -n));
    if (lat.reduce(scale * z) == s) hits.push_back(n);
  }
  std::sort(hits.begin(), hits.end());
  return hits;
}

inline ChainReport chain_decompose(const QuasiPeriodicFn& gp, const Point& z, const Integer& p) {
  gp.lattice().check_rank(z);
  if (p < 2) throw InputError("P must be >= 2");
  if (z.is_rational()) throw InputError("chain_decompose needs a point outside Q*L");
  ChainReport rep;
  rep.z = z;
  for (long n : orbit_hits(gp, z, p)) {
    if (n < 0) {
      rep.primitive = false;
      continue;
    }
    Point pt = Rational(pow(p, n)) * z;
    rep.chain_sum += gp.eval(pt);
    rep.points.push_back(std::move(pt));
    rep.exponents.push_back(n);
  }
  if (!rep.exponents.empty()) rep.exponent = rep.exponents.back();
  return rep;
}

/// n_P = 1 + max exponent over primitive chains through off-M support cosets
/// (max over the empty set is 0).
inline long chain_bound(const QuasiPeriodicFn& gp, const Integer& p) {
  long best = 0;
  for (const auto& [s, v] : gp.entries()) {
    if (s.is_rational()) continue;
    auto rep = chain_decompose(gp, s, p);
    if (rep.primitive) best = std::max(best, rep.exponent);
  }
  return 1 + best;
}

// ---------------------------------------------------------------------------
// Compatibility

/// gP(Qx) - gP(x) = gQ(Px) - gQ(x), compared coset by coset.
inline CosetComparison check_compatibility(const QuasiPeriodicFn& gp, const QuasiPeriodicFn& gq, const Integer& p,
                                           const Integer& q) {
  return compare_dilations(gp, q, gq, p);
}

/// Entries that check_compatibility would have to enumerate.
inline double compatibility_cost(const QuasiPeriodicFn& gp, const QuasiPeriodicFn& gq, const Integer& p,
                                 const Integer& q) {
  double r = static_cast<double>(gp.rank());
  return std::pow(q.get_d(), r) * static_cast<double>(gp.size()) +
         std::pow(p.get_d(), r) * static_cast<double>(gq.size());
}

/// Failure of compatibility, carrying the offending coset.
class IncompatibleInput : public InputError {
 public:
  IncompatibleInput(const std::string& what, Point coset, Rational lhs, Rational rhs)
      : InputError(what), coset(std::move(coset)), lhs(std::move(lhs)), rhs(std::move(rhs)) {}
  Point coset;
  Rational lhs;
  Rational rhs;
};

// ---------------------------------------------------------------------------
// Reconstruction for coprime dilations

struct PeriodicityCertificate {
  QuasiPeriodicFn result;
  Rational constant_c = 0;
  Window window_checked;
  bool cross_telescope_checked = false;
  bool compatibility_checked = false;  // exact cocycle check ran up front
  std::set<Point> candidate_cosets;
  std::size_t window_points = 0;
};

struct ReconstructOptions {
  /// Up-front cocycle check is skipped above this many enumerated cosets; the
  /// exact verification of both dilation differences implies it anyway.
  double compatibility_budget = 2.0e5;
  /// Testing hook: corrupts one value of the reconstruction before it is
  /// verified, so the theorem-violation path can be exercised end to end.
  bool inject_fault = false;
};

namespace detail {

[[noreturn]] inline void diagnose(const QuasiPeriodicFn& gp, const QuasiPeriodicFn& gq, const Integer& p,
                                  const Integer& q, bool compat_done, const std::string& what) {
  if (!compat_done) {
    auto cmp = check_compatibility(gp, gq, p, q);
    if (!cmp.equal)
      throw IncompatibleInput("gP and gQ violate the cocycle condition", *cmp.witness, cmp.left_value,
                              cmp.right_value);
  }
  throw TheoremViolation(what);
}

}  // namespace detail

/// Recovers the periodic f (modified at 0) with dilation differences gP, gQ.
/// f is built by telescoping gP on the candidate support cosets; its two
/// dilation differences are then checked exactly against the input.
inline PeriodicityCertificate reconstruct_periodic(const QuasiPeriodicFn& gp, const QuasiPeriodicFn& gq,
                                                   const Integer& p, const Integer& q, const Window& window,
                                                   const ReconstructOptions& opts = {}) {
  if (p < 2 || q < 2) throw InputError("P and Q must be >= 2");
  if (gcd(p, q) != 1) throw Unsupported("P and Q are not coprime; use independent_sublattice");
  if (!(gp.lattice() == gq.lattice())) throw InputError("gP and gQ must share a lattice");
  if (gp.zero_value() != 0 || gq.zero_value() != 0) throw InputError("gP and gQ must vanish at 0");
  if (gp.zero_coset_value() != 0 || gq.zero_coset_value() != 0)
    throw InputError("gP and gQ must vanish on the lattice");

  PeriodicityCertificate cert;
  cert.window_checked = window;
  if (compatibility_cost(gp, gq, p, q) <= opts.compatibility_budget) {
    auto cmp = check_compatibility(gp, gq, p, q);
    if (!cmp.equal)
      throw IncompatibleInput("gP and gQ violate the cocycle condition", *cmp.witness, cmp.left_value,
                              cmp.right_value);
    cert.compatibility_checked = true;
  }
  const bool compat = cert.compatibility_checked;

  auto tp = TelescopeFn::borrowing(gp, p), tq = TelescopeFn::borrowing(gq, q);
  cert.candidate_cosets = support_cosets(gp, gq, p, q);

  const std::size_t r = gp.rank();
  QuasiPeriodicFn f(gp.lattice());
  for (const auto& key : cert.candidate_cosets) {
    if (key.is_zero()) continue;
    Rational v = tp.eval(key);
    if (v != tq.eval(key))
      detail::diagnose(gp, gq, p, q, compat, "telescopes in P and Q disagree at " + to_display(key));
    f.add_reduced(key, v);
  }
  const Point lambda0 = gp.lattice().generator(0);
  cert.constant_c = tp.eval(lambda0);
  if (cert.constant_c != tq.eval(lambda0))
    detail::diagnose(gp, gq, p, q, compat, "telescopes disagree on the lattice");
  f.add_reduced(Point(r), cert.constant_c);
  f.set_zero_value(cert.constant_c);
  if (opts.inject_fault) f.add_reduced(Point(r), Rational(1));

  if (!compare_dilations(f, p, gp, Integer(1)).equal || !compare_dilations(f, q, gq, Integer(1)).equal)
    detail::diagnose(gp, gq, p, q, compat, "reconstructed function does not reproduce gP and gQ");

  // Off 0, f must agree with both telescopes everywhere; sample the window.
  auto pts = window.points(r);
  for (const auto& x : pts) {
    if (x.is_zero()) continue;
    Rational fx = f.eval(x);
    if (tp.eval(x) != fx || tq.eval(x) != fx)
      detail::diagnose(gp, gq, p, q, compat, "periodic reconstruction differs from a telescope at " + to_display(x));
  }
  cert.window_points = pts.size();
  cert.cross_telescope_checked = true;
  cert.result = std::move(f);
  return cert;
}

inline PeriodicityCertificate reconstruct_periodic(const QuasiPeriodicFn& gp, const QuasiPeriodicFn& gq, long p,
                                                   long q, const Window& window,
                                                   const ReconstructOptions& opts = {}) {
  return reconstruct_periodic(gp, gq, Integer(p), Integer(q), window, opts);
}

// ---------------------------------------------------------------------------
// Multiplicatively independent, not necessarily coprime

struct SublatticeReport {
  Lattice lattice_prime;
  long n_p = 1;
  long n_q = 1;
  bool verified = true;
  std::size_t checks = 0;
  // First failure: f(z + lambda) != f(z), or the two telescopes disagree at z.
  std::optional<Point> witness_z;
  std::optional<Point> witness_lambda;
  Rational value_z = 0;
  Rational value_shifted = 0;
};

/// Lambda' = <P^{2 n_P} L, Q^{2 n_Q} L>, with off-M periodicity of
/// f = telescope(gP, P) checked at the probes against every generator.
inline SublatticeReport independent_sublattice(const QuasiPeriodicFn& gp, const QuasiPeriodicFn& gq,
                                               const Integer& p, const Integer& q,
                                               const std::vector<Point>& probes) {
  if (!multiplicatively_independent(p, q)) throw InputError("P and Q must be multiplicatively independent");
  if (!(gp.lattice() == gq.lattice())) throw InputError("gP and gQ must share a lattice");
  SublatticeReport rep;
  rep.n_p = chain_bound(gp, p);
  rep.n_q = chain_bound(gq, q);
  const Lattice& lat = gp.lattice();
  rep.lattice_prime = join(lat.scaled(Rational(pow(p, 2 * rep.n_p))), lat.scaled(Rational(pow(q, 2 * rep.n_q))));

  auto tp = TelescopeFn::borrowing(gp, p), tq = TelescopeFn::borrowing(gq, q);
  for (const auto& z : probes) {
    lat.check_rank(z);
    if (z.is_rational()) throw InputError("off-M probes must have a nonzero irrational part");
    Rational fz = tp.eval(z);
    ++rep.checks;
    if (fz != tq.eval(z)) {
      rep.verified = false;
      rep.witness_z = z;
      rep.value_z = fz;
      rep.value_shifted = tq.eval(z);
      return rep;
    }
    for (std::size_t j = 0; j < lat.rank(); ++j) {
      Point lam = rep.lattice_prime.generator(j);
      Rational shifted = tp.eval(z + lam);
      ++rep.checks;
      if (shifted != fz) {
        rep.verified = false;
        rep.witness_z = z;
        rep.witness_lambda = lam;
        rep.value_z = fz;
        rep.value_shifted = shifted;
        return rep;
      }
    }
  }
  return rep;
}

}  // namespace perioda
