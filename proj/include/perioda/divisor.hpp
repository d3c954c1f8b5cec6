#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "perioda/reconstruct.hpp"

namespace perioda {

/// Integer-valued, rank-2 quasi-periodic function read as a divisor on C/L in
/// coordinates relative to (omega1, omega2). Supports lie in M = Q*L and the
/// value at 0 is the 0-coset value.
class Divisor {
 public:
  Divisor() = default;
  explicit Divisor(QuasiPeriodicFn fn) : fn_(std::move(fn)) {
    if (fn_.rank() != 2) throw InputError("divisors live in rank 2");
    if (!fn_.is_integer_valued()) throw InputError("divisor values must be integers");
    for (const auto& [k, v] : fn_.entries())
      if (!k.is_rational()) throw InputError("divisor support must lie in Q*L");
    if (fn_.zero_value() != fn_.zero_coset_value())
      throw InputError("divisor value at 0 must equal its value on the lattice");
  }

  /// Sums the given point masses; the value at 0 follows the 0-coset.
  static Divisor from_points(const Lattice& lattice, const std::vector<std::pair<Point, long>>& masses) {
    QuasiPeriodicFn fn(lattice);
    for (const auto& [p, v] : masses) fn.add(p, Rational(v));
    fn.set_zero_value(fn.zero_coset_value());
    return Divisor(std::move(fn));
  }

  const QuasiPeriodicFn& function() const { return fn_; }
  const Lattice& lattice() const { return fn_.lattice(); }
  Integer value(const Point& z) const { return fn_.eval(z).get_num(); }
  bool is_zero() const { return fn_.is_zero(); }

  friend bool operator==(const Divisor& a, const Divisor& b) { return a.fn_ == b.fn_; }

 private:
  QuasiPeriodicFn fn_;
};

namespace detail {

inline QuasiPeriodicFn over(const Divisor& d, const Lattice& lattice) {
  auto r = rebase(d.function(), lattice);
  if (!r) throw InputError("divisor is not periodic for the requested lattice");
  return *r;
}

inline Integer sum_values(const QuasiPeriodicFn& f) {
  Rational s = 0;
  for (const auto& [k, v] : f.entries()) s += v;
  return s.get_num();
}

inline Point sum_moments(const QuasiPeriodicFn& f) {
  Point s(f.rank());
  for (const auto& [k, v] : f.entries()) s += v * k;
  return s;
}

}  // namespace detail

/// Sum of the values over one fundamental domain of L.
inline Integer degree(const Divisor& d, const Lattice& lattice) { return detail::sum_values(detail::over(d, lattice)); }

/// sum z d(z) over the reduce()-representatives of L; meaningful mod L.
inline Point aj_sum(const Divisor& d, const Lattice& lattice) { return detail::sum_moments(detail::over(d, lattice)); }

struct PrincipalityCertificate {
  Lattice lattice_used;  // membership of the Abel-Jacobi sum is tested here
  Lattice summed_over;   // fundamental domain used for the sums
  Integer degree = 0;
  Point aj;
  bool aj_in_lattice = false;
  bool verdict = false;         // degree 0 and aj in lattice_used
  bool principal_in_k = false;  // degree 0 and aj in M; supports in M make this degree 0
};

/// Abel-Jacobi test for d relative to L. When d is L-periodic the sums run
/// over a fundamental domain of L. When L is coarser than the lattice of d,
/// the sums run over the lattice of d and only membership is tested in L,
/// which is well defined because the sum is determined mod that finer lattice.
inline PrincipalityCertificate principality_certificate(const Divisor& d, const Lattice& lattice) {
  PrincipalityCertificate cert;
  cert.lattice_used = lattice;
  auto fn = rebase(d.function(), lattice);
  if (fn) {
    cert.summed_over = lattice;
  } else if (d.lattice().is_sublattice_of(lattice)) {
    fn = d.function();
    cert.summed_over = d.lattice();
  } else {
    throw InputError("divisor is not periodic for the requested lattice");
  }
  cert.degree = detail::sum_values(*fn);
  cert.aj = detail::sum_moments(*fn);
  cert.aj_in_lattice = lattice.contains(cert.aj);
  cert.verdict = cert.degree == 0 && cert.aj_in_lattice;
  cert.principal_in_k = cert.degree == 0 && cert.aj.is_rational();
  return cert;
}

/// Generator values (d_sigma, d_tau) of a 1-cocycle of <sigma, tau> with
/// (sigma d)(z) = d(p z) and (tau d)(z) = d(q z).
struct CocyclePair {
  Divisor d_sigma;
  Divisor d_tau;
  Integer p;
  Integer q;
};

struct CocycleReport {
  bool passed = false;
  bool special = false;          // d_sigma(0) = d_tau(0) = 0
  bool constant_terms = false;   // p^{d_tau(0)} = q^{d_sigma(0)}
  bool cocycle_identity = false;  // d_tau(pz) - d_tau(z) = d_sigma(qz) - d_sigma(z)
  std::string failure;
  std::optional<Point> witness;
  Rational lhs = 0;
  Rational rhs = 0;
};

inline CocycleReport check_special_cocycle(const CocyclePair& c) {
  if (!multiplicatively_independent(c.p, c.q)) throw InputError("p and q must be multiplicatively independent");
  CocycleReport rep;
  const long ds0 = c.d_sigma.value(Point(2)).get_si();
  const long dt0 = c.d_tau.value(Point(2)).get_si();
  auto rpow = [](const Integer& b, long e) {
    return e >= 0 ? Rational(pow(b, e)) : Rational(1) / Rational(pow(b, -e));
  };
  rep.constant_terms = rpow(c.p, dt0) == rpow(c.q, ds0);
  rep.special = ds0 == 0 && dt0 == 0;
  auto cmp = compare_dilations(c.d_tau.function(), c.p, c.d_sigma.function(), c.q);
  rep.cocycle_identity = cmp.equal;
  if (!rep.special) {
    rep.failure = "not special: d_sigma(0) and d_tau(0) must vanish";
    rep.witness = Point(2);
    rep.lhs = dt0;
    rep.rhs = ds0;
  } else if (!rep.cocycle_identity) {
    rep.failure = "cocycle identity fails";
    rep.witness = cmp.witness;
    rep.lhs = cmp.left_value;
    rep.rhs = cmp.right_value;
  }
  rep.passed = rep.special && rep.cocycle_identity;
  return rep;
}

struct CoboundarySolution {
  Divisor e;
  PrincipalityCertificate certificate;  // e relative to lattice_prime
  Lattice lattice_prime;                // D * lattice_f
  Integer d = 1;                        // gcd(p-1, q-1)
  Integer degree_e = 0;
  bool degree_relation = false;  // deg d_gamma = (k^2 - 1) deg e for k = p, q
  bool aj_relation = false;      // aj(d_gamma) = (k - 1) aj(e) mod lattice_f for k = p, q
  PeriodicityCertificate reconstruction;
};

/// Finds e with e(pz) - e(z) = d_sigma and e(qz) - e(z) = d_tau and certifies
/// that e is principal for D * lattice_f, D = gcd(p-1, q-1).
inline CoboundarySolution solve_coboundary(const CocyclePair& c, const Lattice& lattice_f,
                                           const Window& window = Window{1, 2, {}}) {
  auto rep = check_special_cocycle(c);
  if (!rep.passed) throw InputError("cocycle check failed: " + rep.failure);
  if (gcd(c.p, c.q) != 1) throw Unsupported("p and q must be coprime");
  for (const Divisor* d : {&c.d_sigma, &c.d_tau}) {
    auto pc = principality_certificate(*d, lattice_f);
    if (!(pc.summed_over == lattice_f)) throw InputError("cocycle divisors must be lattice_f-periodic");
    if (!pc.verdict) throw InputError("cocycle divisors must be principal for lattice_f");
  }
  QuasiPeriodicFn gs = detail::over(c.d_sigma, lattice_f);
  QuasiPeriodicFn gt = detail::over(c.d_tau, lattice_f);

  CoboundarySolution sol;
  sol.reconstruction = reconstruct_periodic(gs, gt, c.p, c.q, window);
  if (!sol.reconstruction.result.is_integer_valued()) throw TheoremViolation("coboundary solution is not integral");
  sol.e = Divisor(sol.reconstruction.result);

  sol.degree_e = detail::sum_values(sol.reconstruction.result);
  const Point aj_e = detail::sum_moments(sol.reconstruction.result);
  sol.degree_relation = true;
  sol.aj_relation = true;
  for (auto [k, g] : {std::pair{c.p, &gs}, std::pair{c.q, &gt}}) {
    Integer lhs = detail::sum_values(*g);
    if (lhs != (k * k - 1) * sol.degree_e) sol.degree_relation = false;
    Point diff = detail::sum_moments(*g) - Rational(k - 1) * aj_e;
    if (!lattice_f.contains(diff)) sol.aj_relation = false;
  }
  if (!sol.degree_relation || sol.degree_e != 0) throw TheoremViolation("degree relation fails for the solution");
  if (!sol.aj_relation) throw TheoremViolation("Abel-Jacobi relation fails for the solution");

  Integer a = c.p - 1, b = c.q - 1;
  sol.d = gcd(a, b);
  sol.lattice_prime = lattice_f.scaled(Rational(sol.d));
  sol.certificate = principality_certificate(sol.e, sol.lattice_prime);
  if (!sol.certificate.verdict) throw TheoremViolation("solution is not principal for D * lattice_f");
  return sol;
}

/// m = e(0) - ord_0(f): z^m f has divisor matching e at 0.
inline Integer monomial_shift(const Divisor& e, const Integer& ord0_f) { return e.value(Point(2)) - ord0_f; }

}  // namespace perioda
