#include <gtest/gtest.h>

#include "helpers.hpp"

using namespace perioda;
using namespace perioda::testing;

namespace {

Divisor div_z2(std::initializer_list<std::pair<Point, long>> masses, const Lattice& l = Lattice::standard(2)) {
  return Divisor::from_points(l, std::vector<std::pair<Point, long>>(masses));
}

Divisor wp_prime_shape() {
  return div_z2({{pt({"1/2", "0"}), 1}, {pt({"0", "1/2"}), 1}, {pt({"1/2", "1/2"}), 1}, {pt({"0", "0"}), -3}});
}

CocyclePair cocycle_of(const Divisor& e, long p, long q) {
  return {Divisor(dilate_diff(e.function(), p)), Divisor(dilate_diff(e.function(), q)), Integer(p), Integer(q)};
}

long coprime_partner(Rng& rng, long p, long lo, long hi) {
  for (;;) {
    long q = rng.uniform(lo, hi);
    if (q != p && gcd(Integer(p), Integer(q)) == 1) return q;
  }
}

}  // namespace

TEST(Divisor, RejectsNonIntegerValues) {
  QuasiPeriodicFn f(Lattice::standard(2));
  f.add(pt({"1/2", "0"}), q(1, 2));
  EXPECT_THROW(Divisor{f}, InputError);
}

TEST(Divisor, RejectsSupportOutsideM) {
  QuasiPeriodicFn f(Lattice::standard(2));
  f.add(pta({"0", "0"}, {"1", "0"}), 1);
  EXPECT_THROW(Divisor{f}, InputError);
}

TEST(Divisor, RejectsModificationAtZero) {
  QuasiPeriodicFn f(Lattice::standard(2), 1);
  EXPECT_THROW(Divisor{f}, InputError);
}

TEST(Divisor, RejectsRankOne) { EXPECT_THROW(Divisor{QuasiPeriodicFn(Lattice::standard(1))}, InputError); }

TEST(Degree, Examples) {
  EXPECT_EQ(degree(div_z2({{pt({"1/2", "0"}), 1}, {pt({"0", "0"}), -1}}), Lattice::standard(2)), 0);
  EXPECT_EQ(degree(wp_prime_shape(), Lattice::standard(2)), 0);
  auto d = div_z2({{pt({"1/3", "0"}), 2}, {pt({"0", "0"}), -1}});
  EXPECT_EQ(degree(d, Lattice::standard(2)), 1);
  EXPECT_EQ(degree(d, Lattice::scaled_standard(2, 2)), 4);
}

TEST(Degree, NotPeriodicForCoarserLattice) {
  auto d = div_z2({{pt({"1/3", "0"}), 1}});
  EXPECT_THROW(degree(d, Lattice::scaled_standard(2, q(1, 2))), InputError);
}

TEST(Degree, LatticeCovariance) {
  Rng rng(41);
  for (int it = 0; it < 30; ++it) {
    Lattice l = rng.lattice(2);
    QuasiPeriodicFn fn = rng.function(l, 6, 6, false, true, true);
    fn.set_zero_value(fn.zero_coset_value());
    Divisor d(fn);
    Lattice sub = l.scaled(rng.uniform(1, 3));
    Integer index = l.index_of(sub);
    EXPECT_EQ(degree(d, sub), index * degree(d, l));
  }
}

TEST(AbelJacobi, Examples) {
  EXPECT_EQ(aj_sum(wp_prime_shape(), Lattice::standard(2)), pt({"1", "1"}));
  EXPECT_TRUE(Lattice::standard(2).contains(aj_sum(wp_prime_shape(), Lattice::standard(2))));
  auto d = div_z2({{pt({"1/2", "0"}), 1}, {pt({"0", "1/2"}), 1}, {pt({"0", "0"}), -2}});
  EXPECT_EQ(aj_sum(d, Lattice::standard(2)), pt({"1/2", "1/2"}));
  EXPECT_EQ(aj_sum(Divisor(QuasiPeriodicFn(Lattice::standard(2))), Lattice::standard(2)), pt({"0", "0"}));
}

TEST(Principality, Examples) {
  auto c1 = principality_certificate(wp_prime_shape(), Lattice::standard(2));
  EXPECT_TRUE(c1.verdict);
  EXPECT_EQ(c1.degree, 0);

  auto d = div_z2({{pt({"1/2", "0"}), 1}, {pt({"0", "1/2"}), 1}, {pt({"0", "0"}), -2}});
  auto c2 = principality_certificate(d, Lattice::standard(2));
  EXPECT_FALSE(c2.verdict);
  EXPECT_TRUE(c2.principal_in_k);
  EXPECT_FALSE(c2.aj_in_lattice);

  auto half = div_z2({{pt({"1/2", "0"}), 1}, {pt({"0", "0"}), -1}});
  auto c3 = principality_certificate(half, Lattice::scaled_standard(2, q(1, 2)));
  EXPECT_TRUE(c3.verdict);
  EXPECT_EQ(c3.aj, pt({"1/2", "0"}));
  EXPECT_EQ(c3.summed_over, Lattice::standard(2));
}

TEST(Principality, NonzeroDegreeIsNotPrincipal) {
  auto c = principality_certificate(div_z2({{pt({"1/3", "1/3"}), 1}}), Lattice::standard(2));
  EXPECT_EQ(c.degree, 1);
  EXPECT_FALSE(c.verdict);
  EXPECT_FALSE(c.principal_in_k);
}

TEST(Principality, VerdictIndependentOfRepresentatives) {
  Rng rng(43);
  const Lattice l = Lattice::standard(2);
  for (int it = 0; it < 50; ++it) {
    QuasiPeriodicFn f = rng.function(l, 6, 4, false, true, true);
    f.set_zero_value(f.zero_coset_value());
    Divisor d(f);
    auto cert = principality_certificate(d, l);
    // Oracle: the moment sum over representatives shifted by random lattice vectors.
    Point shifted(2);
    for (const auto& [k, v] : f.entries()) {
      Point lam = pt({"0", "0"});
      lam[0].rat = rng.uniform(-5, 5);
      lam[1].rat = rng.uniform(-5, 5);
      shifted += v * (k + lam);
    }
    EXPECT_EQ(l.contains(shifted), cert.aj_in_lattice);
    EXPECT_TRUE(l.contains(shifted - cert.aj));
  }
}

TEST(Cocycle, CoboundaryPasses) {
  auto e = div_z2({{pt({"1/5", "0"}), 1}, {pt({"0", "1/5"}), -1}});
  auto rep = check_special_cocycle(cocycle_of(e, 2, 3));
  EXPECT_TRUE(rep.passed);
  EXPECT_TRUE(rep.special);
  EXPECT_TRUE(rep.cocycle_identity);
  EXPECT_TRUE(rep.constant_terms);
}

TEST(Cocycle, ZeroPasses) {
  Divisor z(QuasiPeriodicFn(Lattice::standard(2)));
  EXPECT_TRUE(check_special_cocycle({z, z, Integer(2), Integer(3)}).passed);
}

TEST(Cocycle, NotSpecial) {
  auto ds = div_z2({{pt({"0", "0"}), 1}});
  Divisor z(QuasiPeriodicFn(Lattice::standard(2)));
  auto rep = check_special_cocycle({ds, z, Integer(2), Integer(3)});
  EXPECT_FALSE(rep.passed);
  EXPECT_FALSE(rep.special);
  EXPECT_FALSE(rep.constant_terms);
  EXPECT_NE(rep.failure.find("not special"), std::string::npos);
  ASSERT_TRUE(rep.witness.has_value());
  EXPECT_TRUE(rep.witness->is_zero());
}

TEST(Cocycle, IdentityFailureHasWitness) {
  auto e = div_z2({{pt({"1/5", "0"}), 1}, {pt({"0", "1/5"}), -1}});
  auto c = cocycle_of(e, 2, 3);
  QuasiPeriodicFn bad = c.d_tau.function();
  bad.add(pt({"1/7", "0"}), 1);
  bad.add(pt({"2/7", "0"}), -1);
  c.d_tau = Divisor(bad);
  auto rep = check_special_cocycle(c);
  EXPECT_FALSE(rep.passed);
  EXPECT_TRUE(rep.special);
  ASSERT_TRUE(rep.witness.has_value());
  // Oracle: both sides evaluated directly at the witness.
  const Point& z = *rep.witness;
  Rational lhs = c.d_tau.function().coset_value(Rational(2) * z) - c.d_tau.function().coset_value(z);
  Rational rhs = c.d_sigma.function().coset_value(Rational(3) * z) - c.d_sigma.function().coset_value(z);
  EXPECT_NE(lhs, rhs);
  EXPECT_EQ(rep.lhs, lhs);
  EXPECT_EQ(rep.rhs, rhs);
}

TEST(Cocycle, RequiresIndependence) {
  Divisor z(QuasiPeriodicFn(Lattice::standard(2)));
  EXPECT_THROW(check_special_cocycle({z, z, Integer(2), Integer(4)}), InputError);
}

TEST(Coboundary, FifthPoints) {
  auto e = div_z2({{pt({"1/5", "0"}), 1}, {pt({"0", "1/5"}), -1}});
  auto c = cocycle_of(e, 2, 3);
  // Oracle: e(2z) - e(z) is +1 on the four halves of (1/5, 0) and -1 at (1/5, 0).
  EXPECT_EQ(c.d_sigma.function().coset_value(pt({"1/10", "0"})), 1);
  EXPECT_EQ(c.d_sigma.function().coset_value(pt({"3/5", "1/2"})), 1);
  EXPECT_EQ(c.d_sigma.function().coset_value(pt({"1/5", "0"})), -1);
  auto sol = solve_coboundary(c, Lattice::scaled_standard(2, 5));
  EXPECT_TRUE(equal_on_cosets(sol.e.function(), e.function()).equal);
  EXPECT_EQ(sol.d, 1);
  EXPECT_EQ(sol.lattice_prime, Lattice::scaled_standard(2, 5));
  EXPECT_TRUE(sol.certificate.verdict);
  EXPECT_TRUE(sol.degree_relation);
  EXPECT_TRUE(sol.aj_relation);
}

TEST(Coboundary, ZeroCocycle) {
  Divisor z(QuasiPeriodicFn(Lattice::standard(2)));
  auto sol = solve_coboundary({z, z, Integer(2), Integer(3)}, Lattice::standard(2));
  EXPECT_TRUE(sol.e.is_zero());
  EXPECT_TRUE(sol.certificate.verdict);
}

TEST(Coboundary, HalfPointsNeedDoubledLattice) {
  auto e = div_z2({{pt({"1/2", "0"}), 1}, {pt({"0", "0"}), -1}});
  // e itself is not principal for Z^2; its coboundaries are.
  EXPECT_FALSE(principality_certificate(e, Lattice::standard(2)).verdict);
  auto sol = solve_coboundary(cocycle_of(e, 3, 5), Lattice::standard(2));
  EXPECT_EQ(sol.e, e);
  EXPECT_EQ(sol.d, 2);
  EXPECT_EQ(sol.lattice_prime, Lattice::scaled_standard(2, 2));
  EXPECT_TRUE(sol.certificate.verdict);
  EXPECT_EQ(sol.certificate.aj, pt({"2", "0"}));
}

TEST(Coboundary, RejectsNonSpecial) {
  auto ds = div_z2({{pt({"0", "0"}), 1}});
  Divisor z(QuasiPeriodicFn(Lattice::standard(2)));
  EXPECT_THROW(solve_coboundary({ds, z, Integer(2), Integer(3)}, Lattice::standard(2)), InputError);
}

TEST(Coboundary, RejectsNonPrincipalCocycle) {
  // A cocycle of a non-principal shape for the given lattice_f.
  auto e = div_z2({{pt({"1/2", "0"}), 1}, {pt({"0", "0"}), -1}});
  auto c = cocycle_of(e, 2, 3);
  EXPECT_THROW(solve_coboundary(c, Lattice::standard(2)), InputError);
}

TEST(Coboundary, RejectsNonCoprime) {
  auto e = div_z2({{pt({"1/5", "0"}), 1}, {pt({"0", "1/5"}), -1}});
  EXPECT_THROW(solve_coboundary(cocycle_of(e, 6, 10), Lattice::scaled_standard(2, 5)), Unsupported);
}

TEST(Coboundary, RandomRoundTrips) {
  Rng rng(47);
  for (int it = 0; it < 25; ++it) {
    Lattice lf = rng.lattice(2);
    Divisor e = random_principal(rng, lf, 6, 4);
    long p = rng.uniform(2, 7);
    long q = coprime_partner(rng, p, 2, 7);
    auto sol = solve_coboundary(cocycle_of(e, p, q), lf);
    EXPECT_TRUE(equal_on_cosets(sol.e.function(), e.function()).equal) << "instance " << it;
    EXPECT_TRUE(sol.certificate.verdict);
    EXPECT_EQ(sol.d, gcd(Integer(p - 1), Integer(q - 1)));
  }
}

TEST(Coboundary, AbelJacobiRelation) {
  Rng rng(53);
  for (int it = 0; it < 30; ++it) {
    Lattice l = rng.lattice(2);
    QuasiPeriodicFn f = rng.function(l, 5, 6, false, true, true);
    f.set_zero_value(f.zero_coset_value());
    long p = rng.uniform(2, 9);
    QuasiPeriodicFn d = dilate_diff(f, p);
    // Oracle: moment sums accumulated directly over the entries.
    Point aj_d(2), aj_f(2);
    Rational deg_d = 0, deg_f = 0;
    for (const auto& [k, v] : d.entries()) {
      aj_d += v * k;
      deg_d += v;
    }
    for (const auto& [k, v] : f.entries()) {
      aj_f += v * k;
      deg_f += v;
    }
    EXPECT_EQ(deg_d, Rational(p * p - 1) * deg_f);
    EXPECT_TRUE(l.contains(aj_d - Rational(p - 1) * aj_f));
  }
}

TEST(Coboundary, InjectivitySearch) {
  Rng rng(59);
  for (int it = 0; it < 200; ++it) {
    QuasiPeriodicFn f = rng.function(rng.lattice(2), 4, 5, false, true, true);
    f.set_zero_value(f.zero_coset_value());
    if (f.is_zero()) continue;
    EXPECT_FALSE(dilate_diff(f, rng.uniform(2, 6)).is_zero());
  }
}

TEST(MonomialShift, Examples) {
  Divisor zero(QuasiPeriodicFn(Lattice::standard(2)));
  EXPECT_EQ(monomial_shift(zero, 0), 0);
  auto two = div_z2({{pt({"0", "0"}), 2}, {pt({"1/2", "0"}), -2}});
  EXPECT_EQ(monomial_shift(two, -1), 3);
  EXPECT_EQ(monomial_shift(zero, 5), -5);
}
