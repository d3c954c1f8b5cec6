#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "perioda/weierstrass_suite.hpp"

using namespace perioda;

namespace {

const ComplexLattice kSquare{{1.0, 0.0}, {0.0, 1.0}};
const ComplexLattice kSkew{{1.0, 0.0}, {0.3, 1.2}};

constexpr double kTol = 1e-8;
constexpr double kPi = std::numbers::pi;

}  // namespace

// Frozen values from Jacobi theta functions at 30 digits (mpmath), which agree
// with brute-force Eisenstein sums to 1e-7.
TEST(WeierstrassOracle, SquareLatticeValues) {
  WeierstrassEngine eng(kSquare);
  const Complex z{0.3, 0.2};
  EXPECT_LT(std::abs(eng.wp(z) - Complex(3.3721036737358195, -5.9914186004556428)), 1e-10);
  EXPECT_LT(std::abs(eng.zeta(z) - Complex(2.3378955219576281, -1.6806382500007899)), 1e-10);
  // Square lattice: eta1 = pi exactly.
  EXPECT_LT(std::abs(eng.eta1() - kPi), 1e-12);
  EXPECT_LT(std::abs(eng.eta2() + Complex(0.0, kPi)), 1e-12);
}

TEST(WeierstrassOracle, SkewLatticeValues) {
  WeierstrassEngine eng(kSkew);
  const Complex z{0.41, -0.17};
  EXPECT_LT(std::abs(eng.wp(z) - Complex(4.3793693825082662, 2.3260157605903018)), 1e-10);
  EXPECT_LT(std::abs(eng.zeta(z) - Complex(2.0199382386976724, 1.0567721529350072)), 1e-10);
  EXPECT_LT(std::abs(eng.eta1() - Complex(3.3028901042705283, -0.039871660547689554)), 1e-10);
}

TEST(WeierstrassOracle, SquareLatticeRotationSymmetry) {
  // iL = L gives zeta(iz) = -i zeta(z) and wp(iz) = -wp(z).
  WeierstrassEngine eng(kSquare);
  const Complex i{0.0, 1.0};
  for (Complex z : random_probes(eng, 50, 7)) {
    EXPECT_LT(std::abs(eng.zeta(i * z) + i * eng.zeta(z)), kTol);
    EXPECT_LT(std::abs(eng.wp(i * z) + eng.wp(z)), kTol);
  }
}

TEST(WeierstrassZeta, OddAndQuasiPeriodic) {
  for (const auto& l : {kSquare, kSkew}) {
    WeierstrassEngine eng(l);
    const Complex e1 = 2.0 * eng.zeta(l.omega1 / 2.0), e2 = 2.0 * eng.zeta(l.omega2 / 2.0);
    for (Complex z : random_probes(eng, 100, 11)) {
      EXPECT_LT(std::abs(eng.zeta(-z) + eng.zeta(z)), kTol);
      EXPECT_LT(std::abs(eng.zeta(z + l.omega1) - eng.zeta(z) - e1), kTol);
      EXPECT_LT(std::abs(eng.zeta(z + l.omega2) - eng.zeta(z) - e2), kTol);
    }
  }
}

TEST(WeierstrassZeta, Legendre) {
  for (const auto& l : {kSquare, kSkew}) {
    WeierstrassEngine eng(l);
    Complex lhs = eng.eta1() * l.omega2 - eng.eta2() * l.omega1;
    EXPECT_LT(std::abs(lhs - Complex(0.0, 2.0 * kPi)), kTol);
  }
}

TEST(WeierstrassZeta, DerivativeIsMinusWp) {
  WeierstrassEngine eng(kSkew);
  const double h = 1e-5;
  for (Complex z : {Complex(0.4, 0.5), Complex(0.7, 0.3), Complex(0.55, 0.9)}) {
    Complex d = (eng.zeta(z + h) - eng.zeta(z - h)) / (2.0 * h);
    EXPECT_LT(std::abs(d + eng.wp(z)), 1e-5);
    EXPECT_GT(std::abs(d - eng.wp(z)), 1e-3);
  }
}

TEST(WeierstrassWp, EvenAndPeriodic) {
  for (const auto& l : {kSquare, kSkew}) {
    WeierstrassEngine eng(l);
    for (Complex z : random_probes(eng, 100, 13)) {
      Complex p = eng.wp(z);
      EXPECT_LT(std::abs(eng.wp(-z) - p), kTol);
      EXPECT_LT(std::abs(eng.wp(z + l.omega1) - p), kTol);
      EXPECT_LT(std::abs(eng.wp(z + l.omega2) - p), kTol);
    }
  }
}

TEST(WeierstrassEta, AdditiveOddNonzero) {
  WeierstrassEngine eng(kSkew);
  const Complex w1 = kSkew.omega1, w2 = kSkew.omega2;
  EXPECT_LT(std::abs(eng.eta(w1 + w2) - eng.eta1() - eng.eta2()), kTol);
  EXPECT_LT(std::abs(eng.eta(-w1) + eng.eta1()), kTol);
  EXPECT_LT(std::abs(eng.eta(3.0 * w1 - 2.0 * w2) - 3.0 * eng.eta1() + 2.0 * eng.eta2()), kTol);
  EXPECT_GT(std::abs(eng.eta1()), 1.0);
  // eta(omega) = zeta(z + omega) - zeta(z) for a non-generator period.
  Complex z{0.37, 0.21};
  EXPECT_LT(std::abs(eng.zeta(z + w1 + w2) - eng.zeta(z) - eng.eta(w1 + w2)), kTol);
}

TEST(WeierstrassEta, RejectsNonLatticeAndZero) {
  WeierstrassEngine eng(kSquare);
  EXPECT_THROW(eng.eta(Complex(0.5, 0.0)), InputError);
  EXPECT_THROW(eng.eta(Complex(0.0, 0.0)), InputError);
}

TEST(WeierstrassG, EllipticAndOdd) {
  for (const auto& l : {kSquare, kSkew}) {
    WeierstrassEngine eng(l);
    for (auto [p, q] : {std::pair{2L, 3L}, {3L, 5L}, {2L, 5L}}) {
      EXPECT_TRUE(verify_elliptic(ZetaCombination::g_p(p, q), eng, 100, 3).passed);
      EXPECT_TRUE(verify_elliptic(ZetaCombination::g_q(p, q), eng, 100, 4).passed);
      for (Complex z : random_probes(eng, 30, 5, p * q)) {
        auto [a, b] = g_pair(p, q, z, eng);
        auto [ma, mb] = g_pair(p, q, -z, eng);
        EXPECT_LT(std::abs(a + ma), kTol);
        EXPECT_LT(std::abs(b + mb), kTol);
      }
    }
  }
}

TEST(WeierstrassG, ScalarIdentity) {
  // g_q(z) + q g_p(z/q) = pq zeta(z) - zeta(pqz).
  WeierstrassEngine eng(kSkew);
  const long p = 3, q = 5;
  auto gp = ZetaCombination::g_p(p, q), gq = ZetaCombination::g_q(p, q);
  for (Complex z : random_probes(eng, 50, 9, p * q)) {
    Complex lhs = gq.eval(eng, z) + static_cast<double>(q) * gp.eval(eng, z / static_cast<double>(q));
    Complex rhs = static_cast<double>(p * q) * eng.zeta_unchecked(z) - eng.zeta_unchecked(static_cast<double>(p * q) * z);
    EXPECT_LT(std::abs(lhs - rhs), kTol);
  }
}

TEST(WeierstrassCocycle, ConsistencyResidual) {
  for (const auto& l : {kSquare, kSkew}) {
    WeierstrassEngine eng(l);
    for (auto [p, q] : {std::pair{2L, 3L}, {3L, 5L}, {2L, 5L}})
      for (Complex z : random_probes(eng, 100, 21, p * q)) EXPECT_LT(consistency_residual(p, q, z, eng), kTol);
  }
}

TEST(WeierstrassCocycle, ProductsMatchReducedMatrix) {
  WeierstrassEngine eng(kSquare);
  CocycleMatrices m{2, 3};
  for (Complex z : random_probes(eng, 40, 23, 6)) {
    auto [lhs, rhs] = m.products(eng, z);
    Matrix2 expect{{{1.0, 6.0 * eng.zeta_unchecked(z) - eng.zeta_unchecked(6.0 * z)}, {0.0, 6.0}}};
    EXPECT_LT(max_entry_distance(lhs, expect), kTol);
    EXPECT_LT(max_entry_distance(rhs, expect), kTol);
  }
}

TEST(WeierstrassCocycle, RejectsSmallDilations) {
  EXPECT_THROW(consistency_residual(1, 3, Complex(0.3, 0.2), kSquare), InputError);
}

TEST(WeierstrassVerify, ZetaIsNotElliptic) {
  WeierstrassEngine eng(kSkew);
  auto rep = verify_elliptic(ZetaCombination::zeta_fn(), eng, 50, 1);
  EXPECT_FALSE(rep.passed);
  double top = std::max(std::abs(eng.eta1()), std::abs(eng.eta2()));
  EXPECT_NEAR(rep.max_residual, top, 1e-7);
  Complex eta = rep.argmax_period == 1 ? eng.eta1() : eng.eta2();
  EXPECT_NEAR(rep.max_residual, std::abs(eta), 1e-7);
}

TEST(WeierstrassVerify, ConstantIsElliptic) {
  WeierstrassEngine eng(kSquare);
  auto rep = verify_elliptic(ZetaCombination::constant_fn(2.5), eng, 20, 1);
  EXPECT_TRUE(rep.passed);
  EXPECT_EQ(rep.max_residual, 0.0);
}

TEST(WeierstrassVerify, DeterministicInSeed) {
  WeierstrassEngine eng(kSkew);
  auto a = verify_elliptic(ZetaCombination::g_p(2, 3), eng, 30, 42);
  auto b = verify_elliptic(ZetaCombination::g_p(2, 3), eng, 30, 42);
  EXPECT_EQ(a.max_residual, b.max_residual);
  EXPECT_EQ(a.argmax_probe, b.argmax_probe);
}

TEST(WeierstrassErrors, PoleGuard) {
  WeierstrassEngine eng(kSquare);
  EXPECT_THROW(eng.zeta(Complex(0.0, 0.0)), DomainError);
  EXPECT_THROW(eng.zeta(Complex(1.0 + 1e-4, 1.0)), DomainError);
  EXPECT_THROW(eng.wp(Complex(0.01, 0.0)), DomainError);
  EXPECT_THROW(g_pair(2, 3, Complex(1.0 / 6.0, 0.0), eng), DomainError);
  EXPECT_NO_THROW(eng.zeta(Complex(0.2, 0.0)));
}

TEST(WeierstrassErrors, InvalidLattice) {
  EXPECT_THROW(ComplexLattice(Complex(0.0, 0.0), Complex(0.0, 1.0)), InputError);
  EXPECT_THROW(ComplexLattice(Complex(1.0, 0.0), Complex(2.0, 0.0)), InputError);
  EXPECT_THROW(ComplexLattice(Complex(0.0, 1.0), Complex(1.0, 0.0)), InputError);
  TruncationPolicy bad;
  bad.tol = 0.0;
  EXPECT_THROW(WeierstrassEngine(kSquare, bad), InputError);
}

TEST(WeierstrassTruncation, ThetaAgreesWithLatticeSum) {
  for (const auto& l : {kSquare, kSkew}) {
    TruncationPolicy direct;
    direct.method = SumMethod::lattice_sum;
    direct.radius = 64.0;
    WeierstrassEngine slow(l, direct), fast(l);
    for (Complex z : random_probes(fast, 6, 31)) {
      double tb = slow.tail_bound(z);
      ASSERT_TRUE(std::isfinite(tb));
      EXPECT_LE(std::abs(slow.zeta(z) - fast.zeta(z)), tb + 1e-9);
    }
  }
}

TEST(WeierstrassTruncation, DoublingRadiusConverges) {
  TruncationPolicy a, b;
  a.method = b.method = SumMethod::lattice_sum;
  a.radius = 32.0;
  b.radius = 64.0;
  WeierstrassEngine ea(kSquare, a), eb(kSquare, b);
  for (Complex z : random_probes(ea, 5, 33)) {
    double d = std::abs(ea.zeta(z) - eb.zeta(z));
    EXPECT_LE(d, ea.tail_bound(z) + 1e-9);
  }
}

TEST(WeierstrassSuite, PassesOnBothLattices) {
  SuiteOptions opt;
  for (const auto& l : {kSquare, kSkew}) {
    auto rep = run_weierstrass_suite(l, opt);
    EXPECT_TRUE(rep.passed);
    for (const auto& c : rep.checks) EXPECT_TRUE(c.passed) << c.name << " residual " << c.residual;
    EXPECT_GE(rep.checks.size(), 16u);
  }
}

TEST(WeierstrassSuite, TightToleranceFails) {
  SuiteOptions opt;
  opt.tol = 1e-300;
  opt.probes = 10;
  auto rep = run_weierstrass_suite(kSkew, opt);
  EXPECT_FALSE(rep.passed);
}
