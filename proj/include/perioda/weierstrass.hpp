#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "perioda/error.hpp"

namespace perioda {

using Complex = std::complex<double>;

/// omega1 * Z + omega2 * Z with Im(omega2 / omega1) > 0.
struct ComplexLattice {
  Complex omega1{1.0, 0.0};
  Complex omega2{0.0, 1.0};

  ComplexLattice() = default;
  ComplexLattice(Complex w1, Complex w2) : omega1(w1), omega2(w2) {
    if (std::abs(w1) == 0.0 || std::abs(w2) == 0.0) throw InputError("lattice periods must be nonzero");
    if ((w2 / w1).imag() <= 0.0) throw InputError("lattice periods must satisfy Im(omega2/omega1) > 0");
  }

  double min_period() const { return std::min(std::abs(omega1), std::abs(omega2)); }
  double cell_area() const { return std::abs((std::conj(omega1) * omega2).imag()); }
};

enum class SumMethod {
  theta,        // Jacobi theta log-derivative, accurate to rounding
  lattice_sum,  // direct truncated sum over |omega| <= radius
};

struct TruncationPolicy {
  double radius = 64.0;  // used by SumMethod::lattice_sum only
  double tol = 1e-8;
  SumMethod method = SumMethod::theta;
  double pole_guard_factor = 0.05;  // guard = factor * min|omega_i| / (p q)
};

/// Evaluates zeta, wp and the quasi-periods for one lattice.
///
/// The theta path uses, for the normalized lattice Z + tau Z (tau reduced to
/// the standard fundamental domain, q = exp(i pi tau)),
///   zeta(u) = eta * u + pi * theta1'(pi u) / theta1(pi u),
///   eta     = -pi^2 theta1'''(0) / (3 theta1'(0)),
/// and rescales by the first reduced period. Arguments more than 2.5 periods
/// away in the tau direction are translated back with the measured
/// quasi-period 2 zeta(tau / 2); shifts along 1 are exact for the theta term.
///
/// The lattice_sum path is
///   zeta(z) = 1/z + sum' [1/(z-w) + 1/w + z/w^2] over 0 < |w| <= R.
/// Each term equals z^2 / (w^2 (z - w)), so for R >= 2|z| the tail is at most
/// sum_{|w|>R} 2|z|^2/|w|^3 ~ 4 pi |z|^2 / (A R), A the cell area.
class WeierstrassEngine {
 public:
  WeierstrassEngine(ComplexLattice lattice, TruncationPolicy policy = {})
      : lattice_(lattice), policy_(policy) {
    if (!(policy_.tol > 0.0)) throw InputError("tolerance must be positive");
    if (policy_.method == SumMethod::lattice_sum && !(policy_.radius > 0.0))
      throw InputError("radius must be positive");
    reduce_basis();
    tau_ = w2_ / w1_;
    nome_ = std::exp(Complex(0.0, std::numbers::pi) * tau_);
    Complex d1 = 0.0, d3 = 0.0;
    for (int n = 0; n < 64; ++n) {
      double k = 2.0 * n + 1.0;
      Complex qn = nome_power(n);
      double sgn = (n % 2 == 0) ? 1.0 : -1.0;
      d1 += sgn * k * qn;
      d3 += -sgn * k * k * k * qn;
      if (std::abs(qn) * k * k * k < 1e-30) break;
    }
    eta_unit1_ = -std::numbers::pi * std::numbers::pi * d3 / (3.0 * d1);
    eta_unit2_ = 2.0 * zeta_unit_series(tau_ / 2.0);
  }

  const ComplexLattice& lattice() const { return lattice_; }
  const TruncationPolicy& policy() const { return policy_; }
  Complex reduced_omega1() const { return w1_; }
  Complex reduced_omega2() const { return w2_; }

  /// Real coordinates (a, b) with z = a*omega1 + b*omega2.
  std::pair<double, double> coordinates(Complex z) const { return solve(lattice_.omega1, lattice_.omega2, z); }

  double distance_to_lattice(Complex z) const {
    auto [a, b] = solve(w1_, w2_, z);
    double fa = std::floor(a), fb = std::floor(b);
    double best = std::numeric_limits<double>::infinity();
    for (int i = -1; i <= 2; ++i)
      for (int j = -1; j <= 2; ++j) best = std::min(best, std::abs(z - ((fa + i) * w1_ + (fb + j) * w2_)));
    return best;
  }

  double pole_guard(long pq = 1) const {
    return policy_.pole_guard_factor * lattice_.min_period() / static_cast<double>(pq);
  }

  void check_pole(Complex z, double guard) const {
    if (distance_to_lattice(z) < guard) throw DomainError("argument within the pole guard of a lattice point");
  }

  Complex zeta(Complex z) const {
    check_pole(z, pole_guard());
    return zeta_unchecked(z);
  }

  Complex wp(Complex z) const {
    check_pole(z, pole_guard());
    if (policy_.method == SumMethod::lattice_sum) return wp_lattice_sum(z);
    auto [u, shift1, shift2] = reduce_argument(z / w1_);
    (void)shift1;
    (void)shift2;
    auto [t0, t1, t2] = theta_triplet(std::numbers::pi * u);
    Complex ld = t1 / t0;
    Complex wp_unit = -eta_unit1_ + std::numbers::pi * std::numbers::pi * (ld * ld - t2 / t0);
    return wp_unit / (w1_ * w1_);
  }

  /// eta(omega) = zeta(z + omega) - zeta(z). Generators use 2 zeta(omega_i / 2);
  /// other lattice vectors use additivity.
  Complex eta(Complex omega) const {
    auto [a, b] = coordinates(omega);
    double ra = std::round(a), rb = std::round(b);
    double scale = std::max(1.0, std::abs(omega));
    if (std::abs(omega - (ra * lattice_.omega1 + rb * lattice_.omega2)) > 1e-9 * scale)
      throw InputError("eta needs a lattice vector");
    if (ra == 0.0 && rb == 0.0) throw InputError("eta(0) is undefined");
    return ra * eta1() + rb * eta2();
  }
  Complex eta1() const { return 2.0 * zeta(lattice_.omega1 / 2.0); }
  Complex eta2() const { return 2.0 * zeta(lattice_.omega2 / 2.0); }

  /// Tail estimate of the lattice_sum path at z (0 for the theta path).
  double tail_bound(Complex z) const {
    if (policy_.method != SumMethod::lattice_sum) return 0.0;
    double diam = std::abs(w1_) + std::abs(w2_);
    double r = policy_.radius - diam;
    if (r <= 2.0 * std::abs(z)) return std::numeric_limits<double>::infinity();
    return 4.0 * std::numbers::pi * std::norm(z) / (lattice_.cell_area() * r);
  }

  Complex zeta_unchecked(Complex z) const {
    if (policy_.method == SumMethod::lattice_sum) return zeta_lattice_sum(z);
    auto [u, n1, n2] = reduce_argument(z / w1_);
    Complex val = zeta_unit_series(u) + n1 * eta_unit1_ + n2 * eta_unit2_;
    return val / w1_;
  }

 private:
  static std::pair<double, double> solve(Complex w1, Complex w2, Complex z) {
    // z = a w1 + b w2 with a, b real.
    double det = w1.real() * w2.imag() - w1.imag() * w2.real();
    double a = (z.real() * w2.imag() - z.imag() * w2.real()) / det;
    double b = (w1.real() * z.imag() - w1.imag() * z.real()) / det;
    return {a, b};
  }

  void reduce_basis() {
    Complex a = lattice_.omega1, b = lattice_.omega2;
    if (std::abs(b) < std::abs(a)) std::swap(a, b);
    for (int it = 0; it < 1000; ++it) {
      b -= std::round((b / a).real()) * a;
      if (std::abs(b) >= std::abs(a)) break;
      std::swap(a, b);
    }
    if ((b / a).imag() < 0.0) b = -b;
    w1_ = a;
    w2_ = b;
  }

  Complex nome_power(int n) const {
    double e = (n + 0.5) * (n + 0.5);
    return std::exp(Complex(0.0, std::numbers::pi) * tau_ * e);
  }

  /// theta1, theta1', theta1'' at v.
  std::tuple<Complex, Complex, Complex> theta_triplet(Complex v) const {
    Complex t0 = 0.0, t1 = 0.0, t2 = 0.0;
    const double y = std::abs(v.imag());
    const double lq = std::log(std::abs(nome_));  // < 0
    double peak = -std::numeric_limits<double>::infinity();
    for (int n = 0; n < 400; ++n) {
      double k = 2.0 * n + 1.0;
      double logmag = (n + 0.5) * (n + 0.5) * lq + k * y;
      peak = std::max(peak, logmag);
      if (logmag < peak - 50.0 && n > 2) break;
      Complex qn = nome_power(n);
      double sgn = (n % 2 == 0) ? 1.0 : -1.0;
      Complex s = std::sin(k * v), c = std::cos(k * v);
      t0 += sgn * qn * s;
      t1 += sgn * k * qn * c;
      t2 += -sgn * k * k * qn * s;
    }
    return {2.0 * t0, 2.0 * t1, 2.0 * t2};
  }

  Complex zeta_unit_series(Complex u) const {
    auto [t0, t1, t2] = theta_triplet(std::numbers::pi * u);
    (void)t2;
    return eta_unit1_ * u + std::numbers::pi * t1 / t0;
  }

  /// u = u0 + n1 + n2 tau with u0 inside the directly evaluated strip.
  std::tuple<Complex, double, double> reduce_argument(Complex u) const {
    double n2 = 0.0;
    double b = u.imag() / tau_.imag();
    if (std::abs(b) > 2.5) n2 = std::round(b);
    Complex v = u - n2 * tau_;
    double n1 = std::round(v.real() - (v.imag() / tau_.imag()) * tau_.real());
    return {v - n1, n1, n2};
  }

  template <typename Term>
  Complex lattice_sum(Term term) const {
    const double r = policy_.radius;
    const double h = lattice_.cell_area();
    // |m w1 + n w2| <= R implies |m|, |n| <= R |w_other| / area.
    long mmax = static_cast<long>(std::ceil(r * std::abs(w2_) / h)) + 1;
    long nmax = static_cast<long>(std::ceil(r * std::abs(w1_) / h)) + 1;
    Complex acc = 0.0;
    for (long m = -mmax; m <= mmax; ++m)
      for (long n = -nmax; n <= nmax; ++n) {
        if (m == 0 && n == 0) continue;
        Complex w = static_cast<double>(m) * w1_ + static_cast<double>(n) * w2_;
        if (std::abs(w) > r) continue;
        acc += term(w);
      }
    return acc;
  }

  Complex zeta_lattice_sum(Complex z) const {
    return 1.0 / z + lattice_sum([&](Complex w) { return 1.0 / (z - w) + 1.0 / w + z / (w * w); });
  }
  Complex wp_lattice_sum(Complex z) const {
    return 1.0 / (z * z) + lattice_sum([&](Complex w) { return 1.0 / ((z - w) * (z - w)) - 1.0 / (w * w); });
  }

  ComplexLattice lattice_;
  TruncationPolicy policy_;
  Complex w1_, w2_, tau_, nome_;
  Complex eta_unit1_, eta_unit2_;
};

inline Complex zeta(Complex z, const ComplexLattice& l, const TruncationPolicy& t = {}) {
  return WeierstrassEngine(l, t).zeta(z);
}
inline Complex wp(Complex z, const ComplexLattice& l, const TruncationPolicy& t = {}) {
  return WeierstrassEngine(l, t).wp(z);
}
inline Complex eta(Complex omega, const ComplexLattice& l, const TruncationPolicy& t = {}) {
  return WeierstrassEngine(l, t).eta(omega);
}

/// f(z) = constant + sum_k coef_k * zeta(dilation_k * z).
struct ZetaCombination {
  std::string name = "custom";
  std::vector<std::pair<double, long>> terms;  // (coefficient, integer dilation)
  double constant = 0.0;
  long pole_scale = 1;  // poles lie in (1/pole_scale) L

  static ZetaCombination zeta_fn() { return {"zeta", {{1.0, 1}}, 0.0, 1}; }
  static ZetaCombination constant_fn(double c) { return {"constant", {}, c, 1}; }
  /// g_p(z) = p zeta(qz) - zeta(pqz).
  static ZetaCombination g_p(long p, long q) {
    return {"g_p", {{static_cast<double>(p), q}, {-1.0, p * q}}, 0.0, p * q};
  }
  /// g_q(z) = q zeta(pz) - zeta(pqz).
  static ZetaCombination g_q(long p, long q) {
    return {"g_q", {{static_cast<double>(q), p}, {-1.0, p * q}}, 0.0, p * q};
  }

  Complex eval(const WeierstrassEngine& eng, Complex z) const {
    Complex acc = constant;
    for (const auto& [c, d] : terms) acc += c * eng.zeta_unchecked(static_cast<double>(d) * z);
    return acc;
  }
};

namespace detail {

inline void check_dilations(long p, long q) {
  if (p < 2 || q < 2) throw InputError("p and q must be >= 2");
}

/// Poles of g_p, g_q (and of all dilated arguments used below) lie in (1/pq) L.
inline void check_g_poles(const WeierstrassEngine& eng, long p, long q, Complex z) {
  double pq = static_cast<double>(p * q);
  if (eng.distance_to_lattice(pq * z) / pq < eng.pole_guard(p * q))
    throw DomainError("argument within the pole guard of (1/pq) L");
}

}  // namespace detail

inline std::pair<Complex, Complex> g_pair(long p, long q, Complex z, const WeierstrassEngine& eng) {
  detail::check_dilations(p, q);
  detail::check_g_poles(eng, p, q, z);
  return {ZetaCombination::g_p(p, q).eval(eng, z), ZetaCombination::g_q(p, q).eval(eng, z)};
}

inline std::pair<Complex, Complex> g_pair(long p, long q, Complex z, const ComplexLattice& l,
                                          const TruncationPolicy& t = {}) {
  return g_pair(p, q, z, WeierstrassEngine(l, t));
}

using Matrix2 = std::array<std::array<Complex, 2>, 2>;

inline Matrix2 mul(const Matrix2& a, const Matrix2& b) {
  Matrix2 c{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
  return c;
}

/// A(z) = [[1, g_p(z)], [0, p]], B(z) = [[1, g_q(z)], [0, q]].
struct CocycleMatrices {
  long p = 2;
  long q = 3;
  Matrix2 a(const WeierstrassEngine& eng, Complex z) const {
    return {{{1.0, ZetaCombination::g_p(p, q).eval(eng, z)}, {0.0, static_cast<double>(p)}}};
  }
  Matrix2 b(const WeierstrassEngine& eng, Complex z) const {
    return {{{1.0, ZetaCombination::g_q(p, q).eval(eng, z)}, {0.0, static_cast<double>(q)}}};
  }
  /// (A(z/q) B(z), B(z/p) A(z)).
  std::pair<Matrix2, Matrix2> products(const WeierstrassEngine& eng, Complex z) const {
    double dp = static_cast<double>(p), dq = static_cast<double>(q);
    return {mul(a(eng, z / dq), b(eng, z)), mul(b(eng, z / dp), a(eng, z))};
  }
};

inline double max_entry_distance(const Matrix2& x, const Matrix2& y) {
  double m = 0.0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) m = std::max(m, std::abs(x[i][j] - y[i][j]));
  return m;
}

/// max |A(z/q)B(z) - B(z/p)A(z)| over entries.
inline double consistency_residual(long p, long q, Complex z, const WeierstrassEngine& eng) {
  detail::check_dilations(p, q);
  detail::check_g_poles(eng, p, q, z);
  auto [lhs, rhs] = CocycleMatrices{p, q}.products(eng, z);
  return max_entry_distance(lhs, rhs);
}

inline double consistency_residual(long p, long q, Complex z, const ComplexLattice& l,
                                   const TruncationPolicy& t = {}) {
  return consistency_residual(p, q, z, WeierstrassEngine(l, t));
}

/// Uniform points a*omega1 + b*omega2, a, b in [0,1), kept at least the pole
/// guard away from (1/pole_scale) L. Deterministic in the seed.
inline std::vector<Complex> random_probes(const WeierstrassEngine& eng, std::size_t count, std::uint64_t seed,
                                          long pole_scale = 1) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const auto& l = eng.lattice();
  const double s = static_cast<double>(pole_scale);
  std::vector<Complex> out;
  std::size_t rejected = 0;
  while (out.size() < count) {
    Complex z = unit(rng) * l.omega1 + unit(rng) * l.omega2;
    if (eng.distance_to_lattice(s * z) / s < eng.pole_guard(pole_scale)) {
      if (++rejected > 1000 * (count + 1)) throw DomainError("could not place probes away from poles");
      continue;
    }
    out.push_back(z);
  }
  return out;
}

struct EllipticReport {
  std::string name;
  double max_residual = 0.0;
  Complex argmax_probe{0.0, 0.0};
  int argmax_period = 1;  // 1 or 2
  std::size_t samples = 0;
  double tol = 0.0;
  bool passed = false;
};

/// max over samples and both periods of |f(z + omega) - f(z)|. Samples near a
/// pole are redrawn (bounded retries).
inline EllipticReport verify_elliptic(const ZetaCombination& fn, const WeierstrassEngine& eng, std::size_t samples,
                                      std::uint64_t seed) {
  EllipticReport rep;
  rep.name = fn.name;
  rep.samples = samples;
  rep.tol = eng.policy().tol;
  const auto& l = eng.lattice();
  for (Complex z : random_probes(eng, samples, seed, fn.pole_scale)) {
    Complex f0 = fn.eval(eng, z);
    int which = 1;
    for (Complex w : {l.omega1, l.omega2}) {
      double r = std::abs(fn.eval(eng, z + w) - f0);
      if (r > rep.max_residual || !std::isfinite(r)) {
        rep.max_residual = r;
        rep.argmax_probe = z;
        rep.argmax_period = which;
      }
      ++which;
    }
  }
  rep.passed = rep.max_residual < rep.tol;
  return rep;
}

}  // namespace perioda
