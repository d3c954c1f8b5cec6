#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "perioda/weierstrass.hpp"

namespace perioda {

struct SuiteCheck {
  std::string name;
  double residual = 0.0;
  double tol = 0.0;
  bool passed = false;
};

struct SuiteOptions {
  double tol = 1e-8;
  std::size_t probes = 100;
  std::uint64_t seed = 1;
  std::vector<std::pair<long, long>> pairs{{2, 3}, {3, 5}, {2, 5}};
  double fd_step = 1e-5;
  double fd_tol = 1e-5;
  /// Compare the theta path with direct lattice sums at a few probes.
  std::size_t cross_probes = 4;
};

struct SuiteReport {
  ComplexLattice lattice;
  std::vector<SuiteCheck> checks;
  bool passed = true;
};

/// Numerical identities for zeta, wp and the quasi-periods on one lattice.
inline SuiteReport run_weierstrass_suite(const ComplexLattice& lattice, const SuiteOptions& opt,
                                         const TruncationPolicy& base = {}) {
  TruncationPolicy pol = base;
  pol.tol = opt.tol;
  pol.method = SumMethod::theta;
  WeierstrassEngine eng(lattice, pol);
  SuiteReport rep;
  rep.lattice = lattice;
  auto add = [&](std::string name, double residual, double tol) {
    bool ok = std::isfinite(residual) && residual < tol;
    rep.checks.push_back({std::move(name), residual, tol, ok});
    if (!ok) rep.passed = false;
  };
  const Complex w1 = lattice.omega1, w2 = lattice.omega2;
  const Complex e1 = eng.eta1(), e2 = eng.eta2();
  auto probes = random_probes(eng, opt.probes, opt.seed);

  double quasi = 0.0, odd = 0.0, wp_even = 0.0, wp_per = 0.0, additive = 0.0;
  for (Complex z : probes) {
    Complex zz = eng.zeta(z);
    quasi = std::max(quasi, std::abs(eng.zeta(z + w1) - zz - e1));
    quasi = std::max(quasi, std::abs(eng.zeta(z + w2) - zz - e2));
    quasi = std::max(quasi, std::abs(eng.zeta(z - w1 + 2.0 * w2) - zz - (-e1 + 2.0 * e2)));
    odd = std::max(odd, std::abs(eng.zeta(-z) + zz));
    Complex p = eng.wp(z);
    wp_even = std::max(wp_even, std::abs(eng.wp(-z) - p));
    wp_per = std::max(wp_per, std::max(std::abs(eng.wp(z + w1) - p), std::abs(eng.wp(z + w2) - p)));
  }
  add("zeta_quasi_periodicity", quasi, opt.tol);
  add("zeta_odd", odd, opt.tol);
  add("wp_even", wp_even, opt.tol);
  add("wp_periodic", wp_per, opt.tol);

  additive = std::abs(eng.eta(w1 + w2) - e1 - e2);
  additive = std::max(additive, std::abs(eng.eta(-w1) + e1));
  add("eta_additive", additive, opt.tol);
  add("legendre", std::abs(e1 * w2 - e2 * w1 - Complex(0.0, 2.0 * std::numbers::pi)), opt.tol);

  // Central difference of zeta against -wp, at probes well inside the cell.
  double fd = 0.0;
  const double far = 0.25 * lattice.min_period();
  const Complex h = opt.fd_step;
  for (Complex z : random_probes(eng, 4 * opt.probes, opt.seed + 1)) {
    if (eng.distance_to_lattice(z) < far) continue;
    Complex d = (eng.zeta(z + h) - eng.zeta(z - h)) / (2.0 * h);
    fd = std::max(fd, std::abs(d + eng.wp(z)));
  }
  add("zeta_derivative_is_minus_wp", fd, opt.fd_tol);

  for (auto [p, q] : opt.pairs) {
    std::string tag = "(" + std::to_string(p) + "," + std::to_string(q) + ")";
    auto gp = verify_elliptic(ZetaCombination::g_p(p, q), eng, opt.probes, opt.seed + 2);
    auto gq = verify_elliptic(ZetaCombination::g_q(p, q), eng, opt.probes, opt.seed + 3);
    add("g_p_elliptic" + tag, gp.max_residual, opt.tol);
    add("g_q_elliptic" + tag, gq.max_residual, opt.tol);
    double cons = 0.0, g_odd = 0.0;
    for (Complex z : random_probes(eng, opt.probes, opt.seed + 4, p * q)) {
      cons = std::max(cons, consistency_residual(p, q, z, eng));
      auto [a, b] = g_pair(p, q, z, eng);
      auto [ma, mb] = g_pair(p, q, -z, eng);
      g_odd = std::max(g_odd, std::max(std::abs(a + ma), std::abs(b + mb)));
    }
    add("consistency" + tag, cons, opt.tol);
    add("g_odd" + tag, g_odd, opt.tol);
  }

  // Independent oracle: truncated lattice sums, within their tail bound.
  double cross = 0.0;
  TruncationPolicy direct = pol;
  direct.method = SumMethod::lattice_sum;
  WeierstrassEngine slow(lattice, direct);
  for (Complex z : random_probes(eng, opt.cross_probes, opt.seed + 5)) {
    double err = std::abs(slow.zeta(z) - eng.zeta(z));
    double tb = slow.tail_bound(z) + 1e-9;
    cross = std::max(cross, err / tb);
  }
  add("theta_vs_lattice_sum", cross, 1.0);
  return rep;
}

}  // namespace perioda
