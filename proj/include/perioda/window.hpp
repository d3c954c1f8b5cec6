#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <numeric>
#include <optional>
#include <thread>
#include <vector>

#include "perioda/point.hpp"

namespace perioda {

/// Finite verification surface: points k/d, |k| <= bound*d, d | den_cap, in
/// reference coordinates, followed by the declared alpha probes.
struct Window {
  long bound = 1;
  long den_cap = 1;
  std::vector<Point> probes;

  /// Canonical order: exact denominator ascending, then sup-norm of the
  /// numerator vector, then lexicographic with +k before -k. The probes come
  /// last in declaration order.
  std::vector<Point> points(std::size_t rank) const {
    if (bound < 1 || den_cap < 1) throw InputError("window bound and denominator cap must be positive");
    std::vector<Point> out;
    for (long d = 1; d <= den_cap; ++d) {
      if (den_cap % d != 0) continue;
      const long lim = bound * d;
      std::vector<std::vector<long>> nums;
      std::vector<long> k(rank, -lim);
      for (;;) {
        long g = d;
        for (long v : k) g = std::gcd(g, std::labs(v));
        if (g == 1) nums.push_back(k);
        std::size_t i = 0;
        while (i < rank && ++k[i] > lim) k[i++] = -lim;
        if (i == rank) break;
      }
      auto key = [](const std::vector<long>& v) {
        long sup = 0;
        for (long x : v) sup = std::max(sup, std::labs(x));
        std::vector<long> t{sup};
        for (long x : v) t.push_back(x >= 0 ? 2 * x : -2 * x + 1);
        return t;
      };
      std::sort(nums.begin(), nums.end(), [&](const auto& a, const auto& b) { return key(a) < key(b); });
      for (const auto& n : nums) {
        std::vector<Rational> rat;
        for (long v : n) rat.push_back(Rational(v, d));
        for (auto& q : rat) q.canonicalize();
        out.push_back(Point::rational(rat));
      }
    }
    for (const auto& p : probes) {
      if (p.rank() != rank) throw InputError("probe rank mismatch");
      out.push_back(p);
    }
    return out;
  }
};

struct WindowComparison {
  bool equal = true;
  std::optional<Point> witness;
  Rational left_value = 0;
  Rational right_value = 0;
  std::size_t points_checked = 0;
};

/// Number of worker threads from PERIODA_THREADS (default 1).
inline unsigned thread_cap() {
  if (const char* env = std::getenv("PERIODA_THREADS")) {
    long v = std::atol(env);
    if (v >= 1) return static_cast<unsigned>(v);
  }
  return 1;
}

/// Compares two evaluables on every window point. The witness is the first
/// differing point in window order, independent of the thread count.
template <typename F1, typename F2>
WindowComparison equal_on_window(const F1& a, const F2& b, const Window& w, unsigned threads = 1) {
  if (a.rank() != b.rank()) throw InputError("rank mismatch between functions");
  auto pts = w.points(a.rank());
  std::vector<std::size_t> first_bad(std::max(threads, 1u), pts.size());
  auto worker = [&](unsigned t, unsigned n) {
    for (std::size_t i = t; i < pts.size(); i += n)
      if (a.eval(pts[i]) != b.eval(pts[i])) {
        first_bad[t] = i;
        return;
      }
  };
  if (threads <= 1) {
    worker(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker, t, threads);
    for (auto& th : pool) th.join();
  }
  WindowComparison out;
  out.points_checked = pts.size();
  std::size_t bad = *std::min_element(first_bad.begin(), first_bad.end());
  if (bad < pts.size()) {
    out.equal = false;
    out.witness = pts[bad];
    out.left_value = a.eval(pts[bad]);
    out.right_value = b.eval(pts[bad]);
  }
  return out;
}

}  // namespace perioda
