#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "perioda/divisor.hpp"

namespace perioda {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  long uniform(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(gen_); }
  bool coin() { return uniform(0, 1) == 1; }
  std::mt19937_64& engine() { return gen_; }

  Rational rational(long max_den, long max_abs_num) {
    long d = uniform(1, max_den);
    return make_rational(uniform(-max_abs_num, max_abs_num), d);
  }

  /// Random integer lattice with small HNF-like basis (lower triangular).
  Lattice lattice(std::size_t rank, long max_diag = 3) {
    Matrix m(rank, rank);
    for (std::size_t i = 0; i < rank; ++i) {
      m(i, i) = uniform(1, max_diag);
      for (std::size_t j = 0; j < i; ++j) m(i, j) = uniform(-2, 2);
    }
    return Lattice(m);
  }

  /// Point of Q*L with basis coordinates k/den.
  Point lattice_point_fraction(const Lattice& l, long den) {
    std::vector<Rational> c;
    for (std::size_t i = 0; i < l.rank(); ++i) c.push_back(make_rational(uniform(0, den - 1), den));
    return Point::rational(l.basis().apply(c));
  }

  /// Random f with at most max_cosets nonzero cosets (denominators <= max_den),
  /// optionally with off-M cosets and a 0-coset entry.
  QuasiPeriodicFn function(const Lattice& l, std::size_t max_cosets, long max_den, bool off_m = false,
                           bool zero_coset = false, bool integer_values = false) {
    QuasiPeriodicFn f(l);
    std::size_t n = static_cast<std::size_t>(uniform(1, static_cast<long>(max_cosets)));
    for (std::size_t i = 0; i < n; ++i) {
      Point p = lattice_point_fraction(l, uniform(1, max_den));
      if (off_m && coin()) {
        for (std::size_t j = 0; j < l.rank(); ++j) p[j].irr = make_rational(uniform(-6, 6), uniform(1, 6));
        if (p.is_rational()) p[0].irr = 1;
      }
      if (!zero_coset && l.contains(p)) continue;
      Rational v = integer_values ? Rational(uniform(-3, 3)) : rational(4, 5);
      f.add(p, v);
    }
    return f;
  }

 private:
  std::mt19937_64 gen_;
};

/// Random principal divisor for lattice_f: degree 0 and Abel-Jacobi sum in
/// lattice_f, supported on points with coordinates of denominator <= max_den.
inline Divisor random_principal(Rng& rng, const Lattice& lattice_f, std::size_t max_cosets, long max_den) {
  QuasiPeriodicFn f(lattice_f);
  std::size_t n = static_cast<std::size_t>(rng.uniform(1, static_cast<long>(max_cosets)));
  for (std::size_t i = 0; i < n; ++i) {
    Point p = rng.lattice_point_fraction(lattice_f, rng.uniform(1, max_den));
    long v = rng.uniform(-3, 3);
    f.add(p, Rational(v));
  }
  // Balance the degree on the 0-coset, then move the Abel-Jacobi sum into L.
  Rational deg = 0;
  Point aj(2);
  for (const auto& [k, v] : f.entries()) {
    deg += v;
    aj += v * k;
  }
  f.add(Point(2), -deg);
  Point fix = lattice_f.reduce(-aj);
  f.add(fix, Rational(1));
  f.add(Point(2), Rational(-1));
  f.set_zero_value(f.zero_coset_value());
  return Divisor(f);
}

}  // namespace perioda
