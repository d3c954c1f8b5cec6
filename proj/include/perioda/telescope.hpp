#pragma once

#include <limits>
#include <memory>
#include <optional>
#include <vector>

#include "perioda/quasi_periodic.hpp"

namespace perioda {

/// Lazy x -> sum_{i>=1} g(x / m^i) for a g vanishing on the whole lattice.
///
/// For x != 0 only finitely many terms are nonzero. eval() stops at a bound
/// derived from p-adic valuations: g(x/m^i) != 0 needs x/m^i in some support
/// coset s + L, which for a prime p | m forces, in every basis coordinate j
/// with x_j != 0, v_p(x_j) - i*v_p(m) >= min(0, v_p(s_j)).
class TelescopeFn {
 public:
  TelescopeFn(QuasiPeriodicFn g, Integer m)
      : TelescopeFn(std::make_shared<const QuasiPeriodicFn>(std::move(g)), std::move(m)) {}

  /// Refers to g without copying it; g must outlive the result.
  static TelescopeFn borrowing(const QuasiPeriodicFn& g, Integer m) {
    return TelescopeFn(std::shared_ptr<const QuasiPeriodicFn>(std::shared_ptr<void>(), &g), std::move(m));
  }

  const QuasiPeriodicFn& g() const { return *g_; }
  const Integer& m() const { return m_; }
  std::size_t rank() const { return g_->rank(); }

  /// Largest i for which g(x / m^i) can be nonzero (0 if none can).
  long i_stop(const Point& x) const {
    g_->lattice().check_rank(x);
    if (x.is_zero()) return 0;
    long best = std::numeric_limits<long>::max();
    if (x.is_rational()) {
      auto c = g_->lattice().coordinates(x.rat_part());
      for (std::size_t j = 0; j < c.size(); ++j) {
        if (c[j] == 0) continue;
        best = std::min(best, floor_div(valuation(c[j], prime_) - rat_floor_[j], prime_exp_));
      }
    } else {
      for (std::size_t j = 0; j < x.rank(); ++j) {
        if (x[j].irr == 0) continue;
        if (!irr_floor_[j]) return 0;
        best = std::min(best, floor_div(valuation(x[j].irr, prime_) - *irr_floor_[j], prime_exp_));
      }
    }
    return std::max(best, 0L);
  }

  Rational eval(const Point& x) const {
    if (x.is_zero()) return 0;
    long stop = i_stop(x);
    Rational sum = 0;
    Point y = x;
    const Rational inv_m(1, m_);
    for (long i = 1; i <= stop; ++i) {
      y = inv_m * y;
      sum += g_->eval(y);
    }
    if (g_->eval(inv_m * y) != 0)
      throw TheoremViolation("telescope term beyond the valuation bound is nonzero");
    return sum;
  }
  Rational operator()(const Point& x) const { return eval(x); }

  /// Plain partial sum over i = 1..terms, used to cross-check eval().
  Rational eval_naive(const Point& x, long terms) const {
    if (x.is_zero()) return 0;
    Rational sum = 0;
    Point y = x;
    const Rational inv_m(1, m_);
    for (long i = 1; i <= terms; ++i) {
      y = inv_m * y;
      sum += g_->eval(y);
    }
    return sum;
  }

 private:
  TelescopeFn(std::shared_ptr<const QuasiPeriodicFn> g, Integer m) : g_(std::move(g)), m_(std::move(m)) {
    if (m_ < 2) throw InputError("telescope needs m >= 2");
    if (g_->zero_value() != 0 || g_->zero_coset_value() != 0)
      throw InputError("telescope diverges: g is nonzero on the lattice");
    prime_ = prime_factors(m_).front();
    prime_exp_ = valuation(m_, prime_);
    const std::size_t r = g_->rank();
    rat_floor_.assign(r, 0);
    irr_floor_.assign(r, std::nullopt);
    std::vector<long> snum;
    long sden;
    const long small_prime = prime_.fits_slong_p() ? prime_.get_si() : 0;
    for (const auto& [s, v] : g_->entries()) {
      if (small_prime > 0 && s.is_rational() && g_->lattice().small_coordinates(s, snum, sden)) {
        const long vd = word_valuation(sden, small_prime);
        if (vd == 0) continue;
        for (std::size_t j = 0; j < r; ++j)
          if (snum[j] != 0) rat_floor_[j] = std::min(rat_floor_[j], word_valuation(snum[j], small_prime) - vd);
      } else if (s.is_rational()) {
        Integer d;
        auto c = g_->lattice().coordinate_numerators(s.rat_part(), d);
        const long vd = valuation(d, prime_);
        for (std::size_t j = 0; j < r; ++j)
          if (c[j] != 0 && vd > 0) rat_floor_[j] = std::min(rat_floor_[j], valuation(c[j], prime_) - vd);
      } else {
        for (std::size_t j = 0; j < r; ++j) {
          if (s[j].irr == 0) continue;
          long vj = valuation(s[j].irr, prime_);
          if (!irr_floor_[j] || vj < *irr_floor_[j]) irr_floor_[j] = vj;
        }
      }
    }
  }

  static long word_valuation(long x, long p) {
    long v = 0;
    while (x % p == 0) {
      x /= p;
      ++v;
    }
    return v;
  }

  static long floor_div(long a, long b) {
    long q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
  }

  std::shared_ptr<const QuasiPeriodicFn> g_;
  Integer m_;
  Integer prime_;
  long prime_exp_ = 1;
  std::vector<long> rat_floor_;
  std::vector<std::optional<long>> irr_floor_;
};

inline TelescopeFn telescope(const QuasiPeriodicFn& g, const Integer& m) { return TelescopeFn(g, m); }
inline TelescopeFn telescope(const QuasiPeriodicFn& g, long m) { return TelescopeFn(g, Integer(m)); }

/// x -> f(m x) - f(x) for any evaluable f, evaluated on demand.
template <typename F>
class DilationDifference {
 public:
  DilationDifference(F f, Integer m) : f_(std::move(f)), m_(std::move(m)) {
    if (m_ < 2) throw InputError("dilation factor must be >= 2");
  }
  std::size_t rank() const { return f_.rank(); }
  Rational eval(const Point& x) const { return f_.eval(Rational(m_) * x) - f_.eval(x); }
  Rational operator()(const Point& x) const { return eval(x); }

 private:
  F f_;
  Integer m_;
};

inline DilationDifference<TelescopeFn> dilate_diff(const TelescopeFn& f, const Integer& m) { return {f, m}; }
inline DilationDifference<TelescopeFn> dilate_diff(const TelescopeFn& f, long m) { return {f, Integer(m)}; }

/// x -> f(x + shift).
template <typename F>
class Translated {
 public:
  Translated(F f, Point shift) : f_(std::move(f)), shift_(std::move(shift)) {}
  std::size_t rank() const { return f_.rank(); }
  Rational eval(const Point& x) const { return f_.eval(x + shift_); }
  Rational operator()(const Point& x) const { return eval(x); }

 private:
  F f_;
  Point shift_;
};

}  // namespace perioda
