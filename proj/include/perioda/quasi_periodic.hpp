#pragma once

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "perioda/lattice.hpp"

namespace perioda {

/// A Lambda-periodic function off 0 with finitely many nonzero cosets, plus an
/// independent value at the single point 0.
///
/// Keys are reduced coset representatives; stored values are nonzero. The
/// 0-coset entry governs Lambda \ {0}; zero_value governs 0 itself.
class QuasiPeriodicFn {
 public:
  using Entries = std::map<Point, Rational>;

  QuasiPeriodicFn() = default;
  explicit QuasiPeriodicFn(Lattice lattice, Rational zero_value = 0)
      : lattice_(std::move(lattice)), zero_value_(std::move(zero_value)) {}

  QuasiPeriodicFn(Lattice lattice, const std::vector<std::pair<Point, Rational>>& entries,
                  Rational zero_value = 0)
      : QuasiPeriodicFn(std::move(lattice), std::move(zero_value)) {
    for (const auto& [p, v] : entries) add(p, v);
  }

  const Lattice& lattice() const { return lattice_; }
  std::size_t rank() const { return lattice_.rank(); }
  const Entries& entries() const { return entries_; }
  const Rational& zero_value() const { return zero_value_; }
  std::size_t size() const { return entries_.size(); }

  /// Adds v on the whole coset of x (excluding the point 0 when x is in Lambda).
  void add(const Point& x, const Rational& v) { add_reduced(lattice_.reduce(x), v); }

  /// As add(), for a key already reduced modulo the lattice.
  void add_reduced(const Point& key, const Rational& v) { add_reduced(Point(key), v); }
  void add_reduced(Point&& key, const Rational& v) {
    if (v == 0) return;
    auto [it, inserted] = entries_.try_emplace(std::move(key), v);
    if (!inserted) {
      it->second += v;
      if (it->second == 0) entries_.erase(it);
    }
  }

  void set_zero_value(Rational v) { zero_value_ = std::move(v); }
  QuasiPeriodicFn with_zero_value(Rational v) const {
    QuasiPeriodicFn out = *this;
    out.zero_value_ = std::move(v);
    return out;
  }

  /// Value on the coset of key; for the 0-coset this is the value on Lambda \ {0}.
  Rational coset_value(const Point& x) const {
    auto it = entries_.find(lattice_.reduce(x));
    return it == entries_.end() ? Rational(0) : it->second;
  }

  Rational zero_coset_value() const { return coset_value(Point(rank())); }

  Rational eval(const Point& x) const {
    if (x.is_zero()) return zero_value_;
    return coset_value(x);
  }
  Rational operator()(const Point& x) const { return eval(x); }

  bool is_zero() const { return entries_.empty() && zero_value_ == 0; }

  bool is_integer_valued() const {
    if (!is_integer(zero_value_)) return false;
    for (const auto& [k, v] : entries_)
      if (!is_integer(v)) return false;
    return true;
  }

  QuasiPeriodicFn operator-() const {
    QuasiPeriodicFn out(lattice_, -zero_value_);
    for (const auto& [k, v] : entries_) out.entries_.emplace(k, -v);
    return out;
  }

  friend QuasiPeriodicFn operator+(QuasiPeriodicFn a, const QuasiPeriodicFn& b) {
    if (!(a.lattice_ == b.lattice_)) throw InputError("adding functions over different lattices");
    for (const auto& [k, v] : b.entries_) a.add_reduced(k, v);
    a.zero_value_ += b.zero_value_;
    return a;
  }
  friend QuasiPeriodicFn operator-(const QuasiPeriodicFn& a, const QuasiPeriodicFn& b) { return a + (-b); }

  friend bool operator==(const QuasiPeriodicFn& a, const QuasiPeriodicFn& b) {
    return a.lattice_ == b.lattice_ && a.entries_ == b.entries_ && a.zero_value_ == b.zero_value_;
  }

 private:
  Lattice lattice_;
  Entries entries_;
  Rational zero_value_ = 0;
};

/// x -> f(m x) - f(x) in closed form over the same lattice. The preimage of a
/// coset s + L under x -> m x is the union of the m^r cosets (s + t)/m + L,
/// t running over L / mL.
inline QuasiPeriodicFn dilate_diff(const QuasiPeriodicFn& f, const Integer& m) {
  if (m < 2) throw InputError("dilation factor must be >= 2");
  const Lattice& lat = f.lattice();
  const std::size_t r = f.rank();
  const Rational inv_m(1, m);
  const long mm = m.get_si();
  QuasiPeriodicFn out(lat, 0);
  std::vector<long> k(r);
  std::vector<Integer> num(r);
  std::vector<long> snum;
  std::vector<long> wnum(r);
  std::vector<Point> keys;
  long sden;
  for (const auto& [s, v] : f.entries()) {
    // Basis coordinates a_i / den in [0,1); the preimage coordinates are
    // (a_i + k_i den) / (m den), already in [0,1).
    if (mm < (1L << 20) && lat.small_coordinates(s, snum, sden)) {
      Point key(r);
      for (std::size_t i = 0; i < r; ++i) key[i].irr = s[i].irr * inv_m;
      std::fill(k.begin(), k.end(), 0);
      bool ok = true;
      keys.clear();
      for (;;) {
        for (std::size_t i = 0; i < r; ++i) wnum[i] = snum[i] + k[i] * sden;
        if (!lat.small_from_numerators(wnum.data(), static_cast<__int128>(sden) * mm, key)) {
          ok = false;
          break;
        }
        keys.push_back(key);
        std::size_t i = 0;
        while (i < r && ++k[i] == mm) k[i++] = 0;
        if (i == r) break;
      }
      if (ok) {
        for (auto& key_i : keys) out.add_reduced(std::move(key_i), v);
        out.add_reduced(s, -v);
        continue;
      }
    }
    Integer den;
    auto base = lat.coordinate_numerators(s.rat_part(), den);
    const Integer md = den * m;
    Point key(r);
    for (std::size_t i = 0; i < r; ++i) key[i].irr = s[i].irr * inv_m;
    std::fill(k.begin(), k.end(), 0);
    for (;;) {
      for (std::size_t i = 0; i < r; ++i) num[i] = base[i] + k[i] * den;
      if (lat.is_standard()) {
        for (std::size_t i = 0; i < r; ++i) key[i].rat = make_rational(num[i], md);
      } else {
        auto rat = lat.from_numerators(num, md);
        for (std::size_t i = 0; i < r; ++i) key[i].rat = std::move(rat[i]);
      }
      out.add_reduced(key, v);
      std::size_t i = 0;
      while (i < r && ++k[i] == mm) k[i++] = 0;
      if (i == r) break;
    }
    out.add_reduced(s, -v);
  }
  return out;
}

inline QuasiPeriodicFn dilate_diff(const QuasiPeriodicFn& f, long m) { return dilate_diff(f, Integer(m)); }

/// Re-expresses f over a sublattice of its lattice; the function is unchanged.
inline QuasiPeriodicFn refine(const QuasiPeriodicFn& f, const Lattice& sub) {
  if (sub == f.lattice()) return f;
  auto reps = f.lattice().quotient_reps(sub);
  QuasiPeriodicFn out(sub, f.zero_value());
  for (const auto& [s, v] : f.entries())
    for (const auto& t : reps) out.add(s + t, v);
  return out;
}

/// f over L if f is L-periodic off 0, otherwise nullopt.
inline std::optional<QuasiPeriodicFn> rebase(const QuasiPeriodicFn& f, const Lattice& target) {
  if (target == f.lattice()) return f;
  Lattice common = intersect(f.lattice(), target);
  QuasiPeriodicFn fine = refine(f, common);
  Integer per_class = target.index_of(common);
  std::map<Point, std::pair<Rational, Integer>> classes;
  for (const auto& [k, v] : fine.entries()) {
    auto [it, inserted] = classes.try_emplace(target.reduce(k), v, Integer(1));
    if (!inserted) {
      if (it->second.first != v) return std::nullopt;
      it->second.second += 1;
    }
  }
  QuasiPeriodicFn out(target, f.zero_value());
  for (const auto& [k, vc] : classes) {
    if (vc.second != per_class) return std::nullopt;
    out.add_reduced(k, vc.first);
  }
  return out;
}

struct CosetComparison {
  bool equal = true;
  /// First coset (over the common lattice) where the functions differ; the
  /// point 0 itself when only the values at 0 differ.
  std::optional<Point> witness;
  Rational left_value = 0;
  Rational right_value = 0;
};

/// Exact comparison coset by coset, refining to the intersection lattice when
/// the lattices differ.
inline CosetComparison equal_on_cosets(const QuasiPeriodicFn& a, const QuasiPeriodicFn& b) {
  if (a.rank() != b.rank()) throw InputError("rank mismatch between functions");
  if (!(a.lattice() == b.lattice())) {
    Lattice common = intersect(a.lattice(), b.lattice());
    return equal_on_cosets(refine(a, common), refine(b, common));
  }
  CosetComparison out;
  auto ia = a.entries().begin();
  auto ib = b.entries().begin();
  while (ia != a.entries().end() || ib != b.entries().end()) {
    if (ib == b.entries().end() || (ia != a.entries().end() && ia->first < ib->first)) {
      return {false, ia->first, ia->second, 0};
    }
    if (ia == a.entries().end() || ib->first < ia->first) {
      return {false, ib->first, 0, ib->second};
    }
    if (ia->second != ib->second) return {false, ia->first, ia->second, ib->second};
    ++ia;
    ++ib;
  }
  if (a.zero_value() != b.zero_value()) return {false, Point(a.rank()), a.zero_value(), b.zero_value()};
  return out;
}

}  // namespace perioda
