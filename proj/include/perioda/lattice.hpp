#pragma once

#include <cstddef>
#include <limits>
#include <numeric>
#include <vector>

#include "perioda/matrix.hpp"
#include "perioda/point.hpp"

namespace perioda {

/// Full-rank lattice in Q^r. Columns of the basis generate it. The basis is
/// kept in column Hermite normal form so that equal lattices compare equal
/// and share one fundamental domain.
class Lattice {
 public:
  Lattice() = default;

  explicit Lattice(const Matrix& generators) {
    if (generators.rows() == 0) throw InputError("lattice of rank 0");
    Integer den = generators.common_denominator();
    Matrix h = column_hnf(generators.scaled(Rational(den)));
    basis_ = h.scaled(Rational(1) / Rational(den));
    inverse_ = basis_.inverse();
    basis_int_ = IntForm(basis_);
    inverse_int_ = IntForm(inverse_);
    standard_ = basis_ == Matrix::identity(rank());
  }

  /// Reference lattice Z^r.
  static Lattice standard(std::size_t rank) { return Lattice(Matrix::identity(rank)); }

  /// k * Z^r.
  static Lattice scaled_standard(std::size_t rank, const Rational& k) {
    return Lattice(Matrix::identity(rank).scaled(k));
  }

  static Lattice from_rows(const std::vector<std::vector<Rational>>& rows) {
    Matrix m(rows);
    if (m.rows() != m.cols()) throw InputError("lattice basis must be square");
    if (m.determinant() == 0) throw InputError("lattice basis is singular");
    return Lattice(m);
  }

  std::size_t rank() const { return basis_.rows(); }
  const Matrix& basis() const { return basis_; }

  Point generator(std::size_t j) const { return Point::rational(basis_.column(j)); }

  /// Covolume relative to Z^r (the index when the lattice is integral).
  Rational index() const {
    Rational d = basis_.determinant();
    return d < 0 ? Rational(-d) : d;
  }

  /// Coordinates of a rational vector in this basis.
  std::vector<Rational> coordinates(const std::vector<Rational>& v) const {
    if (standard_) return v;
    Integer d;
    auto n = inverse_int_.apply(v, d);
    std::vector<Rational> out(n.size());
    for (std::size_t i = 0; i < n.size(); ++i) out[i] = make_rational(n[i], d);
    return out;
  }

  /// basis * c for coordinates c.
  std::vector<Rational> from_coordinates(const std::vector<Rational>& c) const {
    if (standard_) return c;
    Integer d;
    auto n = basis_int_.apply(c, d);
    std::vector<Rational> out(n.size());
    for (std::size_t i = 0; i < n.size(); ++i) out[i] = make_rational(n[i], d);
    return out;
  }

  /// Integer numerators of the coordinates of v over a common denominator d.
  std::vector<Integer> coordinate_numerators(const std::vector<Rational>& v, Integer& d) const {
    return inverse_int_.apply(v, d);
  }

  /// basis * (n / d) for integer numerators n.
  std::vector<Rational> from_numerators(const std::vector<Integer>& n, const Integer& d) const {
    const std::size_t r = rank();
    std::vector<Rational> out(r);
    Integer d2 = basis_int_.den * d;
    for (std::size_t i = 0; i < r; ++i) {
      Integer acc = 0;
      for (std::size_t j = 0; j < r; ++j)
        if (n[j] != 0 && basis_int_.at(i, j) != 0) acc += basis_int_.at(i, j) * n[j];
      out[i] = make_rational(acc, d2);
    }
    return out;
  }

  bool is_standard() const { return standard_; }

 private:
  using Wide = __int128;

  static bool mul(Wide a, Wide b, Wide& out) { return !__builtin_mul_overflow(a, b, &out); }
  static bool add(Wide a, Wide b, Wide& out) { return !__builtin_add_overflow(a, b, &out); }
  static bool fits_word(Wide v) {
    return v >= std::numeric_limits<long>::min() && v <= std::numeric_limits<long>::max();
  }

 public:
  /// Word-size coordinate numerators of a rational vector over a common
  /// denominator; false when the values do not fit.
  bool small_coordinates(const Point& x, std::vector<long>& num, long& den) const {
    const std::size_t r = rank();
    if (r > kMaxSmallRank || !inverse_int_.small) return false;
    long xn[kMaxSmallRank], xd[kMaxSmallRank];
    long vd = 1;
    for (std::size_t i = 0; i < r; ++i) {
      if (!detail::small_value(x[i].rat.get_num_mpz_t(), xn[i]) ||
          !detail::small_value(x[i].rat.get_den_mpz_t(), xd[i]))
        return false;
      long g = std::gcd(vd, xd[i]);
      Wide l = static_cast<Wide>(vd / g) * xd[i];
      if (l > (1L << 40)) return false;
      vd = static_cast<long>(l);
    }
    Wide d = static_cast<Wide>(inverse_int_.sden) * vd;
    if (!fits_word(d)) return false;
    num.resize(r);
    for (std::size_t i = 0; i < r; ++i) {
      Wide acc = 0, t, vn;
      for (std::size_t k = 0; k < r; ++k) {
        if (!mul(xn[k], vd / xd[k], vn)) return false;
        if (!mul(inverse_int_.sm[i * r + k], vn, t) || !add(acc, t, acc)) return false;
      }
      if (!fits_word(acc)) return false;
      num[i] = static_cast<long>(acc);
    }
    den = static_cast<long>(d);
    return true;
  }

 private:
  /// reduce() in 128-bit arithmetic; false on overflow, leaving out unspecified.
  bool reduce_small(const Point& x, Point& out) const {
    const std::size_t r = rank();
    long num[kMaxSmallRank], den[kMaxSmallRank];
    if (r > kMaxSmallRank) return false;
    long vd = 1;
    for (std::size_t i = 0; i < r; ++i) {
      if (!detail::small_value(x[i].rat.get_num_mpz_t(), num[i]) ||
          !detail::small_value(x[i].rat.get_den_mpz_t(), den[i]))
        return false;
      long g = std::gcd(vd, den[i]);
      Wide l = static_cast<Wide>(vd / g) * den[i];
      if (l > (1L << 40)) return false;
      vd = static_cast<long>(l);
    }
    Wide vn[kMaxSmallRank], c[kMaxSmallRank];
    for (std::size_t k = 0; k < r; ++k)
      if (!mul(num[k], vd / den[k], vn[k])) return false;
    Wide d = static_cast<Wide>(inverse_int_.sden) * vd;
    for (std::size_t i = 0; i < r; ++i) {
      Wide acc = 0, t;
      for (std::size_t k = 0; k < r; ++k)
        if (!mul(inverse_int_.sm[i * r + k], vn[k], t) || !add(acc, t, acc)) return false;
      acc %= d;
      if (acc < 0) acc += d;
      c[i] = acc;
    }
    if (!small_from_numerators(c, d, out)) return false;
    for (std::size_t i = 0; i < r; ++i) out[i].irr = x[i].irr;
    return true;
  }

 public:
  /// Writes basis * (c / d) into the rational parts of out; false on overflow.
  template <typename Int>
  bool small_from_numerators(const Int* c, Wide d, Point& out) const {
    const std::size_t r = rank();
    if (!basis_int_.small) return false;
    Wide d2;
    if (!mul(basis_int_.sden, d, d2) || !fits_word(d2)) return false;
    for (std::size_t i = 0; i < r; ++i) {
      Wide acc = 0, t;
      for (std::size_t j = 0; j < r; ++j)
        if (!mul(basis_int_.sm[i * r + j], static_cast<Wide>(c[j]), t) || !add(acc, t, acc)) return false;
      if (!fits_word(acc)) return false;
      long n = static_cast<long>(acc), q = static_cast<long>(d2);
      long g = std::gcd(n, q);
      mpq_set_si(out[i].rat.get_mpq_t(), n / g, static_cast<unsigned long>(q / g));
    }
    return true;
  }

 private:

 public:

  bool contains(const Point& x) const {
    check_rank(x);
    if (!x.is_rational()) return false;
    for (const auto& c : coordinates(x.rat_part()))
      if (!is_integer(c)) return false;
    return true;
  }

  /// Representative of x mod L with basis coordinates of the rational part in
  /// [0,1); irrational parts are untouched.
  Point reduce(const Point& x) const {
    check_rank(x);
    const std::size_t r = rank();
    Point out(r);
    if (basis_int_.small && inverse_int_.small && reduce_small(x, out)) return out;
    std::vector<Rational> rat(r);
    for (std::size_t i = 0; i < r; ++i) rat[i] = x[i].rat;
    if (standard_) {
      for (std::size_t i = 0; i < r; ++i) {
        Rational& v = rat[i];
        mpz_fdiv_r(v.get_num_mpz_t(), v.get_num_mpz_t(), v.get_den_mpz_t());
        out[i] = Scalar(std::move(v), x[i].irr);
      }
      return out;
    }
    Integer d;
    auto c = inverse_int_.apply(rat, d);
    for (auto& v : c) mpz_fdiv_r(v.get_mpz_t(), v.get_mpz_t(), d.get_mpz_t());
    auto reduced = from_numerators(c, d);
    for (std::size_t i = 0; i < r; ++i) out[i] = Scalar(std::move(reduced[i]), x[i].irr);
    return out;
  }

  Lattice scaled(const Rational& k) const {
    if (k == 0) throw InputError("scaling a lattice by zero");
    return Lattice(basis_.scaled(k));
  }

  bool is_sublattice_of(const Lattice& other) const {
    if (other.rank() != rank()) throw InputError("rank mismatch between lattices");
    return (other.inverse_ * basis_).is_integral();
  }

  /// [this : sub] for a sublattice.
  Integer index_of(const Lattice& sub) const {
    if (!sub.is_sublattice_of(*this)) throw InputError("not a sublattice");
    Rational ratio = sub.index() / index();
    return ratio.get_num();
  }

  /// Representatives of this / sub (sub a sublattice), the 0 class first.
  std::vector<Point> quotient_reps(const Lattice& sub) const {
    if (!sub.is_sublattice_of(*this)) throw InputError("not a sublattice");
    Matrix h = column_hnf(inverse_ * sub.basis_);
    std::vector<long> bound(rank());
    for (std::size_t i = 0; i < rank(); ++i) bound[i] = h(i, i).get_num().get_si();
    std::vector<Point> out;
    std::vector<long> k(rank(), 0);
    for (;;) {
      std::vector<Rational> kv(k.begin(), k.end());
      out.push_back(Point::rational(basis_.apply(kv)));
      std::size_t i = 0;
      while (i < rank() && ++k[i] == bound[i]) k[i++] = 0;
      if (i == rank()) break;
    }
    return out;
  }

  friend bool operator==(const Lattice& a, const Lattice& b) { return a.basis_ == b.basis_; }

  void check_rank(const Point& x) const {
    if (x.rank() != rank()) throw InputError("rank mismatch between lattice and point");
  }

 private:
  /// A rational matrix as an integer matrix over one denominator.
  struct IntForm {
    std::vector<Integer> m;
    Integer den = 1;
    std::size_t n = 0;

    IntForm() = default;
    explicit IntForm(const Matrix& a) : den(a.common_denominator()), n(a.rows()) {
      m.reserve(n * n);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
          Rational v = a(i, j) * den;
          m.push_back(v.get_num());
        }
      small = mpz_sizeinbase(den.get_mpz_t(), 2) <= 31;
      for (const auto& v : m) small = small && mpz_sizeinbase(v.get_mpz_t(), 2) <= 31;
      if (small) {
        sden = den.get_si();
        for (const auto& v : m) sm.push_back(v.get_si());
      }
    }
    const Integer& at(std::size_t i, std::size_t j) const { return m[i * n + j]; }

    /// Word copies, set when every entry fits in 31 bits.
    std::vector<long> sm;
    long sden = 1;
    bool small = false;

    /// Numerators of (m / den) v over the common denominator written to d.
    std::vector<Integer> apply(const std::vector<Rational>& v, Integer& d) const {
      if (v.size() != n) throw InputError("matrix/vector shape mismatch");
      Integer vd = 1;
      for (const auto& x : v)
        if (x.get_den() != 1) vd = lcm(vd, x.get_den());
      std::vector<Integer> vn(n);
      for (std::size_t k = 0; k < n; ++k) {
        if (v[k].get_den() == vd) vn[k] = v[k].get_num();
        else vn[k] = v[k].get_num() * (vd / v[k].get_den());
      }
      std::vector<Integer> out(n);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k)
          if (vn[k] != 0 && at(i, k) != 0) out[i] += at(i, k) * vn[k];
      d = den * vd;
      return out;
    }
  };

  static constexpr std::size_t kMaxSmallRank = 8;

  Matrix basis_;
  Matrix inverse_;
  IntForm basis_int_;
  IntForm inverse_int_;
  bool standard_ = false;
};

inline bool contains(const Lattice& lattice, const Point& x) { return lattice.contains(x); }
inline Point reduce(const Lattice& lattice, const Point& x) { return lattice.reduce(x); }

/// Smallest lattice containing both.
inline Lattice join(const Lattice& a, const Lattice& b) {
  if (a.rank() != b.rank()) throw InputError("rank mismatch between lattices");
  std::size_t r = a.rank();
  Matrix gens(r, 2 * r);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < r; ++j) {
      gens(i, j) = a.basis()(i, j);
      gens(i, r + j) = b.basis()(i, j);
    }
  return Lattice(gens);
}

/// Dual lattice {y : <x,y> in Z for all x in L}.
inline Lattice dual(const Lattice& a) { return Lattice(a.basis().inverse().transpose()); }

/// Largest lattice contained in both.
inline Lattice intersect(const Lattice& a, const Lattice& b) { return dual(join(dual(a), dual(b))); }

/// Checks that in the given basis every coordinate of x and y is nonzero.
inline bool is_adapted(const Matrix& basis, const Point& x, const Point& y) {
  Matrix inv = basis.inverse();
  for (const auto& c : inv.apply(x.rat_part()))
    if (c == 0) return false;
  for (const auto& c : inv.apply(y.rat_part()))
    if (c == 0) return false;
  return true;
}

/// A basis of L in which all coordinates of x and of y are nonzero. It
/// differs from L.basis() by a unimodular integer transform.
inline Matrix adapted_basis(const Point& x, const Point& y, const Lattice& lattice) {
  lattice.check_rank(x);
  lattice.check_rank(y);
  if (!x.is_rational() || !y.is_rational()) throw InputError("adapted_basis needs points in Q*L");
  if (x.is_zero() || y.is_zero()) throw InputError("adapted_basis needs nonzero points");
  const std::size_t r = lattice.rank();
  // Work in coordinates: apply integer row operations V to (cx, cy) until
  // both have no zero entry. The new basis is B * V^{-1}.
  auto cx = lattice.coordinates(x.rat_part());
  auto cy = lattice.coordinates(y.rat_part());
  Matrix v = Matrix::identity(r);
  auto add_row = [&](std::size_t dst, long k, std::size_t src) {
    cx[dst] += k * cx[src];
    cy[dst] += k * cy[src];
    for (std::size_t c = 0; c < r; ++c) v(dst, c) += k * v(src, c);
  };
  // Smallest |k| (trying k = 1, -1, 2, -2, ...) keeping row dst nonzero in
  // both vectors after adding k * row src.
  auto pick = [&](std::size_t dst, std::size_t src) {
    for (long m = 1;; ++m)
      for (long k : {m, -m})
        if (cx[dst] + k * cx[src] != 0 && cy[dst] + k * cy[src] != 0) return k;
  };
  std::size_t ix = 0, iy = 0;
  while (cx[ix] == 0) ++ix;
  while (cy[iy] == 0) ++iy;
  std::size_t anchor = ix;
  if (cy[ix] == 0) add_row(ix, pick(ix, iy), iy);
  for (std::size_t i = 0; i < r; ++i) {
    if (i == anchor || (cx[i] != 0 && cy[i] != 0)) continue;
    add_row(i, pick(i, anchor), anchor);
  }
  return lattice.basis() * v.inverse();
}

}  // namespace perioda
