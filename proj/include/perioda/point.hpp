#pragma once

#include <compare>
#include <cstddef>
#include <ostream>
#include <string>
#include <vector>

#include "perioda/rational.hpp"

namespace perioda {

/// An element a + b*alpha of Q + Q*alpha, alpha a formal irrational.
struct Scalar {
  Rational rat;
  Rational irr;

  Scalar() = default;
  Scalar(Rational r, Rational i = 0) : rat(std::move(r)), irr(std::move(i)) {}
  Scalar(long r) : rat(r), irr(0) {}

  bool is_rational() const { return irr == 0; }

  friend Scalar operator+(const Scalar& a, const Scalar& b) { return {a.rat + b.rat, a.irr + b.irr}; }
  friend Scalar operator-(const Scalar& a, const Scalar& b) { return {a.rat - b.rat, a.irr - b.irr}; }
  friend Scalar operator*(const Rational& k, const Scalar& a) { return {k * a.rat, k * a.irr}; }
  Scalar operator-() const { return {-rat, -irr}; }

  friend bool operator==(const Scalar& a, const Scalar& b) { return a.rat == b.rat && a.irr == b.irr; }
  friend std::strong_ordering operator<=>(const Scalar& a, const Scalar& b) {
    if (int c = compare(a.rat, b.rat); c != 0) return c < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
    if (int c = compare(a.irr, b.irr); c != 0) return c < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }
};

inline std::string to_display(const Scalar& s) {
  if (s.irr == 0) return to_display(s.rat);
  std::string out = s.rat == 0 ? "" : to_display(s.rat) + (s.irr > 0 ? "+" : "");
  return out + to_display(s.irr) + "a";
}

/// A point of Q^r + alpha*Q^r. Rank is the coordinate count.
class Point {
 public:
  Point() = default;
  explicit Point(std::size_t rank) : coords_(rank) {}
  explicit Point(std::vector<Scalar> coords) : coords_(std::move(coords)) {}
  Point(std::initializer_list<Scalar> coords) : coords_(coords) {}

  static Point rational(const std::vector<Rational>& rat) {
    Point p(rat.size());
    for (std::size_t i = 0; i < rat.size(); ++i) p.coords_[i].rat = rat[i];
    return p;
  }
  static Point from_parts(const std::vector<Rational>& rat, const std::vector<Rational>& irr) {
    if (rat.size() != irr.size()) throw InputError("rat/irr length mismatch");
    Point p(rat.size());
    for (std::size_t i = 0; i < rat.size(); ++i) p.coords_[i] = Scalar(rat[i], irr[i]);
    return p;
  }

  std::size_t rank() const { return coords_.size(); }
  const Scalar& operator[](std::size_t i) const { return coords_[i]; }
  Scalar& operator[](std::size_t i) { return coords_[i]; }
  const std::vector<Scalar>& coords() const { return coords_; }

  /// Point lies in M = Q-span of the lattice.
  bool is_rational() const {
    for (const auto& c : coords_)
      if (!c.is_rational()) return false;
    return true;
  }
  bool is_zero() const {
    for (const auto& c : coords_)
      if (c.rat != 0 || c.irr != 0) return false;
    return true;
  }

  std::vector<Rational> rat_part() const {
    std::vector<Rational> out;
    out.reserve(rank());
    for (const auto& c : coords_) out.push_back(c.rat);
    return out;
  }
  std::vector<Rational> irr_part() const {
    std::vector<Rational> out;
    out.reserve(rank());
    for (const auto& c : coords_) out.push_back(c.irr);
    return out;
  }

  Point& operator+=(const Point& o) {
    check_rank(o);
    for (std::size_t i = 0; i < rank(); ++i) coords_[i] = coords_[i] + o.coords_[i];
    return *this;
  }
  Point& operator-=(const Point& o) {
    check_rank(o);
    for (std::size_t i = 0; i < rank(); ++i) coords_[i] = coords_[i] - o.coords_[i];
    return *this;
  }
  friend Point operator+(Point a, const Point& b) { return a += b; }
  friend Point operator-(Point a, const Point& b) { return a -= b; }
  friend Point operator*(const Rational& k, const Point& a) {
    Point out(a.rank());
    for (std::size_t i = 0; i < a.rank(); ++i) out.coords_[i] = k * a.coords_[i];
    return out;
  }
  Point operator-() const { return Rational(-1) * *this; }

  friend bool operator==(const Point& a, const Point& b) = default;
  friend auto operator<=>(const Point& a, const Point& b) = default;

  void check_rank(const Point& o) const {
    if (o.rank() != rank()) throw InputError("rank mismatch between points");
  }

 private:
  std::vector<Scalar> coords_;
};

inline std::string to_display(const Point& p) {
  std::string out = "(";
  for (std::size_t i = 0; i < p.rank(); ++i) {
    if (i) out += ", ";
    out += to_display(p[i]);
  }
  return out + ")";
}

inline std::ostream& operator<<(std::ostream& os, const Point& p) { return os << to_display(p); }

}  // namespace perioda
