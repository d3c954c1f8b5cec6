#include <gtest/gtest.h>

#include "helpers.hpp"

using namespace perioda;
using namespace perioda::testing;

TEST(Lattice, ContainsExamples) {
  EXPECT_TRUE(Lattice::standard(2).contains(pt({"3", "-5"})));
  EXPECT_FALSE(Lattice::scaled_standard(2, 2).contains(pt({"2", "1"})));
  EXPECT_FALSE(Lattice::standard(1).contains(pta({"1/3"}, {"2"})));
  EXPECT_THROW(Lattice::standard(2).contains(pt({"1"})), InputError);
}

TEST(Lattice, ReduceExamples) {
  EXPECT_EQ(Lattice::standard(2).reduce(pt({"7/3", "-1/2"})), pt({"1/3", "1/2"}));
  EXPECT_EQ(Lattice::standard(1).reduce(pta({"1/3"}, {"2"})), pta({"1/3"}, {"2"}));
  EXPECT_EQ(lat({{2}}).reduce(pt({"5"})), pt({"1"}));
  EXPECT_THROW(Lattice::standard(1).reduce(pt({"1", "2"})), InputError);
}

TEST(Lattice, RejectsSingularBasis) {
  EXPECT_THROW(lat({{1, 2}, {2, 4}}), InputError);
  EXPECT_THROW(Lattice::from_rows({{Rational(1), Rational(0)}}), InputError);
}

TEST(Lattice, IndexIsDeterminant) {
  auto l = lat({{2, 1}, {0, 3}});
  EXPECT_EQ(l.index(), Rational(6));
  EXPECT_EQ(Lattice::standard(2).index_of(l), Integer(6));
  EXPECT_EQ(Lattice::standard(2).quotient_reps(l).size(), 6u);
}

TEST(Lattice, JoinExamples) {
  EXPECT_EQ(join(lat({{2}}), lat({{3}})), Lattice::standard(1));
  EXPECT_EQ(join(Lattice::scaled_standard(2, 4), Lattice::scaled_standard(2, 9)), Lattice::standard(2));
  auto l = lat({{2, 1}, {0, 3}});
  EXPECT_EQ(join(l, l), l);
  EXPECT_EQ(join(Lattice::scaled_standard(1, 36), Lattice::scaled_standard(1, 100)), Lattice::scaled_standard(1, 4));
  EXPECT_THROW(join(Lattice::standard(1), Lattice::standard(2)), InputError);
}

TEST(Lattice, IntersectIsMeet) {
  EXPECT_EQ(intersect(lat({{4}}), lat({{6}})), lat({{12}}));
  auto half = Lattice::scaled_standard(2, q(1, 2));
  EXPECT_EQ(intersect(half, Lattice::standard(2)), Lattice::standard(2));
}

TEST(Lattice, EqualLatticesShareNormalForm) {
  EXPECT_EQ(lat({{1, 1}, {0, 1}}), Lattice::standard(2));
  EXPECT_EQ(lat({{2, 0}, {0, 2}}), lat({{2, 2}, {0, 2}}));
}

TEST(Lattice, AdaptedBasisExamples) {
  auto z2 = Lattice::standard(2);
  auto b = adapted_basis(pt({"1", "2"}), pt({"3", "4"}), z2);
  EXPECT_EQ(b, Matrix::identity(2));
  auto b2 = adapted_basis(pt({"1", "0"}), pt({"0", "1"}), z2);
  EXPECT_TRUE(is_adapted(b2, pt({"1", "0"}), pt({"0", "1"})));
  EXPECT_EQ(Lattice(b2), z2);
  auto b3 = adapted_basis(pt({"5"}), pt({"5"}), Lattice::standard(1));
  EXPECT_EQ(b3, Matrix::identity(1));
  EXPECT_THROW(adapted_basis(pt({"0", "0"}), pt({"1", "1"}), z2), InputError);
  EXPECT_THROW(adapted_basis(pta({"1"}, {"1"}), pt({"1"}), Lattice::standard(1)), InputError);
}

TEST(LatticeProperty, ReduceIdempotentAndDifferenceInLattice) {
  Rng rng(11);
  for (int it = 0; it < 300; ++it) {
    std::size_t r = static_cast<std::size_t>(rng.uniform(1, 3));
    Lattice l = rng.lattice(r);
    Point x(r);
    for (std::size_t j = 0; j < r; ++j) x[j] = Scalar(rng.rational(12, 40), rng.coin() ? rng.rational(5, 5) : Rational(0));
    Point red = l.reduce(x);
    EXPECT_EQ(l.reduce(red), red);
    EXPECT_TRUE(l.contains(x - red));
    for (const auto& c : l.coordinates(red.rat_part())) {
      EXPECT_GE(c, 0);
      EXPECT_LT(c, 1);
    }
  }
}

TEST(LatticeProperty, JoinIsLeastUpperBound) {
  Rng rng(12);
  for (int it = 0; it < 200; ++it) {
    std::size_t r = static_cast<std::size_t>(rng.uniform(1, 3));
    Lattice a = rng.lattice(r, 6), b = rng.lattice(r, 6), c = rng.lattice(r, 2);
    Lattice j = join(a, b);
    EXPECT_TRUE(a.is_sublattice_of(j));
    EXPECT_TRUE(b.is_sublattice_of(j));
    // Any lattice containing both generators contains the join.
    Lattice upper = join(j, c);
    EXPECT_TRUE(j.is_sublattice_of(upper));
    if (a.is_sublattice_of(c) && b.is_sublattice_of(c)) {
      EXPECT_TRUE(j.is_sublattice_of(c));
    }
    for (std::size_t k = 0; k < r; ++k) {
      EXPECT_TRUE(j.contains(a.generator(k)));
      EXPECT_TRUE(j.contains(b.generator(k)));
    }
    Lattice m = intersect(a, b);
    EXPECT_TRUE(m.is_sublattice_of(a));
    EXPECT_TRUE(m.is_sublattice_of(b));
  }
}

TEST(LatticeProperty, AdaptedBasisPostcondition) {
  Rng rng(13);
  for (int it = 0; it < 1000; ++it) {
    std::size_t r = static_cast<std::size_t>(rng.uniform(1, 4));
    Lattice l = rng.lattice(r, 3);
    auto random_nonzero = [&] {
      for (;;) {
        std::vector<Rational> v;
        for (std::size_t j = 0; j < r; ++j) v.push_back(rng.coin() ? Rational(0) : rng.rational(4, 5));
        Point p = Point::rational(v);
        if (!p.is_zero()) return p;
      }
    };
    Point x = random_nonzero(), y = random_nonzero();
    Matrix b = adapted_basis(x, y, l);
    ASSERT_TRUE(is_adapted(b, x, y)) << to_display(x) << " " << to_display(y);
    // Same lattice: the change of basis is unimodular.
    Matrix u = l.basis().inverse() * b;
    EXPECT_TRUE(u.is_integral());
    Rational det = u.determinant();
    EXPECT_TRUE(det == 1 || det == -1);
  }
}

namespace {

/// Reduction straight from the definition: fractional basis coordinates.
Point reduce_by_definition(const Lattice& l, const Point& x) {
  auto c = l.basis().inverse().apply(x.rat_part());
  for (auto& v : c) v = frac(v);
  Point out = Point::rational(l.basis().apply(c));
  for (std::size_t j = 0; j < x.rank(); ++j) out[j].irr = x[j].irr;
  return out;
}

Lattice scaled_lattice(Rng& rng, std::size_t r) {
  Matrix m = rng.lattice(r, 7).basis();
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < r; ++j) m(i, j) *= make_rational(1, rng.uniform(1, 6));
  for (std::size_t i = 0; i < r; ++i) m(i, i) = make_rational(rng.uniform(1, 9), rng.uniform(1, 6));
  return Lattice(m);
}

}  // namespace

TEST(LatticeProperty, ReduceMatchesDefinition) {
  Rng rng(14);
  for (int it = 0; it < 2000; ++it) {
    std::size_t r = static_cast<std::size_t>(rng.uniform(1, 4));
    Lattice l = rng.coin() ? rng.lattice(r, 9) : scaled_lattice(rng, r);
    Point x(r);
    for (std::size_t j = 0; j < r; ++j) {
      Rational v = rng.rational(60, 500);
      // Large entries leave the word-size range.
      if (it % 5 == 0) v *= Rational(Integer("123456789012345678901234567"));
      if (it % 7 == 0) v /= Rational(Integer("98765432109876543211"));
      x[j] = Scalar(v, rng.coin() ? rng.rational(4, 4) : Rational(0));
    }
    ASSERT_EQ(l.reduce(x), reduce_by_definition(l, x)) << to_display(x);
    ASSERT_EQ(l.coordinates(x.rat_part()), l.basis().inverse().apply(x.rat_part()));
  }
}
