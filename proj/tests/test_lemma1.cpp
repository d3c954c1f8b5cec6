#include <gtest/gtest.h>

#include "helpers.hpp"
#include "perioda/lemma1.hpp"

using namespace perioda;

TEST(SimS, WorkedInstances) {
  EXPECT_TRUE(sim_s(12, 32, {5}, 10));
  EXPECT_TRUE(sim_s(15, 65, {5}, 10));
  EXPECT_FALSE(sim_s(15, 35, {5}, 10));
  EXPECT_TRUE(sim_s(-7, -7, {2, 3}, 4));
  EXPECT_TRUE(sim_s(0, 0, {2}, 3));
  EXPECT_FALSE(sim_s(0, 3, {2}, 3));
  EXPECT_THROW(sim_s(1, 1, {2}, 0), InputError);
}

TEST(SimS, SignIsRetained) {
  // -3 and 3 have equal valuations; prime-to-S parts differ by 6.
  EXPECT_FALSE(sim_s(-3, 3, {2}, 4));
  EXPECT_TRUE(sim_s(-3, 3, {2}, 6));
}

TEST(Lemma1Walk, Examples) {
  auto w = lemma1_walk(1, 7, 6, {2}, {3});
  EXPECT_EQ(w.z, 25);
  EXPECT_EQ(w.p_part, 2);
  EXPECT_EQ(w.q_part, 3);
  EXPECT_EQ(w.s, 2);
  EXPECT_EQ(w.t, 1);
  EXPECT_TRUE(w.x_sim_z);
  EXPECT_TRUE(w.z_sim_y);

  auto v = lemma1_walk(2, 14, 12, {2}, {3});
  EXPECT_EQ(v.z, 50);
  EXPECT_EQ(v.p_part, 4);
  EXPECT_EQ(v.q_part, 3);
  EXPECT_EQ(v.s, 1);
  EXPECT_EQ(v.t, 1);

  auto same = lemma1_walk(9, 9, 4, {2}, {3});
  EXPECT_EQ(same.z, 9);
  EXPECT_EQ(same.s, 0);
  EXPECT_EQ(same.t, 0);
}

TEST(Lemma1Walk, RejectsBadInput) {
  EXPECT_THROW(lemma1_walk(1, 2, 6, {2}, {3}), InputError);
  EXPECT_THROW(lemma1_walk(0, 6, 6, {2}, {3}), InputError);
  EXPECT_THROW(lemma1_walk(1, 7, 6, {2}, {2}), InputError);
  EXPECT_THROW(lemma1_walk(1, 7, 6, {4}, {3}), InputError);
  EXPECT_THROW(lemma1_walk(1, 7, 6, {}, {3}), InputError);
}

TEST(Lemma1WalkProperty, RelationsHoldOnRandomPairs) {
  perioda::Rng rng(31);
  const std::vector<std::pair<PrimeSet, PrimeSet>> sets = {{{2}, {3}}, {{5}, {2}}, {{2, 7}, {3, 5}}, {{3}, {11}}};
  for (int it = 0; it < 2000; ++it) {
    const auto& [s, t] = sets[static_cast<std::size_t>(rng.uniform(0, 3))];
    long n = rng.uniform(1, 40);
    long x = rng.uniform(-5000, 5000);
    if (x == 0) continue;
    long y = x + n * rng.uniform(-200, 200);
    if (y == 0) continue;
    auto w = lemma1_walk(x, y, n, s, t);
    ASSERT_TRUE(w.x_sim_z && w.z_sim_y) << x << " " << y << " " << n;
    ASSERT_EQ(w.s * w.p_part - w.t * w.q_part, w.k);
  }
}

TEST(Closure, EqualsResidueClasses) {
  for (auto [n, s, t] : {std::tuple{10L, PrimeSet{5}, PrimeSet{2}}, std::tuple{6L, PrimeSet{2}, PrimeSet{3}},
                         std::tuple{12L, PrimeSet{2}, PrimeSet{3}}}) {
    auto res = equivalence_closure_bruteforce(500, n, s, t);
    EXPECT_TRUE(res.contained_in_residues);
    EXPECT_TRUE(res.equals_residues);
    EXPECT_EQ(res.classes.size(), static_cast<std::size_t>(n));
  }
}

TEST(Closure, PairsAreCongruent) {
  auto res = equivalence_closure_bruteforce(50, 10, {5}, {2});
  for (const auto& cls : res.classes)
    for (long v : cls) EXPECT_EQ(((v - cls.front()) % 10 + 10) % 10, 0);
}

TEST(Closure, OtherPrimeSetsStayInsideResidues) {
  auto res = equivalence_closure_bruteforce(60, 6, {2}, {5});
  EXPECT_TRUE(res.contained_in_residues);
  // Independent oracle: direct pairwise check on a small range.
  auto brute = equivalence_closure_bruteforce(60, 6, {2}, {3});
  EXPECT_TRUE(brute.equals_residues);
  for (long x = -60; x <= 60; ++x)
    for (long y = -60; y <= 60; ++y) {
      if (x == 0 || y == 0) continue;
      if (sim_s(x, y, {2}, 6) || sim_s(x, y, {5}, 6)) {
        EXPECT_EQ(((x - y) % 6 + 6) % 6, 0);
      }
    }
  EXPECT_THROW(equivalence_closure_bruteforce(10, 6, {2}, {2}), InputError);
}
