#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "sftlab/sftlab.hpp"

using namespace sftlab;

TEST(ClassifyPair, Examples) {
  const auto sys = SftSystem::full_shift(2);
  const Point x = Point::periodic(sys, {0});
  EXPECT_TRUE(classify_pair(x, x, 32).has("identical"));

  // Differ on every n <= 0: asymptotic forward, backward distance stuck at 1.
  const Point y = Point::make(sys, {1}, {1}, {0}, 0);
  const auto v = classify_pair(x, y, 32);
  EXPECT_TRUE(v.has("asymptotic_T"));
  EXPECT_FALSE(v.has("proximal_Tinv"));
  EXPECT_DOUBLE_EQ(v.backward.liminf_estimate, 1.0);
  EXPECT_DOUBLE_EQ(v.forward.max_distance_tail, std::ldexp(1.0, -32));

  // Left tails differing once per 16 symbols: far apart infinitely often,
  // but every window of 16 backward shifts comes within 2^-8.
  Word sparse(16, 0);
  sparse[0] = 1;
  const Point z = Point::make(sys, sparse, {}, {0}, 0);
  const Point w = Point::make(sys, Word(16, 0), {}, {0}, 0);
  const auto u = classify_pair(z, w, 32);
  EXPECT_TRUE(u.has("asymptotic_T"));
  EXPECT_TRUE(u.has("proximal_Tinv"));
  EXPECT_TRUE(u.has("li_yorke_Tinv"));
  EXPECT_DOUBLE_EQ(u.backward.limsup_estimate, 1.0);
  EXPECT_LE(u.backward.liminf_estimate, std::ldexp(1.0, -8));
  // Period 2 differences never get below 1/2.
  const auto alt = classify_pair(Point::make(sys, {1, 0}, {}, {0}, 0), Point::make(sys, {0}, {}, {0}, 0), 32);
  EXPECT_FALSE(alt.has("proximal_Tinv"));
  EXPECT_DOUBLE_EQ(alt.backward.liminf_estimate, 0.5);

  // Different right tails: no certificate, forward tail distance 1.
  const auto f = classify_pair(x, Point::periodic(sys, {1}), 16);
  EXPECT_FALSE(f.has("asymptotic_T"));
  EXPECT_DOUBLE_EQ(f.forward.max_distance_tail, 1.0);
  EXPECT_THROW(classify_pair(x, x, 0), InvalidArgument);
}

// The closed-form forward tail against a direct sup over a long range.
TEST(ClassifyPair, ForwardTailMatchesDirectSup) {
  RandomStream rng(77);
  const auto sys = SftSystem::full_shift(2);
  for (int t = 0; t < 100; ++t) {
    Word a(12), b(12);
    for (std::size_t i = 0; i < 12; ++i) {
      a[i] = rng.uniform() < 0.5;
      b[i] = rng.uniform() < 0.5;
    }
    const Word rp = rng.uniform() < 0.5 ? Word{0} : Word{0, 1};
    const Point x = Point::make(sys, {0}, a, {0, 1}, -6);
    const Point y = Point::make(sys, {1}, b, rp, -6);
    const Coord h = 1 + static_cast<Coord>(rng.uniform() * 10);
    const auto v = classify_pair(x, y, h);
    double direct = 0.0;
    for (Coord n = h; n <= h + 60; ++n) direct = std::max(direct, shifted_distance(x, y, n));
    ASSERT_DOUBLE_EQ(v.forward.max_distance_tail, direct) << t;
  }
}

TEST(StableClasses, CountsAgainstEnumeration) {
  for (int d = 1; d <= 10; ++d)
    EXPECT_EQ(stable_class_count(Word{0}, d, bernoulli_measure()), std::uint64_t{1} << d);
  EXPECT_EQ(stable_class_count(Word{1}, 12, period_two()), 1u);
  const auto gm = golden_mean_parry();
  for (int d = 1; d <= 12; ++d)
    for (Symbol f : {0, 1}) {
      std::uint64_t brute = 0;
      for (const Word& w : gm.system().allowed_words(d)) {
        Word joined = w;
        joined.push_back(f);
        brute += gm.system().is_allowed(joined);
      }
      EXPECT_EQ(stable_class_count(Word{f}, d, gm), brute) << d;
    }
  EXPECT_THROW(stable_class_count(Word{}, 3, gm), InvalidArgument);
}

TEST(Delta, SupportOfLambda) {
  const auto b = bernoulli_measure();
  const auto rb = delta_sup(PinskerModel::for_measure(b), b);
  EXPECT_EQ(rb.delta, 1.0);
  ASSERT_TRUE(rb.witness);
  EXPECT_NEAR(rb.witness_mass, 0.25, 1e-15);
  const auto p = period_two();
  EXPECT_EQ(delta_sup(PinskerModel::for_measure(p), p).delta, 0.0);
  const auto c = cyclic_four();
  EXPECT_EQ(delta_sup(PinskerModel::for_measure(c), c).delta, 1.0);
}

TEST(SeparatedPair, FoundWhenEntropyPositive) {
  for (const auto& m : {bernoulli_measure(), golden_mean_parry()}) {
    const auto q = CoordinatePartition::fine(m.system(), 0, 0);
    const auto sp = find_separated_pair(q, m);
    ASSERT_TRUE(sp);
    EXPECT_NE(sp->label_x, sp->label_y);
    EXPECT_NE(sp->x.at(0), sp->y.at(0));
    for (Coord n = sp->agree_from; n < sp->agree_from + 40; ++n) EXPECT_EQ(sp->x.at(n), sp->y.at(n));
  }
  const auto m = bernoulli_measure();
  EXPECT_FALSE(find_separated_pair(CoordinatePartition::trivial(m.system()), m));
  EXPECT_FALSE(find_separated_pair(CoordinatePartition::fine(period_two().system(), 0, 0), period_two()));
  EXPECT_THROW(find_separated_pair(CoordinatePartition::fine(m.system(), 0, 1), m), InvalidArgument);
}

TEST(Birkhoff, TimeAveragesNearLambda) {
  const RandomStream root(1234);
  for (const auto& m : {bernoulli_measure(), two_state_lazy(), cyclic_four()}) {
    const auto pm = PinskerModel::for_measure(m);
    const Cylinder a{0, {0}}, b{0, {1}};
    const auto r = birkhoff_check(pm, m, a, b, root.child("b"), 50000);
    EXPECT_TRUE(r.within()) << r.time_average << " vs " << r.lambda_value;
    const auto again = birkhoff_check(pm, m, a, b, root.child("b"), 50000);
    EXPECT_EQ(r.time_average, again.time_average);
  }
}

TEST(Lifts, DistinctAndProjecting) {
  for (const auto& [name, m] : all_presets()) {
    const auto [rt, rp] = m.support_system().right_tail_from(0);
    Word prefix{0};
    prefix.insert(prefix.end(), rt.begin(), rt.end());
    const OneSidedPoint f{prefix, rp};
    for (int d = 1; d <= 4; ++d) {
      const auto lifts = backward_lifts(f, d, m);
      EXPECT_EQ(lifts.size(), stable_class_count(Word{0}, d, m)) << name;
      std::set<Word> pasts;
      for (const auto& x : lifts) {
        EXPECT_TRUE(projects_to(x, f)) << name;
        Word past;
        for (Coord k = -d; k < 0; ++k) past.push_back(x.at(k));
        pasts.insert(past);
      }
      EXPECT_EQ(pasts.size(), lifts.size()) << name;
    }
  }
}
