#include <gtest/gtest.h>

#include <cmath>

#include "sftlab/sftlab.hpp"

using namespace sftlab;

namespace {

Point pt(const SftSystem& sys, const char* lp, const char* core, const char* rp, Coord begin) {
  return Point::make(sys, parse_word(lp), parse_word(core), parse_word(rp), begin);
}

}  // namespace

TEST(SftSystem, PresetsAndAllowedWords) {
  EXPECT_EQ(SftSystem::full_shift(2).allowed_words(3).size(), 8u);
  // Fibonacci counts for the golden mean shift.
  const auto gm = SftSystem::golden_mean();
  EXPECT_EQ(gm.allowed_words(1).size(), 2u);
  EXPECT_EQ(gm.allowed_words(2).size(), 3u);
  EXPECT_EQ(gm.allowed_words(5).size(), 13u);
  EXPECT_FALSE(gm.is_allowed(parse_word("0110")));
  EXPECT_EQ(SftSystem::period_two().allowed_words(6).size(), 2u);
}

TEST(SftSystem, RejectsBadAdjacency) {
  EXPECT_THROW(SftSystem(2, {{1, 1}}), InvalidArgument);
  EXPECT_THROW(SftSystem(2, {{1, 2}, {1, 1}}), InvalidArgument);
  EXPECT_THROW(SftSystem(2, {{1, 0}, {0, 0}}), InvalidArgument);
}

TEST(SftSystem, TailsAreAllowed) {
  for (const auto& sys : {SftSystem::golden_mean(), SftSystem::period_two(), SftSystem::cyclic_four()}) {
    for (Symbol s = 0; s < sys.alphabet_size(); ++s) {
      auto [lp, lt] = sys.left_tail_into(s);
      Word w = lp;
      w.insert(w.end(), lp.begin(), lp.end());
      w.insert(w.end(), lt.begin(), lt.end());
      w.push_back(s);
      EXPECT_TRUE(sys.is_allowed(w));
      auto [rt, rp] = sys.right_tail_from(s);
      Word v{s};
      v.insert(v.end(), rt.begin(), rt.end());
      v.insert(v.end(), rp.begin(), rp.end());
      v.insert(v.end(), rp.begin(), rp.end());
      EXPECT_TRUE(sys.is_allowed(v));
    }
  }
}

TEST(Point, MetricExamples) {
  const auto sys = SftSystem::full_shift(2);
  const Point x = Point::periodic(sys, {0});
  EXPECT_EQ(distance(x, x), 0.0);
  const Point y = pt(sys, "0", "1", "0", 3);
  EXPECT_DOUBLE_EQ(distance(x, y), 0.125);
  EXPECT_DOUBLE_EQ(shifted_distance(x, y, 3), 1.0);
  const Point z = pt(sys, "0", "1", "0", 0);
  EXPECT_DOUBLE_EQ(distance(x, z), 1.0);
}

TEST(Point, ShiftRelation) {
  RandomStream rng(11);
  const auto sys = SftSystem::full_shift(2);
  for (int t = 0; t < 50; ++t) {
    Word core(8);
    for (auto& s : core) s = rng.uniform() < 0.5 ? 0 : 1;
    const Point x = Point::make(sys, {0, 1}, core, {1}, -4);
    const Coord n = static_cast<Coord>(rng.uniform() * 10) - 5;
    const Point sx = shift(x, n);
    for (Coord k = -20; k <= 20; ++k) ASSERT_EQ(sx.at(k), x.at(k + n));
  }
}

TEST(Point, RejectsForbiddenJunction) {
  const auto gm = SftSystem::golden_mean();
  EXPECT_THROW(pt(gm, "0", "11", "0", 0), InvalidArgument);
  EXPECT_THROW(pt(gm, "1", "", "0", 0), InvalidArgument);  // 11 in the left tail
}

TEST(Point, AgreementOfTails) {
  const auto sys = SftSystem::full_shift(2);
  const Point x = pt(sys, "1", "0110", "0", -2);
  const Point y = pt(sys, "0", "0100", "0", -2);
  const auto f = forward_agreement(x, y);
  EXPECT_TRUE(f.tails_equal);
  ASSERT_TRUE(f.extreme_difference);
  EXPECT_EQ(*f.extreme_difference, 0);
  const auto b = backward_agreement(x, y);
  EXPECT_FALSE(b.tails_equal);
}

TEST(Certificate, Examples) {
  const auto sys = SftSystem::full_shift(2);
  const Point x = Point::periodic(sys, {0});
  EXPECT_TRUE(asymptotic_certificate(x, x, 100).identical);
  const Point y = pt(sys, "1", "1", "0", 0);  // differs from x at every n <= 0
  const auto c = asymptotic_certificate(x, y, 100);
  ASSERT_TRUE(c.agree_from);
  EXPECT_EQ(*c.agree_from, 1);
  for (Coord n = 1; n <= 40; ++n) EXPECT_EQ(shifted_distance(x, y, n), std::ldexp(1.0, -static_cast<int>(n)));
  EXPECT_FALSE(asymptotic_certificate(x, Point::periodic(sys, {1}), 100).agree_from);
}

TEST(Certificate, SoundOnRandomPairs) {
  RandomStream rng(2024);
  const auto sys = SftSystem::full_shift(2);
  for (int t = 0; t < 200; ++t) {
    Word a(10), b(10);
    for (std::size_t i = 0; i < 10; ++i) {
      a[i] = rng.uniform() < 0.5;
      b[i] = rng.uniform() < 0.5;
    }
    const Point x = Point::make(sys, {0}, a, {1, 0}, -5);
    const Point y = Point::make(sys, {1}, b, {1, 0}, -5);
    const auto c = asymptotic_certificate(x, y, 1000);
    if (c.identical) continue;
    ASSERT_TRUE(c.agree_from);
    for (Coord n = *c.agree_from; n <= *c.agree_from + 32; ++n)
      ASSERT_LE(shifted_distance(x, y, n), c.bound_at(n));
  }
}

TEST(NaturalExtension, LiftProjects) {
  const auto gm = SftSystem::golden_mean();
  const OneSidedPoint f{{1}, {0}};
  const Point x = natural_extension_lift(gm, f, parse_word("00"));
  EXPECT_TRUE(projects_to(x, f));
  EXPECT_EQ(x.at(-1), 0);
  EXPECT_EQ(x.at(-2), 0);
  EXPECT_THROW(natural_extension_lift(gm, f, parse_word("1")), InvalidArgument);
}
