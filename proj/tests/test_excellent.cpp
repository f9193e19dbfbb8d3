#include <gtest/gtest.h>

#include <cmath>

#include "sftlab/sftlab.hpp"

using namespace sftlab;

TEST(Schedule, GeometricTailSums) {
  const auto s = SpacingSchedule::geometric(6);
  EXPECT_DOUBLE_EQ(s.epsilon(1), 0.5);
  EXPECT_DOUBLE_EQ(s.epsilon(6), 1.0 / 64);
  for (int n = 1; n <= 6; ++n) EXPECT_NEAR(s.tail_sum(n), std::ldexp(1.0, -(n - 1)), 1e-15);
  EXPECT_THROW(s.epsilon(7), InvalidArgument);
  EXPECT_THROW(SpacingSchedule::geometric(3, 1.5), InvalidArgument);
}

TEST(Dk, VanishesForIndependentAndDeterministicChains) {
  for (const auto& m : {bernoulli_measure(), period_two()}) {
    const auto& sys = m.system();
    for (int k = 0; k <= 5; ++k) {
      const auto d = dk(CoordinatePartition::fine(sys, 0, 0), CoordinatePartition::fine(sys, 0, 1), k, m);
      EXPECT_LE(d.upper, 1e-12);
      EXPECT_GE(d.lower, -1e-9);
    }
  }
}

TEST(Dk, DecaysWithinSpectralEnvelopeAndMatchesUnshiftedForm) {
  const auto m = two_state_lazy();
  const auto& sys = m.system();
  const auto i00 = Labeling::from_function(sys, 2, [](const Word& w) { return w[0] == 0 && w[1] == 0 ? 1 : 0; });
  const auto prev = CoordinatePartition::from_labeling(sys, i00, 0);
  const auto q = CoordinatePartition::fine(sys, 0, 1);
  const double d0 = dk(prev, q, 0, m).upper;
  EXPECT_GT(d0, 0.1);
  double last = d0;
  for (int k = 1; k <= 8; ++k) {
    const auto d = dk(prev, q, k, m);
    const auto u = dk_unshifted(prev, q, k, m);
    EXPECT_LE(d.upper, d0 * std::pow(0.7, k) + 1e-12) << k;
    EXPECT_LE(d.upper, last + 1e-12) << k;
    EXPECT_NEAR(d.mid(), u.mid(), 1e-9) << k;
    last = d.upper;
  }
  EXPECT_LT(dk(prev, q, 8, m).upper, d0);
}

TEST(ChooseSpacings, FineSequencesGiveZeroSpacings) {
  for (const auto& m : {bernoulli_measure(), period_two()}) {
    const auto rep = choose_spacings(fine_sequence(m.system(), 3), SpacingSchedule::geometric(3), m);
    for (int k : rep.spacings) EXPECT_EQ(k, 0);
    ASSERT_EQ(rep.levels.size(), 3u);
    EXPECT_FALSE(rep.levels[0].d.has_value());
  }
}

TEST(ChooseSpacings, CoarseSequenceOnLazyChain) {
  const auto m = two_state_lazy();
  const auto qs = block_indicator_sequence(m.system(), 5, Word{0, 0});
  for (const auto& q : qs) EXPECT_FALSE(q.is_fine());
  const auto rep = choose_spacings(qs, SpacingSchedule::geometric(5, 0.5, 64), m);
  for (std::size_t i = 1; i < rep.levels.size(); ++i) {
    ASSERT_TRUE(rep.levels[i].d);
    EXPECT_LT(rep.levels[i].d->upper, rep.levels[i].epsilon_n);
    EXPECT_GE(rep.spacings[i], rep.spacings[i - 1]);
    EXPECT_EQ(rep.levels[i].epsilon_prev.value(), rep.levels[i - 1].epsilon_n);
  }
  for (const auto& lv : rep.levels) {
    EXPECT_NEAR(lv.defect_bound, std::ldexp(1.0, -(lv.n - 1)), 1e-12);
    EXPECT_LE(lv.defect_direct.lower, lv.defect_bound);
  }
  // P_n = P_{n-1} v T^{-k_n} Q_n.
  const auto& p2 = rep.partitions[1];
  EXPECT_TRUE(p2.refines(rep.partitions[0]));
}

TEST(ChooseSpacings, Errors) {
  const auto m = two_state_lazy();
  const auto qs = block_indicator_sequence(m.system(), 3, Word{0, 0});
  // With k_max = 0 and a tiny epsilon nothing is admissible.
  SpacingSchedule s;
  s.epsilons = {1e-3, 1e-30, 1e-30};
  s.k_max = 0;
  try {
    choose_spacings(qs, s, m);
    FAIL() << "expected SearchExhausted";
  } catch (const SearchExhausted& e) {
    EXPECT_EQ(e.level(), 2);
    EXPECT_EQ(e.k_max(), 0);
  }
  auto bad = fine_sequence(m.system(), 2);
  std::swap(bad[0], bad[1]);
  EXPECT_THROW(choose_spacings(bad, SpacingSchedule::geometric(2), m), InvalidArgument);
}
