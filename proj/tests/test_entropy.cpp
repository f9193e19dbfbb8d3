#include <gtest/gtest.h>

#include <cmath>

#include "oracle.hpp"
#include "sftlab/sftlab.hpp"

using namespace sftlab;

namespace {

LabelingPtr sum_labeling(const SftSystem& sys, int width) {
  return Labeling::from_function(sys, width, [](const Word& w) {
    int s = 0;
    for (Symbol x : w) s += x;
    return s;
  });
}

MarkovMeasure random_chain(RandomStream& rng, int n) {
  for (;;) {
    Matrix p = Matrix::Zero(n, n);
    for (int a = 0; a < n; ++a) {
      for (int b = 0; b < n; ++b)
        if (rng.uniform() > 0.3) p(a, b) = 0.1 + rng.uniform();
      if (p.row(a).sum() == 0.0) p(a, a) = 1.0;
      p.row(a) /= p.row(a).sum();
    }
    if (detail::is_irreducible(p)) return MarkovMeasure::on_support(p);
  }
}

}  // namespace

TEST(Partition, JoinShiftRefine) {
  const auto sys = SftSystem::full_shift(2);
  const auto a = CoordinatePartition::fine(sys, 0, 0);
  const auto b = CoordinatePartition::fine(sys, 1, 1);
  const auto ab = a.join(b);
  EXPECT_EQ(ab.window_begin(), 0);
  EXPECT_EQ(ab.window_end(), 1);
  EXPECT_TRUE(ab.is_fine());
  EXPECT_TRUE(ab.refines(a));
  EXPECT_FALSE(a.refines(ab));
  EXPECT_EQ(a.shifted(3).window_begin(), 3);
  const auto s = CoordinatePartition::from_labeling(sys, sum_labeling(sys, 2), 0);
  EXPECT_EQ(s.num_labels(), 3);
  EXPECT_FALSE(s.is_fine());
  EXPECT_TRUE(CoordinatePartition::fine(sys, 0, 1).refines(s));
  EXPECT_EQ(CoordinatePartition::trivial(sys).num_labels(), 1);
}

TEST(Partition, LabelsMustCoverAllowedWords) {
  const auto sys = SftSystem::full_shift(2);
  std::map<Word, int> partial{{parse_word("0"), 0}};
  EXPECT_THROW(CoordinatePartition::from_labels(sys, 0, 0, partial), InvalidArgument);
  // Forbidden words need no label.
  const auto gm = SftSystem::golden_mean();
  std::map<Word, int> lab{{parse_word("00"), 0}, {parse_word("01"), 1}, {parse_word("10"), 1}};
  EXPECT_NO_THROW(CoordinatePartition::from_labels(gm, 0, 1, lab));
}

TEST(Entropy, StaticEntropyAgainstEnumeration) {
  const auto m = two_state_lazy();
  const auto p = CoordinatePartition::fine(m.system(), 0, 0);
  EXPECT_NEAR(entropy(p, m), 0.6365141682948128, 1e-12);
}

// Fine targets given finite coordinate sets: exact, checked against brute
// force on spans up to 8.
TEST(Entropy, FiniteConditioningMatchesEnumeration) {
  RandomStream rng(31337);
  for (int t = 0; t < 60; ++t) {
    RandomStream r = rng.child(static_cast<std::uint64_t>(t));
    const MarkovMeasure m = t % 3 == 0 ? all_presets()[static_cast<std::size_t>(t / 3 % 5)].measure : random_chain(r, 3);
    const Coord a = static_cast<Coord>(r.uniform() * 3);
    const Coord w = 1 + static_cast<Coord>(r.uniform() * 2);
    const auto p = CoordinatePartition::fine(m.system(), a, a + w - 1);
    std::vector<Coord> given;
    for (Coord c = 0; c < 8; ++c)
      if ((c < a || c > a + w - 1) && r.uniform() < 0.35) given.push_back(c);
    const EntropyBracket b = cond_entropy(p, CoordinateSet::points(given), m);
    std::vector<Coord> target;
    for (Coord c = a; c < a + w; ++c) target.push_back(c);
    const double o = oracle::cond_entropy(m, 0, 7, oracle::symbols_at(target, 0), oracle::symbols_at(given, 0));
    ASSERT_TRUE(b.exact);
    ASSERT_NEAR(b.lower, o, 1e-10) << "case " << t;
  }
}

// Coarse target and coarse given families on a finite window.
TEST(Entropy, CoarseFamiliesMatchEnumeration) {
  for (const auto& [name, m] : all_presets()) {
    const auto& sys = m.system();
    const auto lab = sum_labeling(sys, 2);
    const auto q = CoordinatePartition::from_labeling(sys, lab, 0);
    const Sigma given = Sigma::orbit(q, CoordinateSet::interval(1, 4)) | Sigma::coordinates(CoordinateSet::points({6}));
    const EntropyBracket b = conditional_entropy(Sigma::of(q), given, m);
    std::vector<oracle::Feature> fs;
    for (Coord s = 1; s <= 4; ++s) fs.push_back(oracle::label_at(q, s, 0));
    fs.push_back(oracle::symbols_at({6}, 0));
    const double o = oracle::cond_entropy(m, 0, 6, oracle::label_at(q, 0, 0), oracle::concat(fs));
    EXPECT_NEAR(b.lower, o, 1e-10) << name;
    EXPECT_NEAR(b.upper, o, 1e-10) << name;
  }
}

// A coarse past is infinite: the bracket must sit between the finite
// truncations H(Y0|Y1..n, X_{n+1}) <= h <= H(Y0|Y1..n) for every n.
TEST(Entropy, CoarseProcessEntropyBracketsTruncations) {
  const auto m = two_state_lazy();
  const auto& sys = m.system();
  const auto q = CoordinatePartition::from_labeling(sys, sum_labeling(sys, 2), 0);
  const EntropyBracket b = process_entropy(q, m, 12);
  for (int n = 1; n <= 8; ++n) {
    std::vector<oracle::Feature> ys;
    for (Coord s = 1; s <= n; ++s) ys.push_back(oracle::label_at(q, s, 0));
    const double upper = oracle::cond_entropy(m, 0, n + 1, oracle::label_at(q, 0, 0), oracle::concat(ys));
    ys.push_back(oracle::symbols_at({n + 1}, 0));
    const double lower = oracle::cond_entropy(m, 0, n + 1, oracle::label_at(q, 0, 0), oracle::concat(ys));
    EXPECT_LE(b.lower, upper + 1e-12) << n;
    EXPECT_GE(b.upper, lower - 1e-12) << n;
  }
  EXPECT_LT(b.width(), 1e-6);
  const EntropyBracket shallow = process_entropy(q, m, 4);
  EXPECT_GE(shallow.width(), b.width());
  EXPECT_LE(shallow.lower, b.lower + 1e-12);
  EXPECT_GE(shallow.upper, b.upper - 1e-12);
}

TEST(Entropy, FineProcessEntropyIsEntropyRate) {
  for (const auto& [name, m] : all_presets())
    for (Coord w = 1; w <= 3; ++w) {
      const auto b = process_entropy(CoordinatePartition::fine(m.system(), -1, w - 2), m);
      EXPECT_TRUE(b.exact) << name;
      EXPECT_NEAR(b.lower, entropy_rate(m), 1e-12) << name;
    }
}

TEST(Entropy, KnownConditionalValue) {
  // H(x0 | x-1, x1) on the lazy chain.
  const auto m = two_state_lazy();
  const auto b = cond_entropy(CoordinatePartition::fine(m.system(), 0, 0), CoordinateSet::points({-1, 1}), m);
  EXPECT_NEAR(b.lower, 0.2494429456, 1e-9);
  // Rays reduce to the nearest symbol.
  const auto r = cond_entropy(CoordinatePartition::fine(m.system(), 0, 0), CoordinateSet::right_ray(3), m);
  const double o = oracle::cond_entropy(m, 0, 3, oracle::symbols_at({0}, 0), oracle::symbols_at({3}, 0));
  EXPECT_NEAR(r.lower, o, 1e-12);
}

TEST(Entropy, ChainRuleAndMonotonicityProperty) {
  RandomStream rng(99);
  for (int t = 0; t < 40; ++t) {
    RandomStream r = rng.child(static_cast<std::uint64_t>(t));
    const MarkovMeasure m = random_chain(r, 3);
    const auto p = CoordinatePartition::fine(m.system(), 0, static_cast<Coord>(r.uniform() * 3));
    const auto q = CoordinatePartition::fine(m.system(), -2, -2 + static_cast<Coord>(r.uniform() * 3));
    CoordinateSet s = CoordinateSet::right_ray(4 + static_cast<Coord>(r.uniform() * 3));
    s.insert(-5);
    const auto joint = cond_entropy(p.join(q), s, m);
    CoordinateSet sp = s;
    sp.insert_interval(p.window_begin(), p.window_end());
    EXPECT_NEAR(joint.lower, cond_entropy(p, s, m).lower + cond_entropy(q, sp, m).lower, 1e-9);
    CoordinateSet more = s;
    more.insert(-3);
    EXPECT_LE(cond_entropy(p, more, m).upper, cond_entropy(p, s, m).upper + 1e-12);
  }
}

TEST(Entropy, PinskerResidual) {
  const auto m = two_state_lazy();
  const auto& sys = m.system();
  const auto fine = pinsker_residual(CoordinatePartition::fine(sys, 0, 0), CoordinatePartition::fine(sys, -1, 1), m);
  EXPECT_TRUE(fine.contains(0.0, 1e-12));
  EXPECT_LE(fine.width(), 1e-9);
  const auto p = CoordinatePartition::from_labeling(sys, sum_labeling(sys, 2), 0);
  const auto q = CoordinatePartition::fine(sys, 0, 0);
  const auto r8 = pinsker_residual(p, q, m, 8);
  const auto r16 = pinsker_residual(p, q, m, 16);
  EXPECT_TRUE(r8.contains(0.0, 1e-12));
  EXPECT_TRUE(r16.contains(0.0, 1e-12));
  EXPECT_LE(r16.width(), 0.5 * r8.width());
  // The Bernoulli measure kills every conditioning on P's orbit.
  const auto b = bernoulli_measure();
  const auto t = pinsker_terms(CoordinatePartition::fine(b.system(), 0, 0), CoordinatePartition::fine(b.system(), 0, 0), b);
  EXPECT_NEAR(t.own.lower, std::log(2.0), 1e-12);
  EXPECT_NEAR(t.relative.upper, 0.0, 1e-12);
}

TEST(Entropy, ChainCheck) {
  for (const auto& [name, m] : all_presets()) {
    const auto& sys = m.system();
    const std::vector<CoordinatePartition> chain = {CoordinatePartition::fine(sys, 0, 0), CoordinatePartition::fine(sys, 0, 1),
                                                    CoordinatePartition::fine(sys, -1, 1)};
    const ChainCheck c = chain_check(chain, m);
    for (const auto& r : c.pair_residuals) EXPECT_TRUE(r.contains(0.0, 1e-9)) << name;
    EXPECT_GE(c.slack.lower, -1e-9) << name;
  }
  // A coarse two-step chain: the two-partition identity still holds.
  const auto m = two_state_lazy();
  const auto coarse = CoordinatePartition::from_labeling(m.system(), sum_labeling(m.system(), 2), 0);
  const ChainCheck c = chain_check({coarse, CoordinatePartition::fine(m.system(), 0, 1)}, m, 14);
  EXPECT_TRUE(c.residual.contains(0.0, 1e-9));
  EXPECT_THROW(chain_check({CoordinatePartition::fine(m.system(), 0, 1), coarse}, m), InvalidArgument);
}

TEST(Entropy, BracketArithmetic) {
  const auto a = EntropyBracket::between(0.1, 0.3), b = EntropyBracket::between(0.05, 0.1);
  const auto d = a - b;
  EXPECT_NEAR(d.lower, 0.0, 1e-15);
  EXPECT_NEAR(d.upper, 0.25, 1e-15);
  EXPECT_FALSE(d.exact);
  EXPECT_TRUE(EntropyBracket::point(0.2).exact);
}
