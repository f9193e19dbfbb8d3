#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "sftlab/sftlab.hpp"

using namespace sftlab;

TEST(MarkovMeasure, StationaryVectors) {
  const auto lazy = two_state_lazy();
  EXPECT_NEAR(lazy.stationary()(0), 2.0 / 3.0, 1e-12);
  EXPECT_NEAR(lazy.stationary()(1), 1.0 / 3.0, 1e-12);
  for (const auto& [name, m] : all_presets()) {
    const Vector pi = m.stationary();
    EXPECT_NEAR(pi.sum(), 1.0, 1e-12) << name;
    EXPECT_LE(((pi.transpose() * m.transition()) - pi.transpose()).cwiseAbs().maxCoeff(), 1e-12) << name;
  }
}

TEST(MarkovMeasure, Additivity) {
  for (const auto& [name, m] : all_presets()) {
    for (int len = 1; len <= 6; ++len)
      for (const Word& w : m.system().allowed_words(len)) {
        double right = 0.0, left = 0.0;
        for (Symbol a = 0; a < m.alphabet_size(); ++a) {
          Word wa = w, aw{a};
          wa.push_back(a);
          aw.insert(aw.end(), w.begin(), w.end());
          right += m.word_prob(wa);
          left += m.word_prob(aw);
        }
        ASSERT_NEAR(right, m.word_prob(w), 1e-12) << name;
        ASSERT_NEAR(left, m.word_prob(w), 1e-12) << name;
      }
  }
}

TEST(MarkovMeasure, ReverseKernel) {
  const auto lazy = two_state_lazy();
  // R(b,a) = π(a)P(a,b)/π(b): R(0,1) = (1/3)(0.2)/(2/3) = 0.1.
  EXPECT_NEAR(lazy.reverse_kernel()(0, 1), 0.1, 1e-12);
  for (const auto& [name, m] : all_presets()) {
    const MarkovMeasure back = m.reversed().reversed();
    EXPECT_LE((back.transition() - m.transition()).cwiseAbs().maxCoeff(), 1e-12) << name;
  }
}

TEST(MarkovMeasure, EntropyRates) {
  EXPECT_NEAR(entropy_rate(bernoulli_measure()), std::log(2.0), 1e-15);
  EXPECT_NEAR(entropy_rate(golden_mean_parry()), std::log(std::numbers::phi), 1e-12);
  EXPECT_EQ(entropy_rate(period_two()), 0.0);
  EXPECT_NEAR(entropy_rate(cyclic_four()), std::log(2.0), 1e-15);
}

TEST(MarkovMeasure, ParryMatchesClosedForm) {
  const auto p = parry_measure(SftSystem::golden_mean());
  const double phi = std::numbers::phi;
  EXPECT_NEAR(p.transition()(0, 0), 1.0 / phi, 1e-12);
  EXPECT_NEAR(p.transition()(0, 1), 1.0 / (phi * phi), 1e-12);
  EXPECT_NEAR(p.stationary()(0), phi * phi / (1.0 + phi * phi), 1e-12);
  const auto full = parry_measure(SftSystem::full_shift(3));
  EXPECT_NEAR(entropy_rate(full), std::log(3.0), 1e-12);
}

TEST(MarkovMeasure, SpectralInfo) {
  const auto s = spectral_info(two_state_lazy());
  EXPECT_TRUE(s.is_primitive);
  EXPECT_NEAR(s.second_modulus, 0.7, 1e-12);
  EXPECT_EQ(period_two().period(), 2);
  EXPECT_EQ(cyclic_four().period(), 2);
  EXPECT_FALSE(spectral_info(cyclic_four()).is_primitive);
}

TEST(MarkovMeasure, Validation) {
  Matrix bad(2, 2);
  bad << 0.5, 0.49, 0.5, 0.5;
  EXPECT_THROW(MarkovMeasure(SftSystem::full_shift(2), bad), InvalidArgument);
  Matrix reducible(2, 2);
  reducible << 1.0, 0.0, 0.0, 1.0;
  EXPECT_THROW(MarkovMeasure(SftSystem::full_shift(2), reducible), InvalidArgument);
  Matrix forbidden(2, 2);
  forbidden << 0.5, 0.5, 0.5, 0.5;
  EXPECT_THROW(MarkovMeasure(SftSystem::golden_mean(), forbidden), InvalidArgument);
  Matrix thin(2, 2);
  thin << 0.0, 1.0, 1.0, 0.0;
  EXPECT_NO_THROW(MarkovMeasure(SftSystem::full_shift(2), thin));
  EXPECT_THROW(MarkovMeasure(SftSystem::full_shift(2), thin, true), InvalidArgument);
}

TEST(MarkovMeasure, SamplerFrequencies) {
  const auto m = two_state_lazy();
  RandomStream rng(7);
  const Word w = sample_path(m, rng, 0, 199999);
  double zeros = 0, z0 = 0, zz = 0;
  for (std::size_t i = 0; i + 1 < w.size(); ++i) {
    zeros += w[i] == 0;
    if (w[i] == 0) {
      ++z0;
      zz += w[i + 1] == 0;
    }
  }
  // Chain correlation inflates the variance; 0.01 is many standard errors.
  EXPECT_NEAR(zeros / static_cast<double>(w.size() - 1), 2.0 / 3.0, 0.01);
  EXPECT_NEAR(zz / z0, 0.9, 0.01);
}

TEST(MarkovMeasure, SamplerAnchorAndDeterminism) {
  const auto m = period_two();
  RandomStream a(5), b(5);
  EXPECT_EQ(sample_path(m, a, -5, 5), sample_path(m, b, -5, 5));
  RandomStream c(9);
  const Word w = sample_path(m, c, 0, 3, std::make_pair(Coord{2}, Symbol{1}));
  EXPECT_EQ(word_to_string(w), "1010");
}
