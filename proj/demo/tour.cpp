// A short walk through the library on the two-state lazy chain.

#include <cstdio>

#include "sftlab/sftlab.hpp"

using namespace sftlab;

int main() {
  const MarkovMeasure m = two_state_lazy();
  const SftSystem& sys = m.system();
  std::printf("entropy rate          %.10f nats\n", entropy_rate(m));

  // A coarse observation: x_0 + x_1. Its process entropy is only bracketed.
  const auto sum = Labeling::from_function(sys, 2, [](const Word& w) { return w[0] + w[1]; });
  const auto p = CoordinatePartition::from_labeling(sys, sum, 0);
  for (int depth : {4, 8, 12}) {
    const EntropyBracket b = process_entropy(p, m, depth);
    std::printf("h(sum, T) depth %2d     [%.12f, %.12f]\n", depth, b.lower, b.upper);
  }

  // D_k for an indicator partition against the fine partition of [0,1].
  const auto i00 = Labeling::from_function(sys, 2, [](const Word& w) { return w[0] == 0 && w[1] == 0 ? 1 : 0; });
  const auto prev = CoordinatePartition::from_labeling(sys, i00, 0);
  const auto q = CoordinatePartition::fine(sys, 0, 1);
  for (int k = 0; k <= 4; ++k) std::printf("D_%d                   %.3e\n", k, dk(prev, q, k, m).upper);

  // The conditional square at level 0 and its limit.
  const ConditionalSquare sq(0, m);
  const Cylinder zero{0, {0}}, one{0, {1}};
  const PinskerModel pm = PinskerModel::for_measure(m);
  std::printf("nu_0([0]x[0])          %.6f   lambda %.6f\n", nu_rect(sq, zero, zero), lambda_rect(pm, m, zero, zero));
  std::printf("nu_0([0]x[1])          %.6f   lambda %.6f\n", nu_rect(sq, zero, one), lambda_rect(pm, m, zero, one));
  std::printf("diagonal mass L=16     %.6f\n", diagonal_mass(sq, 16));

  // One pair drawn from nu_0.
  const CouplingSample s = sample_coupling(sq, RandomStream(kDefaultSeed), 32);
  std::printf("x on [-12, 3]          %s\n", word_to_string(s.x.window(-12, 16)).c_str());
  std::printf("y on [-12, 3]          %s\n", word_to_string(s.y.window(-12, 16)).c_str());
  const PairVerdict v = classify_pair(s.x, s.y, 32);
  std::printf("labels                ");
  for (const auto& l : v.labels) std::printf(" %s", l.c_str());
  std::printf("\n");
}
