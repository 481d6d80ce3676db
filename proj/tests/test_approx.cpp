#include "robustdp/approx.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

using namespace robustdp;

TEST(Approx, IdentityIsExact) {
  const PerturbationOracle exact;
  EXPECT_TRUE(exact.is_exact());
  EXPECT_EQ(exact.perturb(1.25, {3, 1, 2, 0}), 1.25);
  const PerturbationOracle zero_bound(PerturbationMode::uniform_noise, 0.0, 7);
  EXPECT_TRUE(zero_bound.is_exact());
}

TEST(Approx, AdversarialSaturatesByParity) {
  const PerturbationOracle adv(PerturbationMode::adversarial_extremes, 0.25, 0);
  EXPECT_EQ(adv.noise({0, 0, 0, 0}), 0.25);
  EXPECT_EQ(adv.noise({0, 0, 0, 1}), -0.25);
  EXPECT_EQ(adv.noise({1, 0, 0, 1}), 0.25);
  for (int t = 0; t < 4; ++t) {
    for (int s = 0; s < 4; ++s) EXPECT_EQ(std::abs(adv.perturb(2.0, {t, 0, s, 1}) - 2.0), 0.25);
  }
}

TEST(Approx, UniformNoiseIsBoundedAndReplayable) {
  const PerturbationOracle a(PerturbationMode::uniform_noise, 1e-3, 11);
  const PerturbationOracle b(PerturbationMode::uniform_noise, 1e-3, 11);
  const PerturbationOracle c(PerturbationMode::uniform_noise, 1e-3, 12);
  std::vector<double> first;
  int differs = 0;
  double lo = 0.0;
  double hi = 0.0;
  for (int t = 0; t < 20; ++t) {
    for (int s = 0; s < 5; ++s) {
      const QueryTag tag{t, t % 3, s, s + t};
      const double eta = a.noise(tag);
      EXPECT_LE(std::abs(eta), 1e-3);
      EXPECT_EQ(eta, b.noise(tag));
      differs += eta != c.noise(tag) ? 1 : 0;
      first.push_back(eta);
      lo = std::min(lo, eta);
      hi = std::max(hi, eta);
    }
  }
  // Replaying in reverse order gives the same stream: values depend on the tag only.
  int i = static_cast<int>(first.size());
  for (int t = 19; t >= 0; --t) {
    for (int s = 4; s >= 0; --s) EXPECT_EQ(a.noise({t, t % 3, s, s + t}), first[static_cast<std::size_t>(--i)]);
  }
  EXPECT_GT(differs, 90);
  EXPECT_LT(lo, -5e-4);
  EXPECT_GT(hi, 5e-4);
}

TEST(Approx, ModeNames) {
  for (auto mode : {PerturbationMode::identity, PerturbationMode::uniform_noise,
                    PerturbationMode::adversarial_extremes}) {
    EXPECT_EQ(parse_perturbation_mode(to_string(mode)), mode);
  }
  EXPECT_FALSE(parse_perturbation_mode("gaussian").has_value());
  EXPECT_THROW(PerturbationOracle(PerturbationMode::uniform_noise, -1.0, 0), std::invalid_argument);
}
