#include <backcast/noise.hpp>

#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"

namespace {

using backcast::Field;
using backcast::Grid;
using backcast::NoiseSpec;

Field base(const Grid& g) {
  return Field::sample(g, [](double x) { return std::exp(-x * x / (1.0 + 4.0)) / std::sqrt(5.0); });
}

TEST(Perturb, ZeroEpsilonReturnsInput) {
  const Grid g(12.0, 128);
  const Field phi = base(g);
  const Field out = backcast::perturb(phi, {0.0, 3});
  for (std::size_t j = 0; j < 128; ++j) EXPECT_EQ(out[j], phi[j]);
}

TEST(Perturb, NormIsEpsilonAndDeterministic) {
  const Grid g(12.0, 512);
  const Field phi = base(g);
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    for (double eps : {1e-1, 1e-3, 1e-6}) {
      const NoiseSpec spec{eps, seed};
      const Field a = backcast::perturb(phi, spec);
      const Field b = backcast::perturb(phi, spec);
      EXPECT_NEAR(backcast::l2_norm(a - phi), eps, 1e-12 * eps);
      for (std::size_t j = 0; j < g.size(); ++j) ASSERT_EQ(a[j], b[j]);
    }
  }
}

TEST(Perturb, DifferentSeedsGiveDifferentNoise) {
  const Grid g(12.0, 128);
  const Field phi = base(g);
  const Field a = backcast::perturb(phi, {1e-2, 1});
  const Field b = backcast::perturb(phi, {1e-2, 2});
  EXPECT_GT(backcast::l2_norm(a - b), 1e-3);
}

TEST(Perturb, BandLimitedHasNoHighModes) {
  const Grid g(12.0, 512);
  const Field phi = base(g);
  const double cut = 5.0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Field out = backcast::perturb(phi, {1e-2, seed, backcast::BandLimitedNoise{cut}});
    EXPECT_NEAR(backcast::l2_norm(out - phi), 1e-2, 1e-14);
    const auto s = backcast::forward_transform(out - phi);
    for (std::size_t k = 0; k < g.size(); ++k) {
      if (std::abs(g.freq(k)) > cut) {
        EXPECT_LT(std::abs(s[k]), 1e-14);
      }
    }
  }
}

TEST(Perturb, Validation) {
  const Grid g(12.0, 64);
  const Field phi = base(g);
  EXPECT_THROW(backcast::perturb(phi, {-1e-3, 1}), backcast::DomainError);
  EXPECT_THROW(backcast::perturb(phi, {std::nan(""), 1}), backcast::DomainError);
  EXPECT_THROW(backcast::perturb(phi, {1e-3, 1, backcast::BandLimitedNoise{0.0}}), backcast::DomainError);
  EXPECT_THROW(backcast::perturb(phi, {1e-3, 1, backcast::BandLimitedNoise{g.max_freq() * 2.0}}),
               backcast::DomainError);
}

TEST(AddScaled, ZeroNoiseVectorIsRejected) {
  const Grid g(12.0, 64);
  const std::vector<double> eta(64, 0.0);
  EXPECT_THROW(backcast::detail::add_scaled(base(g), eta, 1e-3), backcast::ZeroNoiseVector);
}

TEST(AddScaled, ScalesArbitraryDirection) {
  const Grid g(3.0, 40);
  const auto eta = oracle::random_field(40, 11);
  const Field out = backcast::detail::add_scaled(Field::zeros(g), eta, 0.25);
  EXPECT_NEAR(backcast::l2_norm(out), 0.25, 1e-15);
  // Direction is preserved.
  const double ratio = out[0] / eta[0];
  for (std::size_t j = 1; j < 40; ++j) EXPECT_NEAR(out[j], ratio * eta[j], 1e-15);
}

TEST(TaskSeed, XorScheme) {
  EXPECT_EQ(backcast::task_seed(7, 0), 7u);
  EXPECT_EQ(backcast::task_seed(7, 1), 6u);
  EXPECT_EQ(backcast::task_seed(7, 8), 15u);
}

TEST(NoiseKind, Names) {
  EXPECT_EQ(backcast::to_string(backcast::NoiseKind{backcast::WhiteNoise{}}), "white");
  EXPECT_EQ(backcast::to_string(backcast::NoiseKind{backcast::BandLimitedNoise{2.5}}), "band:2.5");
}

}  // namespace
