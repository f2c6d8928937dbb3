#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "mbd/analysis.hpp"
#include "mbd/update.hpp"
#include "oracles.hpp"

namespace mbd {
namespace {

struct Target {
  TargetDistribution d;
  BDKernel k;
};

Target make(TargetDistribution d) {
  auto k = build_kernel(d);
  return {std::move(d), std::move(k)};
}

// O(N^2) direct evaluation of the passage-time sums.
std::pair<double, double> direct_passage_sums(const TargetDistribution& d, const BDKernel& k) {
  double up = 0.0, down = 0.0;
  for (int i = 0; i < d.size_n(); ++i) {
    double a = 0.0, b = 0.0;
    for (int m = 0; m <= i; ++m) a += d.weight(m) / d.weight(i);
    for (int m = i + 1; m <= d.size_n(); ++m) b += d.weight(m) / d.weight(i);
    up += a / k.up(i);
    down += b / k.up(i);
  }
  return {up, down};
}

TEST(PassageTimes, UniformHandValues) {
  const auto t3 = make(TargetDistribution::from_weights({1.0, 1.0, 1.0}));
  EXPECT_EQ(expected_up_time(t3.d, t3.k), 6.0);
  EXPECT_EQ(expected_down_time(t3.d, t3.k), 6.0);
  const auto t2 = make(TargetDistribution::from_weights({1.0, 1.0}));
  EXPECT_EQ(expected_up_time(t2.d, t2.k), 2.0);
  EXPECT_EQ(expected_down_time(t2.d, t2.k), 2.0);
}

TEST(PassageTimes, RecurrenceMatchesDirectSums) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> w(0.1, 10.0);
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<double> weights(2 + trial);
    for (auto& x : weights) x = w(rng);
    const auto t = make(TargetDistribution::from_weights(weights));
    const auto [up, down] = direct_passage_sums(t.d, t.k);
    EXPECT_NEAR(expected_up_time(t.d, t.k), up, 1e-12 * up);
    EXPECT_NEAR(expected_down_time(t.d, t.k), down, 1e-12 * down);
  }
}

TEST(PassageTimes, MatchMonteCarlo) {
  const auto geo = make(TargetDistribution::geometric(0.5, 10));
  const auto zipf = make(TargetDistribution::zipf(2.0, 10));
  for (const auto* t : {&geo, &zipf}) {
    const int n = t->d.size_n();
    const auto up = oracle::first_passage(t->k, 0, n, 20'000, 11);
    const auto down = oracle::first_passage(t->k, n, 0, 20'000, 12);
    EXPECT_NEAR(expected_up_time(t->d, t->k), up.mean, 4 * up.se);
    EXPECT_NEAR(expected_down_time(t->d, t->k), down.mean, 4 * down.se);
  }
}

TEST(Theta, HandAndExampleValues) {
  const auto u3 = make(TargetDistribution::from_weights({1.0, 1.0, 1.0}));
  EXPECT_EQ(theta(u3.d, u3.k), 4.0);

  for (double xi : {0.3, 0.5, 0.9}) {
    const auto g = make(TargetDistribution::geometric(xi, 40));
    EXPECT_LE(theta(g.d, g.k), (1 + xi) / (1 - xi) + 1e-12);
  }
  const auto z = make(TargetDistribution::zipf(2.0, 10));
  EXPECT_LE(theta(z.d, z.k) * 10, (1 + 4.0) * 10 * 11 / 2.0);
}

TEST(Theta, DominatesPassageMinimum) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> lw(-4.0, 4.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> weights(2 + trial % 60);
    for (auto& x : weights) x = std::exp(lw(rng));
    const auto t = make(TargetDistribution::from_weights(weights));
    const double bound = theta(t.d, t.k) * t.d.size_n();
    EXPECT_GE(bound * (1 + 1e-12), std::min(expected_up_time(t.d, t.k), expected_down_time(t.d, t.k)));
  }
}

TEST(Theta, RequiresTwoStates) {
  const auto single = make(TargetDistribution::from_weights({2.0}));
  EXPECT_THROW(theta(single.d, single.k), std::invalid_argument);
  EXPECT_THROW(compute_bounds(single.d, single.k), std::invalid_argument);
}

TEST(SimpleBounds, Geometric) {
  const int n = 10;
  const auto g = make(TargetDistribution::geometric(0.5, n));
  const auto sb = simple_bounds(g.d, g.k);
  EXPECT_NEAR(sb.c_geo_upper, 1.0 - std::ldexp(1.0, -n), 1e-15);
  EXPECT_NEAR(sb.max_inverse_up, 3.0, 1e-14);
  const auto& geo = sb.candidates.front();
  EXPECT_EQ(geo.kind, SimpleBoundKind::geo);
  EXPECT_LE(geo.value, 3.0 * n + 1e-12);

  // With C = xi/(1-xi) = 1 supplied, the geo bound is exactly (1+xi)/(1-xi) N.
  const auto with_c = simple_bounds(g.d, g.k, 1.0);
  ASSERT_FALSE(with_c.candidates.empty());
  EXPECT_EQ(with_c.candidates.front().kind, SimpleBoundKind::geo);
  EXPECT_NEAR(with_c.candidates.front().value, 3.0 * n, 1e-12);
}

TEST(SimpleBounds, ZipfLongTail) {
  const auto z = make(TargetDistribution::zipf(2.0, 10));
  const auto sb = simple_bounds(z.d, z.k);
  bool found = false;
  for (const auto& c : sb.candidates) {
    if (c.kind == SimpleBoundKind::monotone_pi) {
      found = true;
      EXPECT_DOUBLE_EQ(c.value, 275.0);
    }
    if (c.kind == SimpleBoundKind::longtail) EXPECT_LE(c.value, 275.0);
  }
  EXPECT_TRUE(found);
  EXPECT_LE(sb.best().value, 275.0);
}

TEST(SimpleBounds, UniformMonotoneCase) {
  const int n = 8;
  const auto u = make(TargetDistribution::from_weights(std::vector<double>(n + 1, 1.0)));
  const auto sb = simple_bounds(u.d, u.k);
  const auto it = std::find_if(sb.candidates.begin(), sb.candidates.end(),
                               [](const SimpleBound& c) { return c.kind == SimpleBoundKind::monotone_pi; });
  ASSERT_NE(it, sb.candidates.end());
  EXPECT_DOUBLE_EQ(it->value, 2.0 * n * (n + 1) / 2.0);
}

TEST(SimpleBounds, SuppliedConstantMustSatisfyCondition) {
  const auto z = make(TargetDistribution::zipf(2.0, 10));
  const auto sb = simple_bounds(z.d, z.k, 0.01);
  for (const auto& c : sb.candidates) EXPECT_EQ(c.kind, SimpleBoundKind::monotone_pi);
}

TEST(Beta, Values) {
  EXPECT_THROW(beta(std::numbers::e), std::domain_error);
  EXPECT_THROW(beta(2.0), std::domain_error);
  EXPECT_NEAR(beta(6.0), 0.299010482694029, 1e-14);
  EXPECT_NEAR(beta(2 * std::numbers::e), std::exp(-1.0), 1e-15);
}

TEST(OptimalMultiplier, ScanGivesSix) {
  EXPECT_EQ(optimal_block_multiplier(), 6);
  EXPECT_NEAR(block_objective(5), 8.80236491938899, 1e-12);
  EXPECT_NEAR(block_objective(6), 8.55932913670248, 1e-12);
  EXPECT_NEAR(block_objective(7), 8.82696277130890, 1e-12);
  EXPECT_LT(block_objective(6), (block_objective(5) + block_objective(7)) / 2);
  for (int b = 3; b <= 64; ++b) {
    if (b != 6) EXPECT_GT(block_objective(b), block_objective(6));
  }
}

TEST(DoublingBounds, Values) {
  const auto db = doubling_bounds(3.0, 10);
  EXPECT_EQ(db.mean, 120.0);
  EXPECT_NEAR(db.tail(0), std::numbers::e, 1e-15);
  EXPECT_NEAR(db.tail(44), 0.0475167094034467, 1e-15);
  EXPECT_THROW(doubling_bounds(0.0, 10), std::invalid_argument);
}

TEST(ReadOnceBounds, Values) {
  const auto rb = read_once_bounds(3.0, 10, 6);
  EXPECT_EQ(rb.block_size, 180u);
  EXPECT_NEAR(rb.mean, 513.559748202149, 1e-9);
  EXPECT_NEAR(rb.tail(1), 1.0, 1e-15);
  EXPECT_NEAR(rb.tail(10), 1.39646508762180e-4, 1e-17);
  EXPECT_THROW(read_once_bounds(3.0, 10, 2), std::domain_error);
  EXPECT_THROW(rb.tail(0), std::invalid_argument);
}

TEST(BlockSize, Defaults) {
  EXPECT_EQ(default_block_size(3.0, 10), 180u);
  EXPECT_EQ(default_block_size(2.1, 5), 90u);
  EXPECT_EQ(default_block_size(1.0, 1), 6u);
}

TEST(BoundSet, ScaleInvariant) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> w(0.1, 3.0);
  std::vector<double> base(30);
  for (auto& x : base) x = w(rng);
  std::vector<double> scaled = base;
  for (auto& x : scaled) x *= 7.3;
  const auto a = make(TargetDistribution::from_weights(base));
  const auto b = make(TargetDistribution::from_weights(scaled));
  const auto ba = compute_bounds(a.d, a.k);
  const auto bb = compute_bounds(b.d, b.k);
  auto close = [](double x, double y) { return std::abs(x - y) <= 1e-12 * std::abs(x); };
  EXPECT_TRUE(close(ba.theta, bb.theta));
  EXPECT_TRUE(close(ba.e_t0n, bb.e_t0n));
  EXPECT_TRUE(close(ba.e_tn0, bb.e_tn0));
  EXPECT_TRUE(close(ba.read_once.mean, bb.read_once.mean));
  ASSERT_EQ(ba.simple.candidates.size(), bb.simple.candidates.size());
  for (std::size_t i = 0; i < ba.simple.candidates.size(); ++i) {
    EXPECT_TRUE(close(ba.simple.candidates[i].value, bb.simple.candidates[i].value));
  }
}

}  // namespace
}  // namespace mbd
