#include <bit>
#include <cmath>

#include <gtest/gtest.h>

#include "mbd/analysis.hpp"
#include "mbd/samplers.hpp"
#include "mbd/stats.hpp"

namespace mbd {
namespace {

constexpr int kSamples = 200'000;

Histogram doubling_histogram(const BDKernel& k, std::uint64_t seed, int count, std::vector<std::uint64_t>* used = nullptr) {
  PastBuffer past(seed);
  Histogram h(k.num_states(), 0);
  for (int i = 0; i < count; ++i) {
    past.clear();
    const auto r = doubling_sample(k, past);
    ++h[static_cast<std::size_t>(r.value)];
    if (used) used->push_back(r.uniforms_used);
  }
  return h;
}

Histogram read_once_histogram(const BDKernel& k, std::uint64_t block, std::uint64_t seed, int count) {
  UniformStream s(seed);
  Histogram h(k.num_states(), 0);
  for (int i = 0; i < count; ++i) ++h[static_cast<std::size_t>(read_once_sample(k, block, s).value)];
  return h;
}

TEST(Doubling, SingleState) {
  const auto k = build_kernel(TargetDistribution::from_weights({3.0}));
  PastBuffer past(1);
  const auto r = doubling_sample(k, past);
  EXPECT_EQ(r.value, 0);
  EXPECT_EQ(r.uniforms_used, 0u);
}

TEST(Doubling, Reproducible) {
  const auto k = build_kernel(TargetDistribution::from_weights({1.0, 1.0}));
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    PastBuffer a(seed), b(seed);
    for (int i = 0; i < 20; ++i) {
      a.clear();
      b.clear();
      const auto ra = doubling_sample(k, a);
      const auto rb = doubling_sample(k, b);
      EXPECT_EQ(ra.value, rb.value);
      EXPECT_EQ(ra.uniforms_used, rb.uniforms_used);
    }
  }
}

TEST(Doubling, LookbackIsPowerOfTwoAndBufferDepthMatches) {
  const auto k = build_kernel(TargetDistribution::geometric(0.7, 15));
  PastBuffer past(21);
  for (int i = 0; i < 500; ++i) {
    past.clear();
    const auto r = doubling_sample(k, past);
    EXPECT_GE(r.uniforms_used, 2u);
    EXPECT_TRUE(std::has_single_bit(r.uniforms_used));
    EXPECT_EQ(past.size(), r.uniforms_used);
  }
}

TEST(Doubling, OutputIsTheFinalChainFromTheCoalescedState) {
  // Re-derive the answer from the revealed past: once the check window
  // coalesces, every start state at time -t must end at the returned value.
  const auto k = build_kernel(TargetDistribution::zipf(1.5, 8));
  PastBuffer past(5);
  for (int i = 0; i < 200; ++i) {
    past.clear();
    const auto r = doubling_sample(k, past);
    const auto t = static_cast<std::int64_t>(r.uniforms_used);
    for (int start = 0; start <= k.size_n(); ++start) {
      int x = start;
      for (std::int64_t m = -t; m < 0; ++m) {
        const double u = past.get(m);
        x = u < k.down(x) ? x - 1 : (u > 1.0 - k.up(x) ? x + 1 : x);
      }
      ASSERT_EQ(x, r.value);
    }
  }
}

TEST(Doubling, CapIsDiagnosable) {
  const auto k = build_kernel(TargetDistribution::geometric(0.9, 200));
  PastBuffer past(1);
  EXPECT_THROW(doubling_sample(k, past, {.max_lookback = 4}), SamplerCapExceeded);
}

TEST(Doubling, ExactOnGeometric) {
  const auto d = TargetDistribution::geometric(0.5, 10);
  const auto k = build_kernel(d);
  const auto h = doubling_histogram(k, 100, kSamples);
  const auto pi = d.normalized_pi();
  EXPECT_LT(total_variation(h, pi), 0.01);
  EXPECT_GT(chi_square_test(h, pi).p_value, 1e-4);
}

TEST(ReadOnce, SingleState) {
  const auto k = build_kernel(TargetDistribution::from_weights({1.0}));
  UniformStream s(1);
  const auto r = read_once_sample(k, 5, s);
  EXPECT_EQ(r.value, 0);
  EXPECT_EQ(s.position(), 0u);
}

TEST(ReadOnce, Accounting) {
  const auto d = TargetDistribution::geometric(0.5, 10);
  const auto k = build_kernel(d);
  const auto block = default_block_size(theta(d, k), d.size_n());
  EXPECT_EQ(block, 180u);
  UniformStream s(31);
  std::uint64_t consumed = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto r = read_once_sample(k, block, s);
    ASSERT_TRUE(r.blocks_first && r.blocks_second);
    EXPECT_GE(*r.blocks_first, 1u);
    EXPECT_GE(*r.blocks_second, 1u);
    EXPECT_EQ(r.uniforms_used, (*r.blocks_first + *r.blocks_second) * block);
    EXPECT_EQ(r.uniforms_used % block, 0u);
    consumed += r.uniforms_used;
    EXPECT_EQ(s.position(), consumed);
  }
  EXPECT_THROW(read_once_sample(k, 0, s), std::invalid_argument);
}

TEST(ReadOnce, CapIsDiagnosable) {
  const auto k = build_kernel(TargetDistribution::geometric(0.9, 200));
  UniformStream s(1);
  EXPECT_THROW(read_once_sample(k, 1, s, {.max_blocks = 10}), SamplerCapExceeded);
}

TEST(ReadOnce, ExactWithSmallAndDefaultBlocks) {
  const auto d = TargetDistribution::zipf(2.0, 10);
  const auto k = build_kernel(d);
  const auto pi = d.normalized_pi();
  // Exactness does not depend on B; small blocks just take longer.
  for (std::uint64_t block : {std::uint64_t{20}, default_block_size(theta(d, k), d.size_n())}) {
    const auto h = read_once_histogram(k, block, 200 + block, kSamples / 2);
    EXPECT_LT(total_variation(h, pi), 0.01) << "B " << block;
    EXPECT_GT(chi_square_test(h, pi).p_value, 1e-4) << "B " << block;
  }
}

TEST(InverseTransform, HandValues) {
  const auto two = TargetDistribution::from_weights({1.0, 1.0});
  EXPECT_EQ(inverse_transform_sample(two, 0.25, SummationMode::naive), 0);
  EXPECT_EQ(inverse_transform_sample(two, 0.75, SummationMode::naive), 1);
  const auto d = TargetDistribution::from_weights({1.0, 2.0, 1.0});
  EXPECT_EQ(inverse_transform_sample(d, 0.5, SummationMode::kahan), 1);
  EXPECT_EQ(inverse_transform_sample(d, 0.25, SummationMode::kahan), 0);
  EXPECT_EQ(inverse_transform_sample(d, 0.9999999999999999, SummationMode::pairwise), 2);
  InverseTransformSampler itm(d, SummationMode::kahan);
  EXPECT_EQ(itm.cdf(), (std::vector<double>{0.25, 0.75, 1.0}));
}

TEST(InverseTransform, Exact) {
  const auto d = TargetDistribution::geometric(0.5, 10);
  InverseTransformSampler itm(d);
  UniformStream s(5);
  Histogram h(d.num_states(), 0);
  for (int i = 0; i < kSamples; ++i) {
    const auto r = itm.sample(s);
    EXPECT_EQ(r.uniforms_used, 1u);
    ++h[static_cast<std::size_t>(r.value)];
  }
  EXPECT_LT(total_variation(h, d.normalized_pi()), 0.01);
}

TEST(Unnormalized, PowerOfTwoScalingGivesIdenticalStreams) {
  std::vector<double> w{0.3, 1.7, 0.9, 2.2, 0.4, 1.1};
  std::vector<double> scaled = w;
  for (auto& x : scaled) x = std::ldexp(x, 40);
  const auto ka = build_kernel(TargetDistribution::from_weights(w));
  const auto kb = build_kernel(TargetDistribution::from_weights(scaled));
  ASSERT_EQ(ka, kb);
  PastBuffer pa(9), pb(9);
  UniformStream sa(10), sb(10);
  for (int i = 0; i < 1000; ++i) {
    pa.clear();
    pb.clear();
    EXPECT_EQ(doubling_sample(ka, pa).value, doubling_sample(kb, pb).value);
    EXPECT_EQ(read_once_sample(ka, 60, sa).value, read_once_sample(kb, 60, sb).value);
  }
}

}  // namespace
}  // namespace mbd
