#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "mbd/distribution.hpp"
#include "mbd/kernel.hpp"

namespace mbd {

// Expected first-passage time 0 -> N:
//   sum_{i<N} (1/up(i)) sum_{m<=i} w(m)/w(i)
double expected_up_time(const TargetDistribution& d, const BDKernel& k);

// Expected first-passage time N -> 0:
//   sum_{i<N} (1/up(i)) sum_{m>i} w(m)/w(i)
double expected_down_time(const TargetDistribution& d, const BDKernel& k);

// Per-state constant with E[T_C] <= theta * N: the smaller of the two
// worst-case summands of the passage-time sums above.
double theta(const TargetDistribution& d, const BDKernel& k);

enum class SimpleBoundKind { geo, longtail, monotone_pi };

std::string_view to_string(SimpleBoundKind kind);

struct SimpleBound {
  SimpleBoundKind kind;
  double constant;  // C
  double value;     // bound on E[T_C]
};

struct SimpleBounds {
  // C1 = max_i sum_{m<=i} w(m)/w(i),  C2 = max_i sum_{m>i} w(m)/w(i)
  double c_geo_lower = 0.0;
  double c_geo_upper = 0.0;
  // C1' = max_i max_{m<=i} w(m)/w(i), C2' = max_i max_{m>i} w(m)/w(i)
  double c_tail_lower = 0.0;
  double c_tail_upper = 0.0;
  double max_inverse_up = 0.0;  // max_{i<N} 1/up(i)
  std::vector<SimpleBound> candidates;

  const SimpleBound& best() const;
};

// Coalescence-time bounds that only need a bound C on the mass ratios.
// Without `c` the constants are taken from the data. With `c`, a candidate is
// produced only when the corresponding condition holds for that C. When the
// weights are monotone the C = 1 long-tail bound is added as well.
SimpleBounds simple_bounds(const TargetDistribution& d, const BDKernel& k, std::optional<double> c = std::nullopt);

// exp(1 - b/e); throws std::domain_error for b <= e.
double beta(double b);

// b / (1 - beta(b)); the read-once mean bound is proportional to it.
double block_objective(double b);

// Integer b in [lo, hi] minimizing block_objective. Default range gives 6.
int optimal_block_multiplier(int lo = 3, int hi = 64);

struct DoublingBounds {
  double theta;
  int n;
  double mean;  // 4 theta N

  // Bound on P(T_D > k theta N).
  double tail(double k) const;
};

DoublingBounds doubling_bounds(double theta, int n);

struct ReadOnceBounds {
  int multiplier;            // b
  std::uint64_t block_size;  // B = b * ceil(theta) * N
  double beta;               // beta(b)
  double mean;               // 2B / (1 - beta)

  // Bound on P(T_R > k B), k >= 1.
  double tail(int k) const;
};

// Throws std::domain_error for b <= 2.
ReadOnceBounds read_once_bounds(double theta, int n, int b);

// B = b * ceil(theta) * n with b = 6 unless given.
std::uint64_t default_block_size(double theta, int n, int b = 6);

struct BoundSet {
  int n = 0;
  double theta = 0.0;
  double e_t0n = 0.0;
  double e_tn0 = 0.0;
  double coalescence_bound = 0.0;  // theta * N
  DoublingBounds doubling{};
  ReadOnceBounds read_once{};
  SimpleBounds simple{};
};

// Everything above for one target. Requires N >= 1.
BoundSet compute_bounds(const TargetDistribution& d, const BDKernel& k, int block_multiplier = 6);

}  // namespace mbd
