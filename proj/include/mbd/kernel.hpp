#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "mbd/distribution.hpp"

namespace mbd {

/// Tridiagonal transition kernel of a birth-and-death chain on {0..N}.
///
/// Row i moves up with probability up(i), down with down(i) and holds with
/// hold(i) = 1 - up(i) - down(i). down(0) = up(N) = 0.
class BDKernel {
 public:
  // Kernel whose stationary law is `d`, built from the ratios
  // gamma(i) = w(i)/w(i+1):
  //   up(0)   = 1 / (1 + gamma(0))
  //   up(i)   = 1 / (1 + max(gamma(i), gamma(i-1)))              1 <= i <= N-1
  //   down(1) = gamma(0) / (1 + gamma(0))
  //   down(i) = gamma(i-1) / (1 + max(gamma(i-1), gamma(i-2)))  2 <= i <= N
  // The result is monotone and reversible w.r.t. d. Throws std::domain_error
  // naming the index if some gamma(i) is not a finite positive number.
  static BDKernel build(const TargetDistribution& d);

  // Raw construction (hand-built kernels, negative controls). Checks ranges
  // and boundary rows only; monotonicity is not required.
  static BDKernel from_arrays(std::vector<double> up, std::vector<double> down);

  int size_n() const { return static_cast<int>(up_.size()) - 1; }
  std::size_t num_states() const { return up_.size(); }

  double up(int i) const { return up_[static_cast<std::size_t>(i)]; }
  double down(int i) const { return down_[static_cast<std::size_t>(i)]; }
  double hold(int i) const { return hold_[static_cast<std::size_t>(i)]; }

  std::span<const double> up() const { return up_; }
  std::span<const double> down() const { return down_; }
  std::span<const double> hold() const { return hold_; }

  friend bool operator==(const BDKernel&, const BDKernel&) = default;

 private:
  BDKernel(std::vector<double> up, std::vector<double> down, std::vector<double> hold)
      : up_(std::move(up)), down_(std::move(down)), hold_(std::move(hold)) {}

  std::vector<double> up_;
  std::vector<double> down_;
  std::vector<double> hold_;
};

inline BDKernel build_kernel(const TargetDistribution& d) { return BDKernel::build(d); }

/// Per-index slack of the two monotonicity inequalities
///   up(i) <= 1 - down(i+1)   and   up(i) <= 1 - down(i),   i in {0..N-1}.
/// The kernel is monotone iff every slack is >= 0.
struct ValidationReport {
  std::vector<double> slack_next;  // (1 - down(i+1)) - up(i)
  std::vector<double> slack_same;  // (1 - down(i)) - up(i)

  bool passes() const;
  double min_slack() const;  // +inf when N = 0
  std::vector<int> failing_indices() const;
};

ValidationReport validate_monotone(const BDKernel& k);

struct StationaryResidual {
  // max_i |w(i) down(i) - w(i-1) up(i-1)| / (w(i) down(i)), 0 when N = 0.
  double detailed_balance = 0.0;
  // ||pi P - pi||_inf with pi normalized; only for N <= kFullResidualMaxN.
  std::optional<double> stationarity;
};

inline constexpr int kFullResidualMaxN = 2000;

// Throws std::invalid_argument when kernel and distribution sizes differ.
StationaryResidual stationary_residual(const BDKernel& k, const TargetDistribution& d);

enum class GammaTrend { nondecreasing, nonincreasing, both, neither };

std::string_view to_string(GammaTrend t);

// Classifies gamma(0..N-1). Neighbouring ratios within `rel_tol` of each other
// count as equal, so a geometric target computed through pow() still reads as
// constant. Requires N >= 1.
GammaTrend gamma_monotonicity(const TargetDistribution& d, double rel_tol = 1e-13);

}  // namespace mbd
