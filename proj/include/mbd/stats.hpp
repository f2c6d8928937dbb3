#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mbd/analysis.hpp"

namespace mbd {

using Histogram = std::vector<std::uint64_t>;

Histogram make_histogram(std::span<const int> values, std::size_t num_states);

// (1/2) sum_i |hist_i / total - pi_i|. Throws on size mismatch or empty hist.
double total_variation(std::span<const std::uint64_t> hist, std::span<const double> pi);
// Same distance between two probability vectors.
double total_variation(std::span<const double> p, std::span<const double> q);

struct ChiSquareResult {
  double statistic = 0.0;
  int dof = 0;
  double p_value = 1.0;
  int bins = 0;  // after merging
};

// Upper tail P(X > x) of a chi-square variable with `dof` degrees of freedom.
double chi_square_survival(double x, int dof);

// Pearson goodness of fit. Adjacent states are merged left to right until
// every bin expects at least `min_expected` counts; a short final remainder
// joins the last bin. Throws std::invalid_argument if fewer than two bins
// remain.
ChiSquareResult chi_square_test(std::span<const std::uint64_t> hist, std::span<const double> pi,
                                double min_expected = 5.0);

struct TimeStats {
  std::uint64_t count = 0;
  double mean = 0.0;
  double sd = 0.0;  // sample standard deviation
  double q50 = 0.0;
  double q90 = 0.0;
  double q99 = 0.0;
  double max = 0.0;

  double standard_error() const;
};

// Nearest-rank quantiles. Throws on empty input.
TimeStats time_stats(std::span<const std::uint64_t> times);

struct BoundCheck {
  std::string name;
  double empirical = 0.0;
  double bound = 0.0;
  double allowance = 0.0;  // 3 standard errors
  bool pass = false;
};

// mean(times) <= bound + 3 SE
BoundCheck check_mean(std::string name, std::span<const std::uint64_t> times, double bound);
// fraction of times > threshold <= bound + 3 SE (binomial)
BoundCheck check_tail(std::string name, std::span<const std::uint64_t> times, double threshold, double bound);

enum class TimeKind { coalescence, doubling, read_once };

// Every bound from `bounds` that applies to samples of the given kind.
// Failures are recorded, never thrown.
std::vector<BoundCheck> summarize_times(std::span<const std::uint64_t> times, const BoundSet& bounds, TimeKind kind);

}  // namespace mbd
