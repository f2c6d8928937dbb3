#include "mbd/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace mbd {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
// Rounding repairs may move a probability by at most this many multiples of
// machine epsilon; anything larger is a genuine construction error.
constexpr int kMaxUlpRepair = 4;

// Makes a + b <= 1 hold in floating point, both as `b <= 1 - a` and as
// `(1 - b) - a >= 0`, by lowering the larger of the two. Exact arithmetic
// already guarantees it; this only absorbs rounding, and moving the larger
// value keeps the relative perturbation of either probability near epsilon.
void repair_pair(double& a, double& b, std::size_t row, const char* what) {
  auto ok = [&] { return b <= 1.0 - a && (1.0 - b) - a >= 0.0; };
  if (ok()) return;
  double& big = a >= b ? a : b;
  const double other = a >= b ? b : a;
  const double original = big;
  big = std::min(big, 1.0 - other);
  while (!ok() && original - big <= kMaxUlpRepair * kEps) big = std::nextafter(big, 0.0);
  if (!ok() || original - big > kMaxUlpRepair * kEps) {
    std::ostringstream msg;
    msg << "kernel construction: " << what << " violated at index " << row << " beyond rounding";
    throw std::domain_error(msg.str());
  }
}

std::vector<double> compute_hold(const std::vector<double>& up, const std::vector<double>& down) {
  std::vector<double> hold(up.size());
  for (std::size_t i = 0; i < up.size(); ++i) {
    double r = 1.0 - up[i] - down[i];
    if (r < 0.0) {
      if (r < -kMaxUlpRepair * kEps) {
        std::ostringstream msg;
        msg << "kernel row " << i << ": up + down = " << up[i] + down[i] << " exceeds 1";
        throw std::domain_error(msg.str());
      }
      r = 0.0;
    }
    hold[i] = r;
  }
  return hold;
}

}  // namespace

BDKernel BDKernel::build(const TargetDistribution& d) {
  const int n = d.size_n();
  const auto states = static_cast<std::size_t>(n) + 1;
  std::vector<double> up(states, 0.0);
  std::vector<double> down(states, 0.0);
  if (n == 0) return BDKernel(std::move(up), std::move(down), {1.0});

  std::vector<double> gamma(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double g = d.gamma_ratio(i);
    if (!std::isfinite(g) || !(g > 0.0)) {
      std::ostringstream msg;
      msg << "gamma(" << i << ") = w(" << i << ")/w(" << i + 1 << ") = " << g
          << " is not a finite positive number";
      throw std::domain_error(msg.str());
    }
    gamma[static_cast<std::size_t>(i)] = g;
  }

  up[0] = 1.0 / (1.0 + gamma[0]);
  down[1] = gamma[0] / (1.0 + gamma[0]);
  for (std::size_t i = 1; i < static_cast<std::size_t>(n); ++i) {
    const double m = std::max(gamma[i], gamma[i - 1]);
    up[i] = 1.0 / (1.0 + m);
    down[i + 1] = gamma[i] / (1.0 + m);
  }

  for (std::size_t i = 0; i < static_cast<std::size_t>(n); ++i) {
    // phi's monotonicity needs down(i+1) <= 1 - up(i) and down(i) <= 1 - up(i)
    // exactly as evaluated.
    repair_pair(up[i], down[i + 1], i, "up(i) <= 1 - down(i+1)");
    if (i >= 1) repair_pair(up[i], down[i], i, "up(i) <= 1 - down(i)");
  }

  for (int i = 0; i < n; ++i) {
    if (!(up[static_cast<std::size_t>(i)] > 0.0) || !(down[static_cast<std::size_t>(i) + 1] > 0.0)) {
      throw std::domain_error("kernel construction: transition probability underflow near index " +
                              std::to_string(i));
    }
  }

  auto hold = compute_hold(up, down);
  return BDKernel(std::move(up), std::move(down), std::move(hold));
}

BDKernel BDKernel::from_arrays(std::vector<double> up, std::vector<double> down) {
  if (up.empty() || up.size() != down.size()) {
    throw std::invalid_argument("from_arrays: up and down must be non-empty and equally long");
  }
  for (std::size_t i = 0; i < up.size(); ++i) {
    if (!(up[i] >= 0.0 && up[i] <= 1.0) || !(down[i] >= 0.0 && down[i] <= 1.0)) {
      throw std::invalid_argument("from_arrays: probabilities must lie in [0,1] (row " + std::to_string(i) + ")");
    }
  }
  if (down.front() != 0.0 || up.back() != 0.0) {
    throw std::invalid_argument("from_arrays: require down(0) = 0 and up(N) = 0");
  }
  auto hold = compute_hold(up, down);
  return BDKernel(std::move(up), std::move(down), std::move(hold));
}

bool ValidationReport::passes() const { return min_slack() >= 0.0; }

double ValidationReport::min_slack() const {
  double m = std::numeric_limits<double>::infinity();
  for (double s : slack_next) m = std::min(m, s);
  for (double s : slack_same) m = std::min(m, s);
  return m;
}

std::vector<int> ValidationReport::failing_indices() const {
  std::vector<int> out;
  for (std::size_t i = 0; i < slack_next.size(); ++i) {
    if (slack_next[i] < 0.0 || slack_same[i] < 0.0) out.push_back(static_cast<int>(i));
  }
  return out;
}

ValidationReport validate_monotone(const BDKernel& k) {
  ValidationReport report;
  const int n = k.size_n();
  report.slack_next.reserve(static_cast<std::size_t>(n));
  report.slack_same.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    report.slack_next.push_back((1.0 - k.down(i + 1)) - k.up(i));
    report.slack_same.push_back((1.0 - k.down(i)) - k.up(i));
  }
  return report;
}

StationaryResidual stationary_residual(const BDKernel& k, const TargetDistribution& d) {
  if (k.num_states() != d.num_states()) {
    throw std::invalid_argument("stationary_residual: kernel has " + std::to_string(k.num_states()) +
                                " states, distribution has " + std::to_string(d.num_states()));
  }
  StationaryResidual res;
  const int n = k.size_n();
  for (int i = 1; i <= n; ++i) {
    const double inflow = d.weight(i) * k.down(i);
    const double outflow = d.weight(i - 1) * k.up(i - 1);
    res.detailed_balance = std::max(res.detailed_balance, std::abs(inflow - outflow) / inflow);
  }
  if (n <= kFullResidualMaxN) {
    const auto pi = d.normalized_pi(SummationMode::kahan);
    double worst = 0.0;
    for (int j = 0; j <= n; ++j) {
      const auto uj = static_cast<std::size_t>(j);
      double v = pi[uj] * k.hold(j);
      if (j > 0) v += pi[uj - 1] * k.up(j - 1);
      if (j < n) v += pi[uj + 1] * k.down(j + 1);
      worst = std::max(worst, std::abs(v - pi[uj]));
    }
    res.stationarity = worst;
  }
  return res;
}

std::string_view to_string(GammaTrend t) {
  switch (t) {
    case GammaTrend::nondecreasing: return "nondecreasing";
    case GammaTrend::nonincreasing: return "nonincreasing";
    case GammaTrend::both: return "both";
    case GammaTrend::neither: return "neither";
  }
  return "?";
}

GammaTrend gamma_monotonicity(const TargetDistribution& d, double rel_tol) {
  const int n = d.size_n();
  if (n < 1) throw std::invalid_argument("gamma_monotonicity requires N >= 1");
  bool rises = false;
  bool falls = false;
  for (int i = 0; i + 1 < n; ++i) {
    const double a = d.gamma_ratio(i);
    const double b = d.gamma_ratio(i + 1);
    if (std::abs(b - a) <= rel_tol * std::max(a, b)) continue;
    (b > a ? rises : falls) = true;
  }
  if (rises && falls) return GammaTrend::neither;
  if (rises) return GammaTrend::nondecreasing;
  if (falls) return GammaTrend::nonincreasing;
  return GammaTrend::both;
}

}  // namespace mbd
