#include "mbd/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace mbd {

namespace {

void require_nontrivial(const TargetDistribution& d, const BDKernel& k, const char* who) {
  if (d.size_n() < 1) throw std::invalid_argument(std::string(who) + " requires N >= 1");
  if (k.num_states() != d.num_states()) throw std::invalid_argument(std::string(who) + ": size mismatch");
}

// a(i) = sum_{m<=i} w(m)/w(i), via a(i) = a(i-1) * w(i-1)/w(i) + 1.
std::vector<double> lower_mass_ratios(const TargetDistribution& d) {
  const int n = d.size_n();
  std::vector<double> a(static_cast<std::size_t>(n));
  double s = 1.0;
  a[0] = s;
  for (int i = 1; i < n; ++i) {
    s = s * d.gamma_ratio(i - 1) + 1.0;
    a[static_cast<std::size_t>(i)] = s;
  }
  return a;
}

// b(i) = sum_{m>i} w(m)/w(i), via b(i) = (1 + b(i+1)) * w(i+1)/w(i).
std::vector<double> upper_mass_ratios(const TargetDistribution& d) {
  const int n = d.size_n();
  std::vector<double> b(static_cast<std::size_t>(n));
  double s = 0.0;
  for (int i = n - 1; i >= 0; --i) {
    s = (1.0 + s) / d.gamma_ratio(i);
    b[static_cast<std::size_t>(i)] = s;
  }
  return b;
}

double passage_sum(const std::vector<double>& ratios, const BDKernel& k) {
  double total = 0.0;
  for (std::size_t i = 0; i < ratios.size(); ++i) total += ratios[i] / k.up(static_cast<int>(i));
  return total;
}

double passage_max(const std::vector<double>& ratios, const BDKernel& k) {
  double worst = 0.0;
  for (std::size_t i = 0; i < ratios.size(); ++i) worst = std::max(worst, ratios[i] / k.up(static_cast<int>(i)));
  return worst;
}

bool weights_monotone(const TargetDistribution& d) {
  const auto w = d.weights();
  return std::is_sorted(w.begin(), w.end()) || std::is_sorted(w.begin(), w.end(), std::greater<>());
}

}  // namespace

double expected_up_time(const TargetDistribution& d, const BDKernel& k) {
  require_nontrivial(d, k, "expected_up_time");
  return passage_sum(lower_mass_ratios(d), k);
}

double expected_down_time(const TargetDistribution& d, const BDKernel& k) {
  require_nontrivial(d, k, "expected_down_time");
  return passage_sum(upper_mass_ratios(d), k);
}

double theta(const TargetDistribution& d, const BDKernel& k) {
  require_nontrivial(d, k, "theta");
  return std::min(passage_max(lower_mass_ratios(d), k), passage_max(upper_mass_ratios(d), k));
}

std::string_view to_string(SimpleBoundKind kind) {
  switch (kind) {
    case SimpleBoundKind::geo: return "geo";
    case SimpleBoundKind::longtail: return "longtail";
    case SimpleBoundKind::monotone_pi: return "monotone-pi";
  }
  return "?";
}

const SimpleBound& SimpleBounds::best() const {
  if (candidates.empty()) throw std::logic_error("SimpleBounds::best: no candidates");
  return *std::min_element(candidates.begin(), candidates.end(),
                           [](const SimpleBound& a, const SimpleBound& b) { return a.value < b.value; });
}

SimpleBounds simple_bounds(const TargetDistribution& d, const BDKernel& k, std::optional<double> c) {
  require_nontrivial(d, k, "simple_bounds");
  const int n = d.size_n();
  SimpleBounds out;

  const auto lower = lower_mass_ratios(d);
  const auto upper = upper_mass_ratios(d);
  out.c_geo_lower = *std::max_element(lower.begin(), lower.end());
  out.c_geo_upper = *std::max_element(upper.begin(), upper.end());

  // Running max of w(m) for m <= i, and of w(m) for m > i.
  double head_max = 0.0;
  for (int i = 0; i < n; ++i) {
    head_max = std::max(head_max, d.weight(i));
    out.c_tail_lower = std::max(out.c_tail_lower, head_max / d.weight(i));
  }
  double tail_max = 0.0;
  for (int i = n - 1; i >= 0; --i) {
    tail_max = std::max(tail_max, d.weight(i + 1));
    out.c_tail_upper = std::max(out.c_tail_upper, tail_max / d.weight(i));
  }

  for (int i = 0; i < n; ++i) out.max_inverse_up = std::max(out.max_inverse_up, 1.0 / k.up(i));

  const double linear = out.max_inverse_up * n;
  const double quadratic = out.max_inverse_up * n * (n + 1) / 2.0;
  const double c_geo = std::min(out.c_geo_lower, out.c_geo_upper);
  const double c_tail = std::min(out.c_tail_lower, out.c_tail_upper);

  if (c) {
    if (!(*c > 0.0)) throw std::invalid_argument("simple_bounds: C must be positive");
    if (c_geo <= *c) out.candidates.push_back({SimpleBoundKind::geo, *c, *c * linear});
    if (c_tail <= *c) out.candidates.push_back({SimpleBoundKind::longtail, *c, *c * quadratic});
  } else {
    out.candidates.push_back({SimpleBoundKind::geo, c_geo, c_geo * linear});
    out.candidates.push_back({SimpleBoundKind::longtail, c_tail, c_tail * quadratic});
  }
  if (weights_monotone(d)) out.candidates.push_back({SimpleBoundKind::monotone_pi, 1.0, quadratic});
  return out;
}

double beta(double b) {
  if (!(b > std::numbers::e)) throw std::domain_error("beta: b must exceed e");
  return std::exp(1.0 - b / std::numbers::e);
}

double block_objective(double b) { return b / (1.0 - beta(b)); }

int optimal_block_multiplier(int lo, int hi) {
  if (lo < 3 || hi < lo) throw std::invalid_argument("optimal_block_multiplier: need 3 <= lo <= hi");
  int best = lo;
  for (int b = lo + 1; b <= hi; ++b) {
    if (block_objective(b) < block_objective(best)) best = b;
  }
  return best;
}

double DoublingBounds::tail(double k) const { return std::exp(1.0 - k / (4.0 * std::numbers::e)); }

DoublingBounds doubling_bounds(double theta, int n) {
  if (!(theta > 0.0) || n < 1) throw std::invalid_argument("doubling_bounds: need theta > 0 and n >= 1");
  return {theta, n, 4.0 * theta * n};
}

double ReadOnceBounds::tail(int k) const {
  if (k < 1) throw std::invalid_argument("ReadOnceBounds::tail: k must be >= 1");
  return (1.0 - beta) * std::pow(beta, k - 1) * k + std::pow(beta, k);
}

std::uint64_t default_block_size(double theta, int n, int b) {
  if (!(theta > 0.0) || !std::isfinite(theta) || n < 1 || b < 1) {
    throw std::invalid_argument("default_block_size: need finite theta > 0, n >= 1, b >= 1");
  }
  return static_cast<std::uint64_t>(b) * static_cast<std::uint64_t>(std::ceil(theta)) *
         static_cast<std::uint64_t>(n);
}

ReadOnceBounds read_once_bounds(double theta, int n, int b) {
  if (b <= 2) throw std::domain_error("read_once_bounds: block multiplier b must be an integer > e");
  const auto block = default_block_size(theta, n, b);
  const double be = beta(b);
  return {b, block, be, 2.0 * static_cast<double>(block) / (1.0 - be)};
}

BoundSet compute_bounds(const TargetDistribution& d, const BDKernel& k, int block_multiplier) {
  require_nontrivial(d, k, "compute_bounds");
  BoundSet bs;
  bs.n = d.size_n();
  bs.theta = theta(d, k);
  bs.e_t0n = expected_up_time(d, k);
  bs.e_tn0 = expected_down_time(d, k);
  bs.coalescence_bound = bs.theta * bs.n;
  bs.doubling = doubling_bounds(bs.theta, bs.n);
  bs.read_once = read_once_bounds(bs.theta, bs.n, block_multiplier);
  bs.simple = simple_bounds(d, k);
  return bs;
}

}  // namespace mbd
