#include "mbd/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <boost/math/special_functions/gamma.hpp>

namespace mbd {

namespace {

constexpr double kSigmas = 3.0;

double nearest_rank(const std::vector<std::uint64_t>& sorted, double q) {
  const auto n = sorted.size();
  auto rank = static_cast<std::size_t>(std::ceil(q * static_cast<double>(n)));
  rank = std::clamp<std::size_t>(rank, 1, n);
  return static_cast<double>(sorted[rank - 1]);
}

}  // namespace

Histogram make_histogram(std::span<const int> values, std::size_t num_states) {
  Histogram h(num_states, 0);
  for (int v : values) {
    if (v < 0 || static_cast<std::size_t>(v) >= num_states) throw std::out_of_range("make_histogram: value out of range");
    ++h[static_cast<std::size_t>(v)];
  }
  return h;
}

double total_variation(std::span<const std::uint64_t> hist, std::span<const double> pi) {
  if (hist.size() != pi.size()) throw std::invalid_argument("total_variation: size mismatch");
  const auto total = std::accumulate(hist.begin(), hist.end(), std::uint64_t{0});
  if (total == 0) throw std::invalid_argument("total_variation: empty histogram");
  double acc = 0.0;
  for (std::size_t i = 0; i < hist.size(); ++i) {
    acc += std::abs(static_cast<double>(hist[i]) / static_cast<double>(total) - pi[i]);
  }
  return 0.5 * acc;
}

double total_variation(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw std::invalid_argument("total_variation: size mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) acc += std::abs(p[i] - q[i]);
  return 0.5 * acc;
}

double chi_square_survival(double x, int dof) {
  if (dof < 1) throw std::invalid_argument("chi_square_survival: dof must be >= 1");
  if (x <= 0.0) return 1.0;
  return boost::math::gamma_q(0.5 * dof, 0.5 * x);
}

ChiSquareResult chi_square_test(std::span<const std::uint64_t> hist, std::span<const double> pi, double min_expected) {
  if (hist.size() != pi.size()) throw std::invalid_argument("chi_square_test: size mismatch");
  const auto total = static_cast<double>(std::accumulate(hist.begin(), hist.end(), std::uint64_t{0}));
  if (total == 0.0) throw std::invalid_argument("chi_square_test: empty histogram");

  std::vector<double> observed;
  std::vector<double> expected;
  double o = 0.0;
  double e = 0.0;
  for (std::size_t i = 0; i < hist.size(); ++i) {
    o += static_cast<double>(hist[i]);
    e += total * pi[i];
    if (e >= min_expected) {
      observed.push_back(o);
      expected.push_back(e);
      o = e = 0.0;
    }
  }
  if (e > 0.0 || o > 0.0) {
    if (observed.empty()) {
      observed.push_back(o);
      expected.push_back(e);
    } else {
      observed.back() += o;
      expected.back() += e;
    }
  }
  if (observed.size() < 2) throw std::invalid_argument("chi_square_test: fewer than two bins after merging");

  ChiSquareResult r;
  for (std::size_t b = 0; b < observed.size(); ++b) {
    const double d = observed[b] - expected[b];
    r.statistic += d * d / expected[b];
  }
  r.bins = static_cast<int>(observed.size());
  r.dof = r.bins - 1;
  r.p_value = chi_square_survival(r.statistic, r.dof);
  return r;
}

double TimeStats::standard_error() const { return count > 0 ? sd / std::sqrt(static_cast<double>(count)) : 0.0; }

TimeStats time_stats(std::span<const std::uint64_t> times) {
  if (times.empty()) throw std::invalid_argument("time_stats: no observations");
  TimeStats s;
  s.count = times.size();
  const double n = static_cast<double>(times.size());
  double sum = 0.0;
  for (auto t : times) sum += static_cast<double>(t);
  s.mean = sum / n;
  double ss = 0.0;
  for (auto t : times) {
    const double d = static_cast<double>(t) - s.mean;
    ss += d * d;
  }
  s.sd = times.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
  std::vector<std::uint64_t> sorted(times.begin(), times.end());
  std::sort(sorted.begin(), sorted.end());
  s.q50 = nearest_rank(sorted, 0.50);
  s.q90 = nearest_rank(sorted, 0.90);
  s.q99 = nearest_rank(sorted, 0.99);
  s.max = static_cast<double>(sorted.back());
  return s;
}

BoundCheck check_mean(std::string name, std::span<const std::uint64_t> times, double bound) {
  const auto s = time_stats(times);
  BoundCheck c{std::move(name), s.mean, bound, kSigmas * s.standard_error(), false};
  c.pass = c.empirical <= c.bound + c.allowance;
  return c;
}

BoundCheck check_tail(std::string name, std::span<const std::uint64_t> times, double threshold, double bound) {
  if (times.empty()) throw std::invalid_argument("check_tail: no observations");
  const auto exceed = std::count_if(times.begin(), times.end(),
                                    [&](std::uint64_t t) { return static_cast<double>(t) > threshold; });
  const double n = static_cast<double>(times.size());
  const double p = static_cast<double>(exceed) / n;
  BoundCheck c{std::move(name), p, bound, kSigmas * std::sqrt(p * (1.0 - p) / n), false};
  c.pass = c.empirical <= c.bound + c.allowance;
  return c;
}

std::vector<BoundCheck> summarize_times(std::span<const std::uint64_t> times, const BoundSet& bounds, TimeKind kind) {
  std::vector<BoundCheck> out;
  switch (kind) {
    case TimeKind::coalescence:
      out.push_back(check_mean("coalescence_mean<=theta*N", times, bounds.coalescence_bound));
      out.push_back(check_mean("coalescence_mean<=min(E[T_0N],E[T_N0])", times, std::min(bounds.e_t0n, bounds.e_tn0)));
      for (const auto& sb : bounds.simple.candidates) {
        out.push_back(check_mean("coalescence_mean<=" + std::string(to_string(sb.kind)), times, sb.value));
      }
      break;
    case TimeKind::doubling: {
      out.push_back(check_mean("doubling_mean<=4*theta*N", times, bounds.doubling.mean));
      for (int k : {16, 32, 44}) {
        out.push_back(check_tail("doubling_tail_k" + std::to_string(k), times, k * bounds.theta * bounds.n,
                                 bounds.doubling.tail(k)));
      }
      break;
    }
    case TimeKind::read_once: {
      const auto& ro = bounds.read_once;
      out.push_back(check_mean("readonce_mean<=2B/(1-beta)", times, ro.mean));
      for (int k : {2, 3, 4}) {
        out.push_back(check_tail("readonce_tail_k" + std::to_string(k), times,
                                 static_cast<double>(k) * static_cast<double>(ro.block_size), ro.tail(k)));
      }
      break;
    }
  }
  return out;
}

}  // namespace mbd
