#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string_view>
#include <vector>

namespace mbd {

enum class SummationMode { naive, pairwise, kahan };

SummationMode parse_summation_mode(std::string_view name);
std::string_view to_string(SummationMode mode);

// Sums with the requested scheme. Pairwise recursion bottoms out at blocks of
// 128 terms summed left to right.
double sum(std::span<const double> values, SummationMode mode);
double naive_sum(std::span<const double> values);
double pairwise_sum(std::span<const double> values);
double kahan_sum(std::span<const double> values);

/// A strictly positive, possibly unnormalized distribution on {0, ..., N}.
///
/// Weights are kept exactly as supplied. Everything the samplers need is
/// expressed through the ratios w(i)/w(i+1), so the normalizing constant is
/// only ever computed on request (normalized_pi).
class TargetDistribution {
 public:
  // Throws std::invalid_argument on empty input or on any weight that is
  // zero, negative, NaN or infinite.
  static TargetDistribution from_weights(std::vector<double> weights);

  // Truncated geometric: w(i) = xi^i for i in {0..n}, 0 < xi < 1.
  static TargetDistribution geometric(double xi, int n);

  // Zipf: w(i) = (i+1)^-alpha for i in {0..n}, alpha > 1.
  static TargetDistribution zipf(double alpha, int n);

  // Largest state index N.
  int size_n() const { return static_cast<int>(weights_.size()) - 1; }
  std::size_t num_states() const { return weights_.size(); }

  std::span<const double> weights() const { return weights_; }
  double weight(int i) const { return weights_[static_cast<std::size_t>(i)]; }

  // gamma(i) = w(i)/w(i+1), i in {0..N-1}.
  double gamma_ratio(int i) const;

  // pi(i) = w(i)/C with C summed by `mode`.
  std::vector<double> normalized_pi(SummationMode mode = SummationMode::kahan) const;

 private:
  explicit TargetDistribution(std::vector<double> weights) : weights_(std::move(weights)) {}

  std::vector<double> weights_;
};

// Parses a weight file: either a JSON array of numbers, or text with one
// weight per line ('#' starts a comment line, blank lines are skipped).
std::vector<double> parse_weights(std::string_view text);
TargetDistribution load_weights_file(const std::filesystem::path& path);

}  // namespace mbd
