#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "mbd/analysis.hpp"
#include "mbd/distribution.hpp"
#include "mbd/kernel.hpp"
#include "mbd/samplers.hpp"
#include "mbd/stats.hpp"

namespace mbd {

// Bad or incomplete configuration (maps to exit code 2 in the CLI).
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Family { geometric, zipf, file };
enum class SamplerKind { doubling, read_once, inverse_transform };

Family parse_family(const std::string& s);
SamplerKind parse_sampler(const std::string& s);
std::string to_string(Family f);
std::string to_string(SamplerKind s);

struct DistributionSpec {
  Family family = Family::geometric;
  std::optional<double> xi;
  std::optional<double> alpha;
  std::optional<int> n;
  std::string weights_file;
};

struct ExperimentConfig {
  DistributionSpec dist;
  SamplerKind sampler = SamplerKind::doubling;
  std::uint64_t count = 1000;
  std::uint64_t seed = 1;
  int block_multiplier = 6;
  unsigned jobs = 1;
  SummationMode summation = SummationMode::kahan;
  double significance = 1e-4;          // chi-square rejection level
  std::optional<double> tv_tolerance;  // default: see default_tv_tolerance
  DoublingOptions doubling;
  ReadOnceOptions read_once;
};

nlohmann::json to_json(const ExperimentConfig& c);

// Throws UsageError when a family parameter is missing; std::invalid_argument
// (or a file error) when the distribution itself is invalid.
TargetDistribution make_distribution(const DistributionSpec& spec);

// B = b * ceil(theta) * N for the configured multiplier; 1 when N = 0.
std::uint64_t block_size_for(const TargetDistribution& d, const BDKernel& k, int block_multiplier);

/// Draws config.count samples, split over config.jobs workers. Worker w gets
/// its own stream seeded with derive_seed(seed, w) and a contiguous share of
/// the count; results are concatenated in worker order, so the output is a
/// function of the config alone.
std::vector<SampleResult> run_samples(const ExperimentConfig& config, const TargetDistribution& d, const BDKernel& k);

// Concentration bound on the TV distance of an exact sampler's histogram:
// E[TV] <= sqrt(K/n)/2 plus a McDiarmid term at confidence 1 - 1e-6.
double default_tv_tolerance(std::size_t num_states, std::uint64_t count);

nlohmann::json kernel_json(const BDKernel& k);
nlohmann::json bounds_json(const BoundSet& b);

struct RunReport {
  nlohmann::json json;
  bool pass = false;
};

// Samples, histogram, TV, chi-square, running-time stats and bound checks.
// The report carries a "generated_at" timestamp; every other field is a
// function of the config.
RunReport verify(const ExperimentConfig& config);

// Wall-clock and uniforms per sample for all three samplers on one target.
RunReport bench(const ExperimentConfig& config);

}  // namespace mbd
