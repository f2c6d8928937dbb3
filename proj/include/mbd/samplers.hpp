#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "mbd/distribution.hpp"
#include "mbd/kernel.hpp"
#include "mbd/rng.hpp"

namespace mbd {

struct SampleResult {
  int value = 0;
  // T_D for doubling, T_R = (L + L') B for read-once, 1 for inverse transform.
  std::uint64_t uniforms_used = 0;
  // Read-once only: blocks spent finding the first coalescing block (L) and
  // blocks propagated until the next one (L').
  std::optional<std::uint64_t> blocks_first;
  std::optional<std::uint64_t> blocks_second;
};

// Raised when an iteration cap is hit; with a valid kernel this does not
// happen in practice.
class SamplerCapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct DoublingOptions {
  std::uint64_t max_lookback = std::uint64_t{1} << 40;
};

/// Doubling coupling from the past.
///
/// With look-back t = 2, 4, 8, ... the envelope (0, N) is run over
/// U_{-t}, ..., U_{-t/2-1} only. Once both copies meet in Y, Y is carried
/// through U_{-t/2}, ..., U_{-1} (already revealed) and the result returned.
/// uniforms_used = t. `past` should be fresh (see PastBuffer::clear).
SampleResult doubling_sample(const BDKernel& k, PastBuffer& past, const DoublingOptions& opts = {});

struct ReadOnceOptions {
  std::uint64_t max_blocks = std::uint64_t{1} << 32;
};

/// Read-once coupling from the past with block size B.
///
/// Phase one consumes blocks until one maps 0 and N to the same state X.
/// Phase two runs the envelope and X side by side through each further
/// block; X is updated while blocks fail to coalesce, and the pre-block X is
/// returned at the first block that does. Every uniform is read once.
SampleResult read_once_sample(const BDKernel& k, std::uint64_t block, UniformStream& stream,
                              const ReadOnceOptions& opts = {});

/// Inverse transform sampling from a cumulative table of the normalized
/// target. Needs the normalizing constant, unlike the two samplers above.
class InverseTransformSampler {
 public:
  explicit InverseTransformSampler(const TargetDistribution& d, SummationMode mode = SummationMode::kahan);

  // Smallest i with cdf(i) >= u.
  int operator()(double u) const;

  SampleResult sample(UniformStream& stream) const { return {(*this)(stream.next()), 1, {}, {}}; }

  const std::vector<double>& cdf() const { return cdf_; }

 private:
  std::vector<double> cdf_;
};

inline int inverse_transform_sample(const TargetDistribution& d, double u, SummationMode mode) {
  return InverseTransformSampler(d, mode)(u);
}

}  // namespace mbd
