#include "mbd/samplers.hpp"

#include <algorithm>
#include <string>

#include "mbd/update.hpp"

namespace mbd {

SampleResult doubling_sample(const BDKernel& k, PastBuffer& past, const DoublingOptions& opts) {
  if (k.size_n() == 0) return {0, 0, {}, {}};
  for (std::uint64_t t = 2; t <= opts.max_lookback; t *= 2) {
    const auto lookback = static_cast<std::int64_t>(t);
    const std::int64_t half = lookback / 2;

    Envelope e = full_envelope(k);
    std::int64_t m = -lookback;
    for (; m < -half && !e.coalesced(); ++m) e = step_envelope_unchecked(k, e, past.get(m));
    if (!e.coalesced()) continue;

    // Copies have met; finish the check window with a single chain to get Y,
    // then carry Y up to time 0.
    int x = e.lo;
    for (; m < 0; ++m) x = phi_unchecked(k, x, past.get(m));
    return {x, t, {}, {}};
  }
  throw SamplerCapExceeded("doubling_sample: no coalescence within look-back " + std::to_string(opts.max_lookback));
}

namespace {

// Runs one block for the envelope only; returns the common end state if the
// block maps 0 and N to the same place.
std::optional<int> run_block(const BDKernel& k, std::uint64_t block, UniformStream& stream) {
  Envelope e = full_envelope(k);
  std::uint64_t j = 0;
  for (; j < block && !e.coalesced(); ++j) e = step_envelope_unchecked(k, e, stream.next());
  if (!e.coalesced()) return std::nullopt;
  int x = e.lo;
  for (; j < block; ++j) x = phi_unchecked(k, x, stream.next());
  return x;
}

// Envelope and carried state through one block. Returns true if the block
// coalesced; `x` is then left at its pre-block value.
bool run_block_carrying(const BDKernel& k, std::uint64_t block, UniformStream& stream, int& x) {
  Envelope e = full_envelope(k);
  int y = x;
  for (std::uint64_t j = 0; j < block; ++j) {
    const double u = stream.next();
    e = step_envelope_unchecked(k, e, u);
    if (e.coalesced()) {
      // y is sandwiched between the copies from here on; the rest of the
      // block cannot change the outcome.
      stream.skip(block - j - 1);
      return true;
    }
    y = phi_unchecked(k, y, u);
  }
  x = y;
  return false;
}

}  // namespace

SampleResult read_once_sample(const BDKernel& k, std::uint64_t block, UniformStream& stream,
                              const ReadOnceOptions& opts) {
  if (block < 1) throw std::invalid_argument("read_once_sample: block size must be >= 1");
  if (k.size_n() == 0) return {0, 0, std::uint64_t{0}, std::uint64_t{0}};

  std::uint64_t first = 0;
  std::optional<int> x;
  while (!x) {
    if (first == opts.max_blocks) {
      throw SamplerCapExceeded("read_once_sample: no coalescing block within " + std::to_string(opts.max_blocks));
    }
    ++first;
    x = run_block(k, block, stream);
  }

  int state = *x;
  std::uint64_t second = 0;
  for (;;) {
    if (first + second == opts.max_blocks) {
      throw SamplerCapExceeded("read_once_sample: block cap " + std::to_string(opts.max_blocks) + " reached");
    }
    ++second;
    if (run_block_carrying(k, block, stream, state)) break;
  }
  return {state, (first + second) * block, first, second};
}

InverseTransformSampler::InverseTransformSampler(const TargetDistribution& d, SummationMode mode) {
  const auto pi = d.normalized_pi(mode);
  cdf_.resize(pi.size());
  if (mode == SummationMode::kahan) {
    double s = 0.0;
    double c = 0.0;
    for (std::size_t i = 0; i < pi.size(); ++i) {
      const double y = pi[i] - c;
      const double t = s + y;
      c = (t - s) - y;
      s = t;
      cdf_[i] = s;
    }
  } else {
    // Pairwise has no streaming form; its effect is in the normalizing constant.
    double s = 0.0;
    for (std::size_t i = 0; i < pi.size(); ++i) cdf_[i] = (s += pi[i]);
  }
}

int InverseTransformSampler::operator()(double u) const {
  const auto it = std::lower_bound(cdf_.begin(), cdf_.end(), u);
  if (it == cdf_.end()) return static_cast<int>(cdf_.size()) - 1;
  return static_cast<int>(it - cdf_.begin());
}

}  // namespace mbd
