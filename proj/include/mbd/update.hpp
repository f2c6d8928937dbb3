#pragma once

#include <cstdint>
#include <variant>

#include "mbd/kernel.hpp"
#include "mbd/rng.hpp"

namespace mbd {

/// Monotone update function of the birth-and-death chain:
///   i - 1   if u < down(i)
///   i + 1   if u > 1 - up(i)
///   i       otherwise (both boundaries of the middle interval stay).
/// Throws std::domain_error unless 0 < u < 1.
int phi(const BDKernel& k, int i, double u);

// Hot-loop variant with no range check on u.
inline int phi_unchecked(const BDKernel& k, int i, double u) {
  // The two intervals are disjoint, so at most one of the comparisons holds.
  return i - static_cast<int>(u < k.down(i)) + static_cast<int>(u > 1.0 - k.up(i));
}

/// Lower and upper copies driven by common uniforms. lo <= hi always.
struct Envelope {
  int lo = 0;
  int hi = 0;

  bool coalesced() const { return lo == hi; }
  friend bool operator==(const Envelope&, const Envelope&) = default;
};

inline Envelope full_envelope(const BDKernel& k) { return {0, k.size_n()}; }

Envelope step_envelope(const BDKernel& k, Envelope e, double u);

inline Envelope step_envelope_unchecked(const BDKernel& k, Envelope e, double u) {
  return {phi_unchecked(k, e.lo, u), phi_unchecked(k, e.hi, u)};
}

struct Coalesced {
  std::uint64_t steps = 0;
  int state = 0;
};

struct TimedOut {
  std::uint64_t steps = 0;
};

using CoalescenceOutcome = std::variant<Coalesced, TimedOut>;

// Runs the envelope forward from (0, N), one uniform per step, until the two
// copies meet. `steps` is then a draw of the coalescence time. N = 0 returns
// {0, 0} without touching the stream.
CoalescenceOutcome simulate_coalescence(const BDKernel& k, UniformStream& stream, std::uint64_t max_steps);

}  // namespace mbd
