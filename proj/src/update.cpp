#include "mbd/update.hpp"

#include <stdexcept>
#include <string>

namespace mbd {

int phi(const BDKernel& k, int i, double u) {
  if (!(u > 0.0 && u < 1.0)) throw std::domain_error("phi: u must lie in the open interval (0,1)");
  if (i < 0 || i > k.size_n()) throw std::out_of_range("phi: state " + std::to_string(i) + " out of range");
  return phi_unchecked(k, i, u);
}

Envelope step_envelope(const BDKernel& k, Envelope e, double u) {
  if (e.lo > e.hi) throw std::invalid_argument("step_envelope: lo > hi");
  return {phi(k, e.lo, u), phi(k, e.hi, u)};
}

CoalescenceOutcome simulate_coalescence(const BDKernel& k, UniformStream& stream, std::uint64_t max_steps) {
  if (max_steps < 1) throw std::invalid_argument("simulate_coalescence: max_steps must be >= 1");
  if (k.size_n() == 0) return Coalesced{0, 0};
  Envelope e = full_envelope(k);
  for (std::uint64_t n = 1; n <= max_steps; ++n) {
    e = step_envelope_unchecked(k, e, stream.next());
    if (e.coalesced()) return Coalesced{n, e.lo};
  }
  return TimedOut{max_steps};
}

}  // namespace mbd
