#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace mbd {

// SplitMix64 finalizer, used to derive independent child seeds.
std::uint64_t splitmix64(std::uint64_t x);

// Seed for the `index`-th child stream of `seed` (parallel workers, the
// past buffer of a doubling run, ...).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

// Maps the top 52 random bits k to (k + 0.5) * 2^-52, which is never 0 or 1.
constexpr double open_unit_from_bits(std::uint64_t bits) {
  // Top 52 bits plus one half: the largest value is 1 - 2^-53, which is
  // representable (53 bits would round up to exactly 1).
  constexpr double kScale = 1.0 / 4503599627370496.0;  // 2^-52
  return (static_cast<double>(bits >> 12) + 0.5) * kScale;
}

/// Reproducible stream of uniforms on the open interval (0,1).
///
/// Backed by std::mt19937_64, whose output sequence is fixed by the C++
/// standard, so a seed determines the stream on every platform.
class UniformStream {
 public:
  explicit UniformStream(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  double next() {
    ++position_;
    return open_unit_from_bits(engine_());
  }

  // Advances by `count` draws without converting them.
  void skip(std::uint64_t count) {
    engine_.discard(count);
    position_ += count;
  }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t position() const { return position_; }

 private:
  std::uint64_t seed_;
  std::uint64_t position_ = 0;
  std::mt19937_64 engine_;
};

/// Uniforms indexed by negative time m in {-t..-1}, revealed lazily.
///
/// Values are generated in order of decreasing index (U_-1 first) from a
/// dedicated stream, so the map m -> U_m is fixed by the seed: reaching
/// further into the past never rewrites what was already revealed.
class PastBuffer {
 public:
  explicit PastBuffer(std::uint64_t seed) : stream_(seed) {}

  // U_m for m < 0. Throws std::out_of_range for m >= 0.
  double get(std::int64_t m);

  // Number of revealed values (the current look-back depth).
  std::size_t size() const { return store_.size(); }

  // Drops the revealed past so the next sample sees fresh uniforms; the
  // generator keeps its position, so successive samples are independent.
  void clear() { store_.clear(); }

  const UniformStream& stream() const { return stream_; }

 private:
  UniformStream stream_;
  std::vector<double> store_;  // store_[k] = U_{-(k+1)}
};

}  // namespace mbd
