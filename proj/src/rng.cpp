#include "mbd/rng.hpp"

#include <stdexcept>
#include <string>

namespace mbd {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  return splitmix64(splitmix64(seed) ^ splitmix64(~index));
}

double PastBuffer::get(std::int64_t m) {
  if (m >= 0) throw std::out_of_range("PastBuffer::get: index must be negative, got " + std::to_string(m));
  const auto k = static_cast<std::size_t>(-(m + 1));
  if (k >= store_.size()) {
    store_.reserve(k + 1);
    while (store_.size() <= k) store_.push_back(stream_.next());
  }
  return store_[k];
}

}  // namespace mbd
