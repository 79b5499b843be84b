#pragma once

#include <cstdint>
#include <random>

namespace smax {

using Rng = std::mt19937_64;

/// SplitMix64 finalizer. Bijective on 64-bit words.
constexpr std::uint64_t splitmix64(std::uint64_t z) noexcept {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t hash_combine(std::uint64_t a, std::uint64_t b) noexcept {
  return splitmix64(a ^ splitmix64(b));
}

/// Independent random streams drawn for each simulation run.
enum class StreamTag : std::uint64_t {
  agents = 1,
  noise = 2,
  gossip = 3,
  topology = 4,
  subrun = 5,
};

/// Seed of stream `tag` for run `run_index` of an experiment.
std::uint64_t stream_seed(std::uint64_t base_seed, std::uint64_t run_index,
                          StreamTag tag) noexcept;

inline Rng make_rng(std::uint64_t base_seed, std::uint64_t run_index, StreamTag tag) {
  return Rng(stream_seed(base_seed, run_index, tag));
}

}  // namespace smax
