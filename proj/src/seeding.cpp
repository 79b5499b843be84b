#include "smax/seeding.hpp"

namespace smax {

std::uint64_t stream_seed(std::uint64_t base_seed, std::uint64_t run_index,
                          StreamTag tag) noexcept {
  return hash_combine(hash_combine(splitmix64(base_seed), run_index),
                      static_cast<std::uint64_t>(tag));
}

}  // namespace smax
