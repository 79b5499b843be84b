#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace smax {

using Bit = std::uint8_t;

/// Number of digits compared between two agent sequences before the pair is
/// declared a tie.
inline constexpr std::size_t kDefaultComparisonCap = 4096;

/// Two agent sequences agreed on every digit up to the comparison cap.
class TieError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Finite binary sequence, most significant digit first.
///
/// Digits are packed 64 per word; digit k lives in bit (63 - k % 64) of word
/// k / 64 so that packed words compare like the dyadic rationals they encode.
/// Bits past size() are always zero.
class Estimate {
 public:
  Estimate() = default;
  explicit Estimate(std::span<const Bit> digits);

  /// Parses a string of '0'/'1' characters. The empty string is the empty
  /// sequence.
  static Estimate from_string(std::string_view bits);

  std::size_t size() const noexcept { return length_; }
  bool empty() const noexcept { return length_ == 0; }

  Bit operator[](std::size_t k) const;
  Bit back() const;

  void push_back(Bit b);
  void pop_back();

  Estimate appended(Bit b) const;
  /// Copy with the last digit removed; the empty sequence stays empty.
  Estimate without_last() const;

  std::size_t word_count() const noexcept { return words_.size(); }
  std::uint64_t word(std::size_t j) const noexcept {
    return j < words_.size() ? words_[j] : 0;
  }

  std::string to_string() const;

  friend bool operator==(const Estimate&, const Estimate&) = default;

 private:
  std::vector<std::uint64_t> words_;
  std::size_t length_ = 0;
};

/// Conceptually infinite binary input of one agent: an explicit prefix followed
/// by uniform digits derived deterministically from a seed.
///
/// Tail digits are a pure function of (seed, index), computed on demand, so a
/// shared const instance may be read from any number of threads.
class AgentSequence {
 public:
  explicit AgentSequence(std::uint64_t tail_seed) : tail_seed_(tail_seed) {}
  AgentSequence(Estimate prefix, std::uint64_t tail_seed)
      : prefix_(std::move(prefix)), tail_seed_(tail_seed) {}
  AgentSequence(std::span<const Bit> prefix, std::uint64_t tail_seed)
      : prefix_(prefix), tail_seed_(tail_seed) {}

  Bit digit(std::size_t k) const noexcept {
    return static_cast<Bit>((word(k / 64) >> (63 - k % 64)) & 1U);
  }

  /// Digits 64j .. 64j+63 packed most significant first.
  std::uint64_t word(std::size_t j) const noexcept;

  /// The first `length` digits as a finite sequence.
  Estimate prefix(std::size_t length) const;

  const Estimate& explicit_prefix() const noexcept { return prefix_; }
  std::size_t prefix_length() const noexcept { return prefix_.size(); }
  std::uint64_t tail_seed() const noexcept { return tail_seed_; }

 private:
  Estimate prefix_;
  std::uint64_t tail_seed_;
};

/// Position of an infinite sequence relative to a finite one, judged on the
/// first size() digits.
enum class PrefixOrder { below, compatible, above };

PrefixOrder compare_prefix(const AgentSequence& x, const Estimate& s) noexcept;

/// x > S: some digit of x exceeds S after an equal run.
inline bool is_gt(const AgentSequence& x, const Estimate& s) noexcept {
  return compare_prefix(x, s) == PrefixOrder::above;
}

/// x >= S: x is compatible with S or greater.
inline bool is_geq(const AgentSequence& x, const Estimate& s) noexcept {
  return compare_prefix(x, s) != PrefixOrder::below;
}

/// Index of the first digit where a and b differ.
/// Throws TieError when no difference exists below `cap`.
std::size_t first_difference(const AgentSequence& a, const AgentSequence& b,
                             std::size_t cap = kDefaultComparisonCap);

/// Lexicographic comparison of two infinite sequences: negative if a < b,
/// positive if a > b. Throws TieError past `cap`.
int compare(const AgentSequence& a, const AgentSequence& b,
            std::size_t cap = kDefaultComparisonCap);

/// Index of the lexicographically greatest agent. Throws std::invalid_argument
/// on an empty list and TieError on a pathological tie.
std::size_t true_max_index(std::span<const AgentSequence> agents,
                           std::size_t cap = kDefaultComparisonCap);

}  // namespace smax
