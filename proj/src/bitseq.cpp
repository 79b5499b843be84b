#include "smax/bitseq.hpp"

#include <bit>

#include "smax/seeding.hpp"

namespace smax {

namespace {

constexpr std::uint64_t top_mask(std::size_t bits) noexcept {
  return bits == 0 ? 0 : (bits >= 64 ? ~0ULL : ~0ULL << (64 - bits));
}

std::uint64_t tail_word(std::uint64_t seed, std::size_t j) noexcept {
  return hash_combine(seed, static_cast<std::uint64_t>(j));
}

}  // namespace

Estimate::Estimate(std::span<const Bit> digits) {
  words_.reserve((digits.size() + 63) / 64);
  for (Bit b : digits) push_back(b);
}

Estimate Estimate::from_string(std::string_view bits) {
  Estimate e;
  for (char c : bits) {
    if (c != '0' && c != '1') {
      throw std::invalid_argument("estimate digits must be '0' or '1', got '" +
                                  std::string(bits) + "'");
    }
    e.push_back(c == '1' ? 1 : 0);
  }
  return e;
}

Bit Estimate::operator[](std::size_t k) const {
  if (k >= length_) throw std::out_of_range("estimate digit index out of range");
  return static_cast<Bit>((words_[k / 64] >> (63 - k % 64)) & 1U);
}

Bit Estimate::back() const {
  if (empty()) throw std::out_of_range("back() on empty estimate");
  return (*this)[length_ - 1];
}

void Estimate::push_back(Bit b) {
  if (b > 1) throw std::invalid_argument("digit must be 0 or 1");
  if (length_ % 64 == 0) words_.push_back(0);
  if (b) words_.back() |= 1ULL << (63 - length_ % 64);
  ++length_;
}

void Estimate::pop_back() {
  if (empty()) throw std::out_of_range("pop_back() on empty estimate");
  --length_;
  if (length_ % 64 == 0) {
    words_.pop_back();
  } else {
    words_.back() &= top_mask(length_ % 64);
  }
}

Estimate Estimate::appended(Bit b) const {
  Estimate e = *this;
  e.push_back(b);
  return e;
}

Estimate Estimate::without_last() const {
  Estimate e = *this;
  if (!e.empty()) e.pop_back();
  return e;
}

std::string Estimate::to_string() const {
  std::string s;
  s.reserve(length_);
  for (std::size_t k = 0; k < length_; ++k) s.push_back((*this)[k] ? '1' : '0');
  return s;
}

std::uint64_t AgentSequence::word(std::size_t j) const noexcept {
  const std::size_t p = prefix_.size();
  const std::size_t begin = j * 64;
  if (begin + 64 <= p) return prefix_.word(j);
  if (begin >= p) return tail_word(tail_seed_, j);
  const std::uint64_t keep = top_mask(p - begin);
  return (prefix_.word(j) & keep) | (tail_word(tail_seed_, j) & ~keep);
}

Estimate AgentSequence::prefix(std::size_t length) const {
  Estimate e;
  for (std::size_t k = 0; k < length; ++k) e.push_back(digit(k));
  return e;
}

PrefixOrder compare_prefix(const AgentSequence& x, const Estimate& s) noexcept {
  const std::size_t full = s.size() / 64;
  for (std::size_t j = 0; j < full; ++j) {
    const std::uint64_t xw = x.word(j);
    const std::uint64_t sw = s.word(j);
    if (xw != sw) return xw > sw ? PrefixOrder::above : PrefixOrder::below;
  }
  const std::size_t rem = s.size() % 64;
  if (rem != 0) {
    const std::uint64_t xw = x.word(full) & top_mask(rem);
    const std::uint64_t sw = s.word(full);
    if (xw != sw) return xw > sw ? PrefixOrder::above : PrefixOrder::below;
  }
  return PrefixOrder::compatible;
}

std::size_t first_difference(const AgentSequence& a, const AgentSequence& b,
                             std::size_t cap) {
  for (std::size_t j = 0; j * 64 < cap; ++j) {
    const std::uint64_t diff = a.word(j) ^ b.word(j);
    if (diff != 0) {
      const std::size_t k = j * 64 + static_cast<std::size_t>(std::countl_zero(diff));
      if (k < cap) return k;
      break;
    }
  }
  throw TieError("agent sequences agree on the first " + std::to_string(cap) +
                 " digits");
}

int compare(const AgentSequence& a, const AgentSequence& b, std::size_t cap) {
  const std::size_t k = first_difference(a, b, cap);
  return a.digit(k) > b.digit(k) ? 1 : -1;
}

std::size_t true_max_index(std::span<const AgentSequence> agents, std::size_t cap) {
  if (agents.empty()) throw std::invalid_argument("true_max_index on empty agent list");
  std::size_t best = 0;
  for (std::size_t i = 1; i < agents.size(); ++i) {
    if (compare(agents[i], agents[best], cap) > 0) best = i;
  }
  return best;
}

}  // namespace smax
