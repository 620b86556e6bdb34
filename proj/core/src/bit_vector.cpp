#include "yousense/bit_vector.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace yousense {

namespace {

constexpr std::size_t kWordBits = 64;

std::size_t word_count(std::size_t bits) { return (bits + kWordBits - 1) / kWordBits; }

}  // namespace

BitVector::BitVector(std::size_t size, bool value)
    : size_(size), words_(word_count(size), value ? ~std::uint64_t{0} : 0) {
  clear_padding();
}

BitVector BitVector::from_string(std::string_view text) {
  BitVector out(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '1') {
      out.set(i, true);
    } else if (text[i] != '0') {
      throw std::invalid_argument("bit string may contain only '0' and '1': \"" +
                                  std::string(text) + "\"");
    }
  }
  return out;
}

bool BitVector::get(std::size_t index) const {
  if (index >= size_) throw std::out_of_range("BitVector index out of range");
  return (words_[index / kWordBits] >> (index % kWordBits)) & 1U;
}

void BitVector::set(std::size_t index, bool value) {
  if (index >= size_) throw std::out_of_range("BitVector index out of range");
  const std::uint64_t mask = std::uint64_t{1} << (index % kWordBits);
  if (value) {
    words_[index / kWordBits] |= mask;
  } else {
    words_[index / kWordBits] &= ~mask;
  }
}

void BitVector::flip(std::size_t index) {
  if (index >= size_) throw std::out_of_range("BitVector index out of range");
  words_[index / kWordBits] ^= std::uint64_t{1} << (index % kWordBits);
}

std::size_t BitVector::count() const noexcept {
  std::size_t total = 0;
  for (auto w : words_) total += static_cast<std::size_t>(std::popcount(w));
  return total;
}

BitVector BitVector::slice(std::size_t offset, std::size_t length) const {
  if (offset > size_ || length > size_ - offset) {
    throw std::out_of_range("BitVector slice out of range");
  }
  BitVector out(length);
  for (std::size_t i = 0; i < length; ++i) {
    if (get(offset + i)) out.set(i, true);
  }
  return out;
}

BitVector& BitVector::operator^=(const BitVector& other) {
  require_same_size(other);
  for (std::size_t w = 0; w < words_.size(); ++w) words_[w] ^= other.words_[w];
  return *this;
}

BitVector& BitVector::operator&=(const BitVector& other) {
  require_same_size(other);
  for (std::size_t w = 0; w < words_.size(); ++w) words_[w] &= other.words_[w];
  return *this;
}

BitVector& BitVector::operator|=(const BitVector& other) {
  require_same_size(other);
  for (std::size_t w = 0; w < words_.size(); ++w) words_[w] |= other.words_[w];
  return *this;
}

BitVector BitVector::operator~() const {
  BitVector out = *this;
  for (auto& w : out.words_) w = ~w;
  out.clear_padding();
  return out;
}

std::string BitVector::to_string() const {
  std::string out(size_, '0');
  for (std::size_t i = 0; i < size_; ++i) {
    if (get(i)) out[i] = '1';
  }
  return out;
}

std::vector<std::uint8_t> BitVector::to_packed() const {
  if (size_ > 0xFFFFFFFFULL) throw std::length_error("BitVector too long to pack");
  std::vector<std::uint8_t> out;
  out.reserve(4 + (size_ + 7) / 8);
  const auto n = static_cast<std::uint32_t>(size_);
  out.push_back(static_cast<std::uint8_t>(n >> 24));
  out.push_back(static_cast<std::uint8_t>(n >> 16));
  out.push_back(static_cast<std::uint8_t>(n >> 8));
  out.push_back(static_cast<std::uint8_t>(n));
  out.resize(4 + (size_ + 7) / 8, 0);
  for (std::size_t i = 0; i < size_; ++i) {
    if (get(i)) out[4 + i / 8] |= static_cast<std::uint8_t>(0x80U >> (i % 8));
  }
  return out;
}

BitVector BitVector::from_packed(std::span<const std::uint8_t> bytes, std::size_t& consumed) {
  if (bytes.size() < 4) throw std::invalid_argument("packed bit vector: truncated header");
  const std::size_t n = (std::size_t{bytes[0]} << 24) | (std::size_t{bytes[1]} << 16) |
                        (std::size_t{bytes[2]} << 8) | std::size_t{bytes[3]};
  const std::size_t payload = (n + 7) / 8;
  if (bytes.size() - 4 < payload) throw std::invalid_argument("packed bit vector: truncated payload");
  BitVector out(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (bytes[4 + i / 8] & (0x80U >> (i % 8))) out.set(i, true);
  }
  if (n % 8 != 0) {
    const auto pad_mask = static_cast<std::uint8_t>(0xFFU >> (n % 8));
    if (bytes[4 + payload - 1] & pad_mask) {
      throw std::invalid_argument("packed bit vector: nonzero padding bits");
    }
  }
  consumed = 4 + payload;
  return out;
}

BitVector BitVector::from_packed(std::span<const std::uint8_t> bytes) {
  std::size_t consumed = 0;
  auto out = from_packed(bytes, consumed);
  if (consumed != bytes.size()) throw std::invalid_argument("packed bit vector: trailing bytes");
  return out;
}

std::strong_ordering operator<=>(const BitVector& a, const BitVector& b) {
  // Padding bits are zero, so the first differing word locates the first
  // differing bit; beyond the shared length only the sizes matter.
  const std::size_t shared = std::min(a.size_, b.size_);
  const std::size_t common = std::min(a.words_.size(), b.words_.size());
  for (std::size_t w = 0; w < common; ++w) {
    const std::uint64_t diff = a.words_[w] ^ b.words_[w];
    if (diff == 0) continue;
    const std::size_t bit = w * kWordBits + static_cast<std::size_t>(std::countr_zero(diff));
    if (bit >= shared) break;
    return ((a.words_[w] >> (bit % kWordBits)) & 1U) ? std::strong_ordering::greater
                                                        : std::strong_ordering::less;
  }
  return a.size_ <=> b.size_;
}

void BitVector::clear_padding() noexcept {
  if (size_ % kWordBits != 0 && !words_.empty()) {
    words_.back() &= (std::uint64_t{1} << (size_ % kWordBits)) - 1;
  }
}

void BitVector::require_same_size(const BitVector& other) const {
  if (size_ != other.size_) {
    throw std::invalid_argument("BitVector length mismatch: " + std::to_string(size_) + " vs " +
                                std::to_string(other.size_));
  }
}

BitVector operator^(BitVector a, const BitVector& b) { return a ^= b; }
BitVector operator&(BitVector a, const BitVector& b) { return a &= b; }
BitVector operator|(BitVector a, const BitVector& b) { return a |= b; }

std::size_t hamming_distance(const BitVector& a, const BitVector& b) {
  if (a.size() != b.size()) throw std::invalid_argument("hamming_distance: length mismatch");
  std::size_t total = 0;
  const auto wa = a.words();
  const auto wb = b.words();
  for (std::size_t w = 0; w < wa.size(); ++w) {
    total += static_cast<std::size_t>(std::popcount(wa[w] ^ wb[w]));
  }
  return total;
}

std::size_t masked_agreement(const BitVector& a, const BitVector& b, const BitVector& mask) {
  if (a.size() != b.size() || a.size() != mask.size()) {
    throw std::invalid_argument("masked_agreement: length mismatch");
  }
  std::size_t total = 0;
  const auto wa = a.words();
  const auto wb = b.words();
  const auto wm = mask.words();
  for (std::size_t w = 0; w < wa.size(); ++w) {
    total += static_cast<std::size_t>(std::popcount(~(wa[w] ^ wb[w]) & wm[w]));
  }
  return total;
}

BitVector concat(const BitVector& a, const BitVector& b) {
  BitVector out(a.size() + b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a.get(i)) out.set(i, true);
  }
  for (std::size_t i = 0; i < b.size(); ++i) {
    if (b.get(i)) out.set(a.size() + i, true);
  }
  return out;
}

}  // namespace yousense
