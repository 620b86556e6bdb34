#ifndef YOUSENSE_BIT_VECTOR_HPP
#define YOUSENSE_BIT_VECTOR_HPP

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace yousense {

/// Fixed-length binary vector, bit-packed into 64-bit words.
///
/// Bit 0 is the first channel. The canonical text form lists bits in index
/// order ("1001" has bits 0 and 3 set), so ordering by `operator<=>` matches
/// string ordering of the text form. Unused high bits of the last word are
/// always zero.
class BitVector {
public:
  BitVector() = default;
  explicit BitVector(std::size_t size, bool value = false);

  /// Parses a string of '0'/'1' characters. Throws std::invalid_argument on
  /// any other character.
  static BitVector from_string(std::string_view text);

  [[nodiscard]] std::size_t size() const noexcept { return size_; }
  [[nodiscard]] bool empty() const noexcept { return size_ == 0; }

  [[nodiscard]] bool get(std::size_t index) const;
  [[nodiscard]] bool operator[](std::size_t index) const { return get(index); }
  void set(std::size_t index, bool value);
  void flip(std::size_t index);

  /// Number of set bits.
  [[nodiscard]] std::size_t count() const noexcept;

  /// Bits [offset, offset + length).
  [[nodiscard]] BitVector slice(std::size_t offset, std::size_t length) const;
  [[nodiscard]] BitVector prefix(std::size_t length) const { return slice(0, length); }

  BitVector& operator^=(const BitVector& other);
  BitVector& operator&=(const BitVector& other);
  BitVector& operator|=(const BitVector& other);
  /// Bitwise complement (within size()).
  [[nodiscard]] BitVector operator~() const;

  [[nodiscard]] std::string to_string() const;

  /// Packed wire form: 4-byte big-endian bit count followed by
  /// ceil(size/8) payload bytes; bit i lives in byte i/8 under mask
  /// 0x80 >> (i % 8). Padding bits are zero.
  [[nodiscard]] std::vector<std::uint8_t> to_packed() const;
  /// Decodes one packed vector from the front of `bytes`; `consumed`
  /// receives the number of bytes read. Throws std::invalid_argument on
  /// truncation or nonzero padding.
  static BitVector from_packed(std::span<const std::uint8_t> bytes, std::size_t& consumed);
  static BitVector from_packed(std::span<const std::uint8_t> bytes);

  [[nodiscard]] std::span<const std::uint64_t> words() const noexcept { return words_; }

  friend bool operator==(const BitVector&, const BitVector&) = default;
  friend std::strong_ordering operator<=>(const BitVector& a, const BitVector& b);

private:
  void clear_padding() noexcept;
  void require_same_size(const BitVector& other) const;

  std::size_t size_ = 0;
  std::vector<std::uint64_t> words_;
};

[[nodiscard]] BitVector operator^(BitVector a, const BitVector& b);
[[nodiscard]] BitVector operator&(BitVector a, const BitVector& b);
[[nodiscard]] BitVector operator|(BitVector a, const BitVector& b);

/// Number of positions where `a` and `b` differ.
[[nodiscard]] std::size_t hamming_distance(const BitVector& a, const BitVector& b);

/// Number of positions inside `mask` where `a` and `b` agree.
[[nodiscard]] std::size_t masked_agreement(const BitVector& a, const BitVector& b,
                                           const BitVector& mask);

/// Concatenation [a, b].
[[nodiscard]] BitVector concat(const BitVector& a, const BitVector& b);

// Domain aliases. All are length-M binary vectors over the channel index.
using ChannelStates = BitVector;  ///< 1 = ON/occupied, 0 = OFF/idle
using SensingReport = BitVector;  ///< per-channel busy/idle decision
using Pad = BitVector;            ///< one-time pad key

}  // namespace yousense

#endif  // YOUSENSE_BIT_VECTOR_HPP
