#ifndef YOUSENSE_OTP_HPP
#define YOUSENSE_OTP_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "yousense/bit_vector.hpp"
#include "yousense/random.hpp"
#include "yousense/spectrum.hpp"

namespace yousense {

using UserId = std::uint32_t;

/// Published one-time-pad ciphertext: report XOR pad.
struct Ciphertext {
  BitVector bits;
  UserId sender = 0;

  friend bool operator==(const Ciphertext&, const Ciphertext&) = default;
};

/// Contiguous slice [offset, offset + length) of a pad.
struct PadBlock {
  std::size_t offset = 0;
  std::size_t length = 0;

  friend bool operator==(const PadBlock&, const PadBlock&) = default;
};

/// The openly known candidate pad set.
///
/// Two representations share one interface:
///  - a block product: every pad whose block l equals either base<l> or
///    ~base<l>, independently per block (2^blocks members, never
///    materialized);
///  - an explicit list of distinct pads.
/// Either way members are indexed in canonical (lexicographic bit-string)
/// order, so every party numbers them identically.
///
/// `padded_length()` is the pad length on the wire. It exceeds `channels()`
/// only when the block length does not divide the channel count; reports
/// are then extended by repeating their leading bits (see extend_report).
class PadSubset {
public:
  /// Largest block count a block product may have.
  static constexpr std::size_t kMaxBlocks = 62;

  /// Explicit subset with a single block spanning the whole pad.
  static PadSubset from_pads(std::vector<Pad> pads);
  static PadSubset from_pads(std::vector<Pad> pads, std::size_t channels,
                             std::vector<PadBlock> blocks, std::size_t block_length);
  static PadSubset block_product(Pad base, std::size_t channels, std::vector<PadBlock> blocks,
                                 std::size_t block_length);

  [[nodiscard]] std::uint64_t size() const noexcept;
  [[nodiscard]] Pad pad(std::uint64_t index) const;
  /// Every member in canonical order. Throws std::length_error when the
  /// subset is too large to list (more than 2^20 members).
  [[nodiscard]] std::vector<Pad> pads() const;

  [[nodiscard]] std::size_t channels() const noexcept { return channels_; }
  [[nodiscard]] std::size_t padded_length() const noexcept { return length_; }
  [[nodiscard]] std::size_t block_length() const noexcept { return block_length_; }
  [[nodiscard]] std::size_t num_blocks() const noexcept { return blocks_.size(); }
  [[nodiscard]] const std::vector<PadBlock>& blocks() const noexcept { return blocks_; }

  [[nodiscard]] bool is_block_product() const noexcept { return base_.has_value(); }
  /// Base pad of a block product (the canonical first member).
  [[nodiscard]] const Pad& base() const;

  [[nodiscard]] std::optional<std::uint64_t> index_of(const Pad& pad) const;
  [[nodiscard]] bool contains(const Pad& pad) const { return index_of(pad).has_value(); }

  /// Every member's complement is also a member (secure-pair closure).
  [[nodiscard]] bool complement_closed() const;

  /// Comma-separated canonical bit strings.
  [[nodiscard]] std::string to_string() const;

private:
  PadSubset() = default;

  std::size_t channels_ = 0;
  std::size_t length_ = 0;
  std::size_t block_length_ = 0;
  std::vector<PadBlock> blocks_;
  std::optional<Pad> base_;
  std::vector<Pad> pads_;
};

/// Parses a subset from bit strings separated by commas or whitespace.
[[nodiscard]] PadSubset parse_subset(std::string_view text);

/// Contiguous blocks of `block_length` bits covering `length` bits.
[[nodiscard]] std::vector<PadBlock> contiguous_blocks(std::size_t length, std::size_t block_length);

/// Uniformly random pad of `length` bits.
[[nodiscard]] Pad generate_pad(std::size_t length, Rng& rng);

/// Interleaved secure-pair subset with block length `block_length`, built
/// around a fresh random base pad. When the block length does not divide
/// `channels`, pads are generated at block_length * ceil(channels /
/// block_length) bits.
[[nodiscard]] PadSubset generate_subset(std::size_t channels, std::size_t block_length, Rng& rng);

/// Same construction around a caller-supplied base pad.
[[nodiscard]] PadSubset subset_from_base(const Pad& base, std::size_t channels,
                                         std::size_t block_length);

/// Subset holding exactly `pairs` secure pairs drawn from the block
/// structure of an interleaved subset: the pad length is split into the
/// fewest near-equal blocks b with 2^(b-1) >= pairs, and the first `pairs`
/// block-flip patterns (plus complements) are kept. Power-of-two pair counts
/// give the full interleaved subset.
[[nodiscard]] PadSubset generate_paired_subset(std::size_t channels, std::size_t pairs, Rng& rng);

/// Extends a report to `padded_length` bits by repeating its leading bits.
[[nodiscard]] SensingReport extend_report(const SensingReport& report, std::size_t padded_length);

struct Encryption {
  Ciphertext ciphertext;
  Pad pad;  ///< sender-private
};

/// Picks a pad uniformly from `subset` and publishes report XOR pad. The
/// report may be `channels()` or `padded_length()` bits long.
[[nodiscard]] Encryption encrypt_report(const SensingReport& report, const PadSubset& subset,
                                        Rng& rng, UserId sender = 0);

/// Bitwise XOR; throws std::invalid_argument on length mismatch.
[[nodiscard]] SensingReport decrypt(const Ciphertext& ciphertext, const Pad& pad);

/// Decrypts and drops the padding extension.
[[nodiscard]] SensingReport decrypt_report(const Ciphertext& ciphertext, const Pad& pad,
                                           std::size_t channels);

enum class VoteWeighting {
  unit,            ///< +1 per agreeing bit
  log_likelihood,  ///< +log(eta_i / (1 - eta_i)) per agreeing bit
};

struct RecoveryOptions {
  VoteWeighting weighting = VoteWeighting::unit;
  /// Per-bit agreement probabilities, required for log_likelihood. Either
  /// channels() or padded_length() entries.
  std::span<const double> eta;
  /// Only bits set in the mask vote. Null means every bit votes.
  const BitVector* mask = nullptr;
};

/// Weighted-vote pad recovery from the recipient's own report: each bit i
/// votes for the members whose bit equals own_i XOR cipher_i. Returns a
/// maximum-weight member, breaking ties uniformly at random.
[[nodiscard]] Pad recover_pad(const SensingReport& own_report, const Ciphertext& ciphertext,
                              const PadSubset& subset, Rng& rng, const RecoveryOptions& options = {});

/// Probability that `candidate` is the sender's pad when each report bit
/// agrees with the sender's with probability eta_i.
[[nodiscard]] double pad_posterior(const SensingReport& own_report, const Ciphertext& ciphertext,
                                   std::span<const double> eta, const Pad& candidate);

/// eta_i = P(R_i^x == R_i^y) for two independent detectors on channel i with
/// occupancy prior p1.
[[nodiscard]] double agreement_probability(const DetectorProfile& x, const DetectorProfile& y,
                                           double p1, std::size_t channel);

/// P(at least ceil(n/2) of n independent agreements), n = eta.size().
[[nodiscard]] double predict_success_rate(std::span<const double> eta);
[[nodiscard]] double predict_success_rate(std::size_t block_length, double eta);

/// Smallest odd block length whose predicted success reaches `target`.
/// Throws std::domain_error when eta <= 0.5 or the target is outside (0,1).
[[nodiscard]] std::size_t invert_success_rate(double target, double eta);

/// ceil(omega * block_length), clamped to [1, channels]. Requires omega >= 1.
[[nodiscard]] std::size_t scale_block_length(std::size_t block_length, double omega,
                                             std::size_t channels);

}  // namespace yousense

#endif  // YOUSENSE_OTP_HPP
