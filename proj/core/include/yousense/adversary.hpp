#ifndef YOUSENSE_ADVERSARY_HPP
#define YOUSENSE_ADVERSARY_HPP

#include <cstddef>
#include <span>

#include "yousense/bit_vector.hpp"
#include "yousense/otp.hpp"
#include "yousense/random.hpp"
#include "yousense/spectrum.hpp"

namespace yousense {

/// What a selfish user extracted from one intercepted ciphertext.
struct AttackOutcome {
  ChannelStates guessed_states;  ///< belief about the true channel states (M bits)
  Pad guessed_pad;
  bool pad_recovered = false;  ///< set by grade()
  std::size_t channels_sensed = 0;

  /// Records whether the guessed pad is the pad actually used.
  void grade(const Pad& actual) { pad_recovered = guessed_pad == actual; }
};

/// Exhaustive entropy selfishness: forwards one observed ciphertext
/// (chosen uniformly) as its own, flipping each bit with probability
/// `modification`. With nothing observed it emits `length` uniform bits.
[[nodiscard]] Ciphertext ees_act(std::span<const Ciphertext> observed, std::size_t length,
                                 UserId self, double modification, Rng& rng);

/// Best effort of a user that sensed nothing: a uniform pad guess from the
/// public subset, and per-channel MAP state guesses from the ciphertext bit,
/// the prior p1, the subset's xi profile, and the sender's detector
/// statistics. Exact posterior ties are broken uniformly.
[[nodiscard]] AttackOutcome ees_decode_attempt(const Ciphertext& observed, const PadSubset& subset,
                                               double p1, const DetectorProfile& sender,
                                               Rng& rng);

/// Partial entropy selfishness: only channels in `sensed_mask` were sensed
/// (`partial_report` is meaningful there). Runs the weighted vote restricted
/// to sensed bits; blocks with no sensed bit end up uniformly guessed.
/// `sensed_mask` may be channels() or padded_length() bits; a channel-length
/// mask also covers the extension bits that repeat sensed channels.
[[nodiscard]] AttackOutcome pes_act(const BitVector& sensed_mask,
                                    const SensingReport& partial_report,
                                    const Ciphertext& ciphertext, const PadSubset& subset,
                                    Rng& rng);

/// History-based attack: recovery with the report sensed in the previous
/// slot standing in for a fresh one.
[[nodiscard]] AttackOutcome history_act(const SensingReport& previous_round_report,
                                        const Ciphertext& ciphertext, const PadSubset& subset,
                                        Rng& rng);

}  // namespace yousense

#endif  // YOUSENSE_ADVERSARY_HPP
