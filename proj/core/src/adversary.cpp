#include "yousense/adversary.hpp"

#include <cmath>
#include <stdexcept>

#include "yousense/infoleak.hpp"

namespace yousense {

Ciphertext ees_act(std::span<const Ciphertext> observed, std::size_t length, UserId self,
                   double modification, Rng& rng) {
  if (observed.empty()) return Ciphertext{generate_pad(length, rng), self};
  Ciphertext forged{observed[uniform_index(rng, observed.size())].bits, self};
  if (modification > 0.0) {
    for (std::size_t i = 0; i < forged.bits.size(); ++i) {
      if (bernoulli(rng, modification)) forged.bits.flip(i);
    }
  }
  return forged;
}

AttackOutcome ees_decode_attempt(const Ciphertext& observed, const PadSubset& subset, double p1,
                                 const DetectorProfile& sender, Rng& rng) {
  if (observed.bits.size() != subset.padded_length()) {
    throw std::invalid_argument("ees_decode_attempt: ciphertext length does not match subset");
  }
  if (sender.size() != subset.channels()) {
    throw std::invalid_argument("ees_decode_attempt: detector profile length does not match subset");
  }
  AttackOutcome out;
  out.guessed_pad = subset.pad(uniform_index(rng, subset.size()));
  out.guessed_states = ChannelStates(subset.channels());
  const auto xi = xi_profile(subset);
  for (std::size_t i = 0; i < subset.channels(); ++i) {
    const bool e = observed.bits.get(i);
    // P(E_i = e | C_i = c) with pad bit 0 w.p. xi_i.
    auto likelihood = [&](bool state) {
      const double same = report_probability(sender, i, state, e);
      return xi[i] * same + (1.0 - xi[i]) * (1.0 - same);
    };
    const double busy = p1 * likelihood(true);
    const double idle = (1.0 - p1) * likelihood(false);
    bool guess;
    if (std::abs(busy - idle) <= 1e-12 * std::max(busy, idle)) {
      guess = (rng() >> 63) != 0;
    } else {
      guess = busy > idle;
    }
    out.guessed_states.set(i, guess);
  }
  return out;
}

AttackOutcome pes_act(const BitVector& sensed_mask, const SensingReport& partial_report,
                      const Ciphertext& ciphertext, const PadSubset& subset, Rng& rng) {
  const std::size_t m = subset.channels();
  const std::size_t length = subset.padded_length();
  BitVector mask;
  if (sensed_mask.size() == length) {
    mask = sensed_mask;
  } else if (sensed_mask.size() == m) {
    mask = extend_report(sensed_mask, length);
  } else {
    throw std::invalid_argument("pes_act: mask length does not match subset");
  }
  const SensingReport own = partial_report.size() == length ? partial_report
                                                           : extend_report(partial_report, length);
  RecoveryOptions options;
  options.mask = &mask;
  AttackOutcome out;
  out.guessed_pad = recover_pad(own, ciphertext, subset, rng, options);
  const SensingReport decoded = decrypt_report(ciphertext, out.guessed_pad, m);
  out.guessed_states = ChannelStates(m);
  for (std::size_t i = 0; i < m; ++i) {
    out.guessed_states.set(i, mask.get(i) ? own.get(i) : decoded.get(i));
    out.channels_sensed += mask.get(i) ? 1 : 0;
  }
  return out;
}

AttackOutcome history_act(const SensingReport& previous_round_report, const Ciphertext& ciphertext,
                          const PadSubset& subset, Rng& rng) {
  AttackOutcome out;
  out.guessed_pad = recover_pad(previous_round_report, ciphertext, subset, rng);
  out.guessed_states = decrypt_report(ciphertext, out.guessed_pad, subset.channels());
  return out;
}

}  // namespace yousense
