#ifndef YOUSENSE_SPECTRUM_HPP
#define YOUSENSE_SPECTRUM_HPP

#include <cstddef>
#include <vector>

#include "yousense/bit_vector.hpp"
#include "yousense/random.hpp"

namespace yousense {

/// Exponential ON-OFF occupancy process for each of M channels.
///
/// ON sojourns are exponential with rate `rate_on[i]` and OFF sojourns with
/// rate `rate_off[i]`, in the same time unit as `slot_period`.
struct ChannelModel {
  std::size_t num_channels = 0;
  std::vector<double> rate_on;
  std::vector<double> rate_off;
  double slot_period = 0.0;

  /// All channels share one pair of rates.
  static ChannelModel uniform(std::size_t channels, double rate_on, double rate_off,
                              double slot_period);

  /// Throws std::invalid_argument when any invariant is violated.
  void validate() const;
};

/// One-slot transition probabilities of the two-state chain for a channel.
struct SlotTransition {
  double stay_on = 1.0;   ///< P(ON at t+slot | ON at t)
  double stay_off = 1.0;  ///< P(OFF at t+slot | OFF at t)
};

/// Long-run fraction of time channel `channel` is ON:
/// (1/rate_on) / (1/rate_on + 1/rate_off).
[[nodiscard]] double stationary_occupancy(const ChannelModel& model, std::size_t channel = 0);

[[nodiscard]] SlotTransition slot_transition(const ChannelModel& model, std::size_t channel);

/// Stationary probability that the channel state is unchanged one slot later.
[[nodiscard]] double persistence_probability(const ChannelModel& model, std::size_t channel = 0);

/// Fresh draw from the stationary distribution, independently per channel.
[[nodiscard]] ChannelStates sample_states(const ChannelModel& model, Rng& rng);

/// Evolves `previous` by one slot of the continuous-time process.
[[nodiscard]] ChannelStates sample_states(const ChannelModel& model,
                                          const ChannelStates& previous, Rng& rng);

/// Per-channel detector error rates of one secondary user.
struct DetectorProfile {
  std::vector<double> false_alarm;  ///< P(report 1 | channel idle)
  std::vector<double> miss;         ///< P(report 0 | channel busy)

  static DetectorProfile uniform(std::size_t channels, double false_alarm, double miss);
  static DetectorProfile perfect(std::size_t channels) { return uniform(channels, 0.0, 0.0); }

  [[nodiscard]] std::size_t size() const noexcept { return false_alarm.size(); }
  [[nodiscard]] double detection(std::size_t channel) const { return 1.0 - miss.at(channel); }
  void validate() const;
};

/// Probability a detector reports `bit` on `channel` given the true state.
[[nodiscard]] double report_probability(const DetectorProfile& profile, std::size_t channel,
                                        bool state, bool bit);

/// Imperfect sensing of `truth`: idle channels flip with p_f, busy with p_m.
[[nodiscard]] SensingReport sense(const ChannelStates& truth, const DetectorProfile& profile,
                                  Rng& rng);

}  // namespace yousense

#endif  // YOUSENSE_SPECTRUM_HPP
