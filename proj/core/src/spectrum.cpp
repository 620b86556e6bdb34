#include "yousense/spectrum.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace yousense {

namespace {

bool is_probability(double p) { return p >= 0.0 && p <= 1.0; }

}  // namespace

ChannelModel ChannelModel::uniform(std::size_t channels, double rate_on, double rate_off,
                                   double slot_period) {
  ChannelModel model{channels, std::vector<double>(channels, rate_on),
                     std::vector<double>(channels, rate_off), slot_period};
  model.validate();
  return model;
}

void ChannelModel::validate() const {
  if (num_channels < 1) throw std::invalid_argument("channel model: need at least one channel");
  if (rate_on.size() != num_channels || rate_off.size() != num_channels) {
    throw std::invalid_argument("channel model: rate vectors must have one entry per channel");
  }
  for (std::size_t i = 0; i < num_channels; ++i) {
    if (!(rate_on[i] > 0.0) || !(rate_off[i] > 0.0) || !std::isfinite(rate_on[i]) ||
        !std::isfinite(rate_off[i])) {
      throw std::invalid_argument("channel model: rates must be positive and finite (channel " +
                                  std::to_string(i) + ")");
    }
  }
  if (!(slot_period > 0.0)) throw std::invalid_argument("channel model: slot_period must be positive");
}

double stationary_occupancy(const ChannelModel& model, std::size_t channel) {
  const double mean_on = 1.0 / model.rate_on.at(channel);
  const double mean_off = 1.0 / model.rate_off.at(channel);
  return mean_on / (mean_on + mean_off);
}

SlotTransition slot_transition(const ChannelModel& model, std::size_t channel) {
  const double p1 = stationary_occupancy(model, channel);
  const double p0 = 1.0 - p1;
  const double total_rate = model.rate_on.at(channel) + model.rate_off.at(channel);
  // exp(-inf) == 0 gives the stationary limit for an infinite slot.
  const double decay = std::exp(-total_rate * model.slot_period);
  return {p1 + p0 * decay, p0 + p1 * decay};
}

double persistence_probability(const ChannelModel& model, std::size_t channel) {
  const double p1 = stationary_occupancy(model, channel);
  const auto t = slot_transition(model, channel);
  return p1 * t.stay_on + (1.0 - p1) * t.stay_off;
}

ChannelStates sample_states(const ChannelModel& model, Rng& rng) {
  ChannelStates states(model.num_channels);
  for (std::size_t i = 0; i < model.num_channels; ++i) {
    states.set(i, bernoulli(rng, stationary_occupancy(model, i)));
  }
  return states;
}

ChannelStates sample_states(const ChannelModel& model, const ChannelStates& previous, Rng& rng) {
  if (previous.size() != model.num_channels) {
    throw std::invalid_argument("sample_states: previous state length does not match channel count");
  }
  ChannelStates states(model.num_channels);
  for (std::size_t i = 0; i < model.num_channels; ++i) {
    const auto t = slot_transition(model, i);
    const bool on = previous.get(i) ? bernoulli(rng, t.stay_on) : !bernoulli(rng, t.stay_off);
    states.set(i, on);
  }
  return states;
}

DetectorProfile DetectorProfile::uniform(std::size_t channels, double false_alarm, double miss) {
  DetectorProfile profile{std::vector<double>(channels, false_alarm),
                          std::vector<double>(channels, miss)};
  profile.validate();
  return profile;
}

void DetectorProfile::validate() const {
  if (false_alarm.size() != miss.size()) {
    throw std::invalid_argument("detector profile: false_alarm and miss lengths differ");
  }
  for (std::size_t i = 0; i < false_alarm.size(); ++i) {
    if (!is_probability(false_alarm[i]) || !is_probability(miss[i])) {
      throw std::invalid_argument("detector profile: probabilities must lie in [0,1] (channel " +
                                  std::to_string(i) + ")");
    }
  }
}

double report_probability(const DetectorProfile& profile, std::size_t channel, bool state,
                          bool bit) {
  const double p_one = state ? 1.0 - profile.miss.at(channel) : profile.false_alarm.at(channel);
  return bit ? p_one : 1.0 - p_one;
}

SensingReport sense(const ChannelStates& truth, const DetectorProfile& profile, Rng& rng) {
  if (truth.size() != profile.size()) {
    throw std::invalid_argument("sense: detector profile length does not match channel count");
  }
  SensingReport report(truth.size());
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const bool busy = truth.get(i);
    const bool error = bernoulli(rng, busy ? profile.miss[i] : profile.false_alarm[i]);
    report.set(i, busy != error);
  }
  return report;
}

}  // namespace yousense
