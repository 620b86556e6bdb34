#include "yousense/simulator.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "yousense/adversary.hpp"
#include "yousense/infoleak.hpp"

namespace yousense {

namespace {

std::uint64_t purpose(StreamPurpose p) { return static_cast<std::uint64_t>(p); }

bool publishes_fresh(const UserSpec& user, bool sensed) {
  return user.role == Role::honest || (user.role == Role::history && sensed);
}

BitVector prefix_mask(std::size_t channels, std::size_t sensed) {
  BitVector mask(channels);
  for (std::size_t i = 0; i < sensed && i < channels; ++i) mask.set(i, true);
  return mask;
}

double ratio(std::uint64_t num, std::uint64_t den) {
  if (den == 0) return std::numeric_limits<double>::quiet_NaN();
  return static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

std::size_t RoundResult::delivered() const {
  std::size_t n = 0;
  for (const auto& row : messages) {
    for (const auto& m : row) n += m.has_value() ? 1 : 0;
  }
  return n;
}

RoundResult run_round(const Scenario& scenario, const PadSubset* subset, RoundState& state,
                      std::uint64_t stream) {
  const bool yousense = scenario.mode == Mode::yousense;
  if (yousense && subset == nullptr) throw std::invalid_argument("run_round: YouSense mode needs a subset");
  const std::size_t m = scenario.num_channels();
  const std::size_t n = scenario.users.size();
  const std::size_t length = yousense ? subset->padded_length() : m;
  const std::uint64_t seed = scenario.seed;
  const std::uint64_t round = state.round;
  const auto& users = scenario.users;
  if (state.last_sensed.size() != n) state.last_sensed.assign(n, std::nullopt);

  RoundResult result;
  result.round = round;

  // Channel evolution.
  {
    Rng rng = make_rng(seed, {stream, round, purpose(StreamPurpose::channels)});
    result.truth = state.previous_truth ? sample_states(scenario.channels, *state.previous_truth, rng)
                                        : sample_states(scenario.channels, rng);
  }

  // Sensing.
  result.reports.assign(n, SensingReport(m));
  result.sensed.assign(n, false);
  for (std::size_t u = 0; u < n; ++u) {
    Rng rng = make_rng(seed, {stream, round, purpose(StreamPurpose::sensing), u});
    const auto& user = users[u];
    switch (user.role) {
      case Role::honest:
        result.reports[u] = sense(result.truth, user.detector, rng);
        result.sensed[u] = true;
        break;
      case Role::pes:
        result.reports[u] = sense(result.truth, user.detector, rng) & prefix_mask(m, user.mask_size);
        break;
      case Role::history:
        if (!state.last_sensed[u] || round % user.history_period == 0) {
          state.last_sensed[u] = sense(result.truth, user.detector, rng);
          result.sensed[u] = true;
        }
        result.reports[u] = *state.last_sensed[u];
        break;
      case Role::ees:
        break;
    }
  }

  // Encryption and exchange; fresh publishers go first so selfish users can
  // copy or crack within the round.
  result.messages.assign(n, std::vector<std::optional<Message>>(n));
  result.published.assign(n, SensingReport());
  const Pad zero_pad(length);
  auto publish = [&](std::size_t u, const SensingReport& plain) {
    result.published[u] = plain;
    Rng rng = make_rng(seed, {stream, round, purpose(StreamPurpose::encryption), u});
    Message msg;
    msg.origin = static_cast<UserId>(u);
    if (yousense) {
      auto enc = encrypt_report(plain, *subset, rng, static_cast<UserId>(u));
      msg.ciphertext = std::move(enc.ciphertext);
      msg.pad = std::move(enc.pad);
    } else {
      msg.ciphertext = Ciphertext{plain, static_cast<UserId>(u)};
      msg.pad = zero_pad;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r != u) result.messages[u][r] = msg;
    }
  };

  std::vector<Message> fresh;
  for (std::size_t u = 0; u < n; ++u) {
    if (publishes_fresh(users[u], result.sensed[u])) {
      publish(u, result.reports[u]);
      fresh.push_back(*result.messages[u][u == 0 ? 1 : 0]);
    }
  }

  // PES and idle history users crack the first fresh publisher and claim the
  // result as their own report.
  for (std::size_t u = 0; u < n; ++u) {
    const auto& user = users[u];
    const bool cracker = user.role == Role::pes || (user.role == Role::history && !result.sensed[u]);
    if (!cracker) continue;
    const Message* source = nullptr;
    for (const auto& f : fresh) {
      if (f.origin != u) {
        source = &f;
        break;
      }
    }
    SensingReport claim = result.reports[u];
    if (source) {
      Rng rng = make_rng(seed, {stream, round, purpose(StreamPurpose::selfish), u, n});
      if (!yousense) {
        claim = source->ciphertext.bits;
        if (user.role == Role::pes) {
          for (std::size_t i = 0; i < user.mask_size; ++i) claim.set(i, result.reports[u].get(i));
        }
      } else if (user.role == Role::pes) {
        claim = pes_act(prefix_mask(m, user.mask_size), result.reports[u], source->ciphertext, *subset, rng)
                    .guessed_states;
      } else {
        claim = history_act(result.reports[u], source->ciphertext, *subset, rng).guessed_states;
      }
    }
    publish(u, claim);
  }

  // Exhaustive selfish users forward a copy of someone else's ciphertext,
  // chosen independently per recipient.
  for (std::size_t u = 0; u < n; ++u) {
    const auto& user = users[u];
    if (user.role != Role::ees) continue;
    const auto& pool = scenario.ees_source == EesSource::current_round ? fresh : state.previous_fresh;
    for (std::size_t r = 0; r < n; ++r) {
      if (r == u) continue;
      Rng rng = make_rng(seed, {stream, round, purpose(StreamPurpose::selfish), u, r});
      std::vector<const Message*> candidates;
      for (const auto& f : pool) {
        if (f.origin != r && f.origin != u) candidates.push_back(&f);
      }
      if (candidates.empty()) {
        for (const auto& f : pool) {
          if (f.origin != u) candidates.push_back(&f);
        }
      }
      Message msg;
      if (candidates.empty()) {
        msg.ciphertext = ees_act({}, length, static_cast<UserId>(u), user.modification, rng);
        msg.pad = zero_pad;
        msg.origin = static_cast<UserId>(u);
      } else {
        const Message& chosen = *candidates[uniform_index(rng, candidates.size())];
        msg.ciphertext = ees_act(std::span(&chosen.ciphertext, 1), length, static_cast<UserId>(u),
                                 user.modification, rng);
        msg.pad = chosen.pad;
        msg.origin = chosen.origin;
      }
      result.messages[u][r] = std::move(msg);
    }
  }

  // Recovery and fusion at every recipient.
  result.recovered.assign(n, std::vector<Pad>(n));
  result.decrypted.assign(n, std::vector<SensingReport>(n));
  result.recovery_success.assign(n, std::vector<bool>(n, false));
  result.fused.assign(n, BitVector(m));
  const double p1 = stationary_occupancy(scenario.channels, 0);
  for (std::size_t r = 0; r < n; ++r) {
    const auto& user = users[r];
    Rng rng = make_rng(seed, {stream, round, purpose(StreamPurpose::recovery), r});
    const bool honest_view = publishes_fresh(user, result.sensed[r]);
    std::vector<SensingReport> inputs;
    if (honest_view && scenario.fusion.include_self) inputs.push_back(result.reports[r]);
    if (!honest_view && user.role != Role::ees) inputs.push_back(result.published[r]);
    for (std::size_t s = 0; s < n; ++s) {
      if (s == r) continue;
      const Message& msg = *result.messages[s][r];
      Pad pad = zero_pad;
      SensingReport plain;
      if (!yousense) {
        plain = msg.ciphertext.bits;
      } else if (honest_view) {
        RecoveryOptions options;
        std::vector<double> eta;
        if (scenario.fusion.weighting == VoteWeighting::log_likelihood) {
          options.weighting = VoteWeighting::log_likelihood;
          for (std::size_t i = 0; i < m; ++i) {
            eta.push_back(agreement_probability(user.detector, users[s].detector,
                                                stationary_occupancy(scenario.channels, i), i));
          }
          options.eta = eta;
        }
        pad = recover_pad(result.reports[r], msg.ciphertext, *subset, rng, options);
        plain = decrypt_report(msg.ciphertext, pad, m);
      } else {
        AttackOutcome outcome;
        switch (user.role) {
          case Role::ees:
            outcome = ees_decode_attempt(msg.ciphertext, *subset, p1, users[s].detector, rng);
            break;
          case Role::pes:
            outcome = pes_act(prefix_mask(m, user.mask_size), result.reports[r], msg.ciphertext, *subset, rng);
            break;
          default:
            outcome = history_act(result.reports[r], msg.ciphertext, *subset, rng);
            break;
        }
        pad = std::move(outcome.guessed_pad);
        plain = std::move(outcome.guessed_states);
      }
      result.recovery_success[r][s] = yousense && pad == msg.pad;
      result.recovered[r][s] = std::move(pad);
      result.decrypted[r][s] = plain;
      inputs.push_back(std::move(plain));
    }
    const FusionRule rule = honest_view ? fusion_rule(scenario, inputs.size()) : FusionRule::majority(inputs.size());
    result.fused[r] = fuse(inputs, rule);
  }

  state.previous_truth = result.truth;
  state.previous_fresh = std::move(fresh);
  ++state.round;
  return result;
}

// --- summary ----------------------------------------------------------------

void SimulationSummary::add(const Scenario& scenario, const RoundResult& round) {
  const auto& users = scenario.users;
  const bool yousense = scenario.mode == Mode::yousense;
  for (std::size_t r = 0; r < users.size(); ++r) {
    const bool honest = users[r].role == Role::honest;
    const bool attacking = users[r].role != Role::honest && !(users[r].role == Role::history && round.sensed[r]);
    if (!honest && !attacking) continue;
    for (std::size_t s = 0; s < users.size(); ++s) {
      if (s == r || users[s].role != Role::honest || !yousense) continue;
      const bool ok = round.recovery_success[r][s];
      if (honest) {
        ++recovery_trials;
        recovery_successes += ok ? 1 : 0;
      } else {
        ++attack_trials;
        attack_successes += ok ? 1 : 0;
      }
    }
    (honest ? this->honest : attacker).add(round.fused[r], round.truth);
  }
  ++rounds;
  messages += round.delivered();
}

void SimulationSummary::merge(const SimulationSummary& other) {
  const double total = static_cast<double>(rounds + other.rounds);
  if (total > 0) {
    masking_level = (masking_level * static_cast<double>(rounds) +
                     other.masking_level * static_cast<double>(other.rounds)) / total;
  }
  recovery_trials += other.recovery_trials;
  recovery_successes += other.recovery_successes;
  attack_trials += other.attack_trials;
  attack_successes += other.attack_successes;
  rounds += other.rounds;
  messages += other.messages;
  honest.merge(other.honest);
  attacker.merge(other.attacker);
}

double SimulationSummary::recovery_rate() const { return ratio(recovery_successes, recovery_trials); }
double SimulationSummary::attack_rate() const { return ratio(attack_successes, attack_trials); }

std::vector<std::pair<std::string, double>> SimulationSummary::metric_values() const {
  const auto h = honest.metrics();
  const auto a = attacker.metrics();
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const bool any_attacker = attacker.channels() > 0;
  return {
      {"rounds", static_cast<double>(rounds)},
      {"recovery_trials", static_cast<double>(recovery_trials)},
      {"recovery_success_rate", recovery_rate()},
      {"false_positive_rate", h.false_positive_rate},
      {"false_negative_rate", h.false_negative_rate},
      {"attack_trials", static_cast<double>(attack_trials)},
      {"attacker_success_rate", attack_rate()},
      {"attacker_false_positive_rate", any_attacker ? a.false_positive_rate : nan},
      {"attacker_false_negative_rate", any_attacker ? a.false_negative_rate : nan},
      {"masking_level", masking_level},
  };
}

Table SimulationSummary::to_table() const {
  Table table({"metric", "value"});
  for (const auto& [name, value] : metric_values()) table.add_row({name, value});
  return table;
}

double scenario_masking_level(const Scenario& scenario, const PadSubset* subset) {
  const UserSpec* sender = nullptr;
  for (const auto& u : scenario.users) {
    if (u.role == Role::honest) {
      sender = &u;
      break;
    }
  }
  if (!sender) return 0.0;
  const std::size_t m = scenario.num_channels();
  std::optional<PadSubset> plain;
  if (scenario.mode == Mode::plaintext || subset == nullptr) {
    plain = PadSubset::from_pads({Pad(m)});
    subset = &*plain;
  }
  double total = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    total += masking_level(*subset, stationary_occupancy(scenario.channels, i), sender->detector, i);
  }
  return total / static_cast<double>(m);
}

// --- simulator --------------------------------------------------------------

Simulator::Simulator(Scenario scenario, std::uint64_t stream)
    : scenario_(std::move(scenario)), stream_(stream) {
  scenario_.validate();
  if (scenario_.mode == Mode::yousense) {
    Rng rng = make_rng(scenario_.seed, {stream_, purpose(StreamPurpose::subset)});
    subset_ = build_subset(scenario_, rng);
  }
}

RoundResult Simulator::step() {
  return run_round(scenario_, subset_ ? &*subset_ : nullptr, state_, stream_);
}

SimulationSummary Simulator::run(const RoundObserver& observer) {
  SimulationSummary summary;
  summary.masking_level = scenario_masking_level(scenario_, subset_ ? &*subset_ : nullptr);
  for (std::size_t t = 0; t < scenario_.rounds; ++t) {
    const RoundResult round = step();
    summary.add(scenario_, round);
    if (observer) observer(round);
  }
  return summary;
}

SimulationSummary simulate(const Scenario& scenario, std::uint64_t stream, const RoundObserver& observer) {
  return Simulator(scenario, stream).run(observer);
}

}  // namespace yousense
