#ifndef YOUSENSE_SIMULATOR_HPP
#define YOUSENSE_SIMULATOR_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "yousense/fusion.hpp"
#include "yousense/otp.hpp"
#include "yousense/scenario.hpp"
#include "yousense/table.hpp"

namespace yousense {

/// One delivered message. For forwarded copies `origin` names the user whose
/// ciphertext was copied and `pad` is that user's pad.
struct Message {
  Ciphertext ciphertext;
  Pad pad;  ///< pad actually used (all-zero in plaintext mode)
  UserId origin = 0;
};

/// Everything that happened in one sensing round.
///
/// Matrices indexed [sender][recipient] (messages) or [recipient][sender]
/// (recovered, decrypted, recovery_success); diagonal entries are empty.
struct RoundResult {
  std::size_t round = 0;
  ChannelStates truth;
  std::vector<SensingReport> reports;    ///< what each user knows of the spectrum itself
  std::vector<bool> sensed;              ///< whether the user sensed in this round
  std::vector<SensingReport> published;  ///< plaintext each user encrypted (EES: none)
  std::vector<std::vector<std::optional<Message>>> messages;
  std::vector<std::vector<Pad>> recovered;
  std::vector<std::vector<SensingReport>> decrypted;
  std::vector<std::vector<bool>> recovery_success;
  std::vector<BitVector> fused;

  /// Number of delivered (sender, recipient) messages.
  [[nodiscard]] std::size_t delivered() const;
};

/// State carried between rounds.
struct RoundState {
  std::size_t round = 0;
  std::optional<ChannelStates> previous_truth;
  std::vector<std::optional<SensingReport>> last_sensed;  ///< per user
  std::vector<Message> previous_fresh;                    ///< last round's honest publications
};

/// Random-stream purposes; each (seed, stream, round, purpose, user) gets
/// an independent generator, so e.g. channel states and sensing noise do
/// not depend on the protocol mode.
enum class StreamPurpose : std::uint64_t {
  subset = 1,
  channels = 2,
  sensing = 3,
  encryption = 4,
  selfish = 5,
  recovery = 6,
};

/// Runs one round: channel evolution, sensing, encryption, full-mesh
/// exchange, recovery, fusion. `subset` must be set in YouSense mode.
[[nodiscard]] RoundResult run_round(const Scenario& scenario, const PadSubset* subset,
                                    RoundState& state, std::uint64_t stream = 0);

/// Aggregated outcome of a run.
class SimulationSummary {
public:
  SimulationSummary() = default;

  void add(const Scenario& scenario, const RoundResult& round);
  void merge(const SimulationSummary& other);

  /// Honest recipients decoding honest senders.
  std::uint64_t recovery_trials = 0;
  std::uint64_t recovery_successes = 0;
  /// Selfish recipients decoding honest senders.
  std::uint64_t attack_trials = 0;
  std::uint64_t attack_successes = 0;
  std::uint64_t rounds = 0;
  std::uint64_t messages = 0;
  MetricsAccumulator honest;
  MetricsAccumulator attacker;
  /// Mean per-channel masking level of one honest sender's ciphertext.
  double masking_level = 0.0;

  [[nodiscard]] double recovery_rate() const;
  [[nodiscard]] double attack_rate() const;

  /// Named metrics in output order.
  [[nodiscard]] std::vector<std::pair<std::string, double>> metric_values() const;
  /// Columns: metric, value.
  [[nodiscard]] Table to_table() const;
};

/// Mean over channels of masking_level for the scenario's first honest
/// sender (plaintext mode behaves like the single all-zero pad).
[[nodiscard]] double scenario_masking_level(const Scenario& scenario, const PadSubset* subset);

using RoundObserver = std::function<void(const RoundResult&)>;

/// Drives rounds of one scenario with its own subset and state.
class Simulator {
public:
  explicit Simulator(Scenario scenario, std::uint64_t stream = 0);

  RoundResult step();
  /// Runs scenario.rounds rounds.
  SimulationSummary run(const RoundObserver& observer = {});

  [[nodiscard]] const Scenario& scenario() const noexcept { return scenario_; }
  [[nodiscard]] const std::optional<PadSubset>& subset() const noexcept { return subset_; }

private:
  Scenario scenario_;
  std::uint64_t stream_;
  std::optional<PadSubset> subset_;
  RoundState state_;
};

/// Convenience: Simulator(scenario, stream).run(observer).
[[nodiscard]] SimulationSummary simulate(const Scenario& scenario, std::uint64_t stream = 0,
                                         const RoundObserver& observer = {});

}  // namespace yousense

#endif  // YOUSENSE_SIMULATOR_HPP
