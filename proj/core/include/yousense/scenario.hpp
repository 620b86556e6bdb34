#ifndef YOUSENSE_SCENARIO_HPP
#define YOUSENSE_SCENARIO_HPP

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "yousense/fusion.hpp"
#include "yousense/otp.hpp"
#include "yousense/spectrum.hpp"

namespace yousense {

/// Invalid or inconsistent scenario configuration.
class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

enum class Role { honest, ees, pes, history };
enum class Mode { yousense, plaintext };
/// Where an exhaustive-selfish user takes the ciphertexts it forwards.
enum class EesSource { current_round, previous_round };

[[nodiscard]] std::string_view to_string(Role role);
[[nodiscard]] std::string_view to_string(Mode mode);

struct UserSpec {
  Role role = Role::honest;
  DetectorProfile detector;
  std::size_t mask_size = 0;       ///< PES: senses channels [0, mask_size)
  double modification = 0.0;       ///< EES: per-bit flip probability on forwards
  std::size_t history_period = 2;  ///< history: senses once every `period` rounds

  [[nodiscard]] bool selfish() const noexcept { return role != Role::honest; }
};

/// How the public pad subset is built. Precedence: pairs, then phi, then
/// p_tar; with none set a single secure pair (phi = M) is used.
struct SubsetSpec {
  std::optional<std::size_t> block_length;
  std::optional<double> target_success;
  std::optional<std::size_t> pairs;
  double omega = 1.0;
  std::optional<double> eta;  ///< overrides the detector-derived representative eta
};

struct FusionSpec {
  std::optional<std::size_t> k;  ///< defaults to majority
  bool include_self = true;
  VoteWeighting weighting = VoteWeighting::unit;
};

struct Scenario {
  ChannelModel channels;
  std::vector<UserSpec> users;
  SubsetSpec subset;
  FusionSpec fusion;
  Mode mode = Mode::yousense;
  EesSource ees_source = EesSource::current_round;
  std::size_t rounds = 350;
  std::uint64_t seed = 1;

  /// M=100, rates 50/50, slot 0.01, five honest users with p_f = p_m = 0.1,
  /// majority fusion, one secure pair, 350 rounds.
  static Scenario defaults();

  [[nodiscard]] std::size_t num_channels() const noexcept { return channels.num_channels; }
  [[nodiscard]] std::size_t count(Role role) const;

  /// Throws ConfigError on any inconsistency.
  void validate() const;
};

/// Parses the JSON scenario format (see README). Unknown keys are errors.
[[nodiscard]] Scenario parse_scenario(std::string_view json_text);
[[nodiscard]] Scenario load_scenario(const std::filesystem::path& path);

/// Fully resolved scenario as compact JSON with a fixed key order.
[[nodiscard]] std::string canonical_json(const Scenario& scenario);
/// FNV-1a 64 of canonical_json, as 16 hex digits.
[[nodiscard]] std::string config_hash(const Scenario& scenario);

/// Same scenario at a different channel count. Uniform per-channel
/// parameters are resized; heterogeneous ones raise ConfigError.
[[nodiscard]] Scenario with_channels(const Scenario& scenario, std::size_t channels);

/// Mean agreement probability over channels and ordered pairs of distinct
/// honest users (a lone honest user is paired with itself), unless
/// overridden by subset.eta.
[[nodiscard]] double representative_eta(const Scenario& scenario);

/// Block length after resolving p_tar and omega.
[[nodiscard]] std::size_t resolved_block_length(const Scenario& scenario);

/// Public subset for the scenario.
[[nodiscard]] PadSubset build_subset(const Scenario& scenario, Rng& rng);

/// Fusion rule for a recipient combining `reports` reports.
[[nodiscard]] FusionRule fusion_rule(const Scenario& scenario, std::size_t reports);

}  // namespace yousense

#endif  // YOUSENSE_SCENARIO_HPP
