#ifndef YOUSENSE_FUSION_HPP
#define YOUSENSE_FUSION_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "yousense/bit_vector.hpp"

namespace yousense {

/// k-out-of-n hard decision rule: busy iff at least k of n reports say busy.
struct FusionRule {
  std::size_t k = 1;
  std::size_t n = 1;

  /// k = ceil((n + 1) / 2).
  static FusionRule majority(std::size_t n);
  void validate() const;
};

/// Per-channel busy decision. Throws std::invalid_argument when the report
/// count differs from rule.n or report lengths differ.
[[nodiscard]] BitVector fuse(std::span<const SensingReport> reports, const FusionRule& rule);

struct ChannelTally {
  std::uint64_t idle_slots = 0;
  std::uint64_t false_positives = 0;  ///< idle slots decided busy
  std::uint64_t busy_slots = 0;
  std::uint64_t false_negatives = 0;  ///< busy slots decided idle
};

struct SensingMetrics {
  double false_positive_rate = 0.0;  ///< 0 when no idle slot was observed
  double false_negative_rate = 0.0;  ///< 0 when no busy slot was observed
  ChannelTally totals;
  std::vector<ChannelTally> per_channel;
};

/// Streaming tally of decisions against ground truth.
class MetricsAccumulator {
public:
  MetricsAccumulator() = default;
  explicit MetricsAccumulator(std::size_t channels) : per_channel_(channels) {}

  void add(const BitVector& decision, const ChannelStates& truth);
  void merge(const MetricsAccumulator& other);

  [[nodiscard]] SensingMetrics metrics() const;
  [[nodiscard]] std::size_t channels() const noexcept { return per_channel_.size(); }

private:
  std::vector<ChannelTally> per_channel_;
};

/// Scores T rounds of decisions. Throws std::invalid_argument on empty or
/// mismatched input.
[[nodiscard]] SensingMetrics score(std::span<const BitVector> decisions,
                                   std::span<const ChannelStates> truths);

}  // namespace yousense

#endif  // YOUSENSE_FUSION_HPP
