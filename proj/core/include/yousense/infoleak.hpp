#ifndef YOUSENSE_INFOLEAK_HPP
#define YOUSENSE_INFOLEAK_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "yousense/otp.hpp"
#include "yousense/spectrum.hpp"
#include "yousense/table.hpp"

namespace yousense {

/// Largest sender count joint_masking_level will enumerate (2^N outcomes).
inline constexpr std::size_t kMaxJointSenders = 20;

/// xi_i: fraction of subset members whose bit i is 0. Members are
/// equiprobable, matching uniform pad selection.
[[nodiscard]] std::vector<double> xi_profile(const PadSubset& subset);

/// Mutual information I(C_i; E_i) in bits between channel `channel`'s
/// state and one sender's ciphertext bit, computed exactly.
///
/// `channel` indexes the padded pad; extension bits use the detector entry
/// of the channel they repeat.
[[nodiscard]] double masking_level(const PadSubset& subset, double p1,
                                   const DetectorProfile& sender, std::size_t channel);

/// I(C_i; E_i^1, ..., E_i^N) for N independent senders, by enumerating all
/// 2^N ciphertext-bit outcomes. Throws std::invalid_argument for N == 0 or
/// N > kMaxJointSenders.
[[nodiscard]] double joint_masking_level(const PadSubset& subset, double p1,
                                         std::span<const DetectorProfile> senders,
                                         std::size_t channel);

struct LeakageRow {
  std::size_t channel = 0;
  std::vector<double> sender_mi;
  double joint_mi = 0.0;
  double xi = 0.0;
};

struct LeakageReport {
  std::vector<LeakageRow> rows;

  /// Columns: channel, sender_0_mi .. sender_{N-1}_mi, joint_mi, xi.
  [[nodiscard]] Table to_table() const;
};

/// One row per channel of the subset.
[[nodiscard]] LeakageReport leakage_report(const PadSubset& subset, double p1,
                                           std::span<const DetectorProfile> senders);

}  // namespace yousense

#endif  // YOUSENSE_INFOLEAK_HPP
