#include "yousense/infoleak.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace yousense {

namespace {

// P(E = 1 | C = state) for one sender.
double cipher_one_probability(double xi, const DetectorProfile& profile, std::size_t channel,
                              bool state) {
  const std::size_t detector_channel = channel % profile.size();
  const double report_one = report_probability(profile, detector_channel, state, true);
  // Pad bit 0 passes the report through, pad bit 1 inverts it.
  return xi * report_one + (1.0 - xi) * (1.0 - report_one);
}

// I(C; Y) for binary C with prior p1 and likelihood tables over outcomes y.
double mutual_information(double p1, std::span<const double> given_idle,
                          std::span<const double> given_busy) {
  const double p0 = 1.0 - p1;
  double mi = 0.0;
  for (std::size_t y = 0; y < given_idle.size(); ++y) {
    const double marginal = p0 * given_idle[y] + p1 * given_busy[y];
    if (marginal <= 0.0) continue;
    if (p0 > 0.0 && given_idle[y] > 0.0) mi += p0 * given_idle[y] * std::log2(given_idle[y] / marginal);
    if (p1 > 0.0 && given_busy[y] > 0.0) mi += p1 * given_busy[y] * std::log2(given_busy[y] / marginal);
  }
  return mi < 0.0 ? 0.0 : mi;
}

void check_inputs(const PadSubset& subset, double p1, std::size_t channel) {
  if (!(p1 >= 0.0 && p1 <= 1.0)) throw std::invalid_argument("masking level: p1 must lie in [0,1]");
  if (channel >= subset.padded_length()) throw std::out_of_range("masking level: channel out of range");
}

double xi_at(const PadSubset& subset, std::size_t channel) {
  if (subset.is_block_product()) return 0.5;
  std::size_t zeros = 0;
  for (const auto& p : subset.pads()) zeros += p.get(channel) ? 0 : 1;
  return static_cast<double>(zeros) / static_cast<double>(subset.size());
}

}  // namespace

std::vector<double> xi_profile(const PadSubset& subset) {
  if (subset.size() == 0) throw std::invalid_argument("xi_profile: empty subset");
  std::vector<double> xi(subset.padded_length(), 0.5);
  if (subset.is_block_product()) return xi;  // each bit is 0 in exactly half the members
  std::vector<std::size_t> zeros(subset.padded_length(), 0);
  for (const auto& p : subset.pads()) {
    for (std::size_t i = 0; i < p.size(); ++i) zeros[i] += p.get(i) ? 0 : 1;
  }
  for (std::size_t i = 0; i < xi.size(); ++i) {
    xi[i] = static_cast<double>(zeros[i]) / static_cast<double>(subset.size());
  }
  return xi;
}

double masking_level(const PadSubset& subset, double p1, const DetectorProfile& sender,
                     std::size_t channel) {
  check_inputs(subset, p1, channel);
  if (sender.size() == 0) throw std::invalid_argument("masking level: empty detector profile");
  const double xi = xi_at(subset, channel);
  const double idle_one = cipher_one_probability(xi, sender, channel, false);
  const double busy_one = cipher_one_probability(xi, sender, channel, true);
  const double given_idle[2] = {1.0 - idle_one, idle_one};
  const double given_busy[2] = {1.0 - busy_one, busy_one};
  return mutual_information(p1, given_idle, given_busy);
}

double joint_masking_level(const PadSubset& subset, double p1,
                           std::span<const DetectorProfile> senders, std::size_t channel) {
  check_inputs(subset, p1, channel);
  const std::size_t n = senders.size();
  if (n == 0) throw std::invalid_argument("joint masking level: need at least one sender");
  if (n > kMaxJointSenders) {
    throw std::invalid_argument("joint masking level: at most " + std::to_string(kMaxJointSenders) +
                                " senders can be enumerated");
  }
  const double xi = xi_at(subset, channel);
  std::vector<double> idle_one(n);
  std::vector<double> busy_one(n);
  for (std::size_t x = 0; x < n; ++x) {
    if (senders[x].size() == 0) throw std::invalid_argument("joint masking level: empty detector profile");
    idle_one[x] = cipher_one_probability(xi, senders[x], channel, false);
    busy_one[x] = cipher_one_probability(xi, senders[x], channel, true);
  }
  const std::size_t outcomes = std::size_t{1} << n;
  std::vector<double> given_idle(outcomes);
  std::vector<double> given_busy(outcomes);
  for (std::size_t y = 0; y < outcomes; ++y) {
    double pi = 1.0;
    double pb = 1.0;
    for (std::size_t x = 0; x < n; ++x) {
      const bool bit = (y >> x) & 1U;
      pi *= bit ? idle_one[x] : 1.0 - idle_one[x];
      pb *= bit ? busy_one[x] : 1.0 - busy_one[x];
    }
    given_idle[y] = pi;
    given_busy[y] = pb;
  }
  return mutual_information(p1, given_idle, given_busy);
}

Table LeakageReport::to_table() const {
  const std::size_t senders = rows.empty() ? 0 : rows.front().sender_mi.size();
  std::vector<std::string> columns{"channel"};
  for (std::size_t x = 0; x < senders; ++x) columns.push_back("sender_" + std::to_string(x) + "_mi");
  columns.emplace_back("joint_mi");
  columns.emplace_back("xi");
  Table table(std::move(columns));
  for (const auto& row : rows) {
    std::vector<Cell> cells{static_cast<std::int64_t>(row.channel)};
    for (double mi : row.sender_mi) cells.emplace_back(mi);
    cells.emplace_back(row.joint_mi);
    cells.emplace_back(row.xi);
    table.add_row(std::move(cells));
  }
  return table;
}

LeakageReport leakage_report(const PadSubset& subset, double p1,
                             std::span<const DetectorProfile> senders) {
  LeakageReport report;
  const auto xi = xi_profile(subset);
  for (std::size_t i = 0; i < subset.channels(); ++i) {
    LeakageRow row;
    row.channel = i;
    for (const auto& s : senders) row.sender_mi.push_back(masking_level(subset, p1, s, i));
    row.joint_mi = joint_masking_level(subset, p1, senders, i);
    row.xi = xi[i];
    report.rows.push_back(std::move(row));
  }
  return report;
}

}  // namespace yousense
