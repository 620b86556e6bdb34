#include "yousense/fusion.hpp"

#include <stdexcept>
#include <string>

namespace yousense {

FusionRule FusionRule::majority(std::size_t n) {
  FusionRule rule{(n + 2) / 2, n};
  rule.validate();
  return rule;
}

void FusionRule::validate() const {
  if (n < 1 || k < 1 || k > n) {
    throw std::invalid_argument("fusion rule: need 1 <= k <= n (k=" + std::to_string(k) +
                                ", n=" + std::to_string(n) + ")");
  }
}

BitVector fuse(std::span<const SensingReport> reports, const FusionRule& rule) {
  rule.validate();
  if (reports.size() != rule.n) {
    throw std::invalid_argument("fuse: got " + std::to_string(reports.size()) + " reports, rule expects " +
                                std::to_string(rule.n));
  }
  const std::size_t m = reports.front().size();
  std::vector<std::size_t> votes(m, 0);
  for (const auto& r : reports) {
    if (r.size() != m) throw std::invalid_argument("fuse: report lengths differ");
    for (std::size_t i = 0; i < m; ++i) votes[i] += r.get(i) ? 1 : 0;
  }
  BitVector decision(m);
  for (std::size_t i = 0; i < m; ++i) decision.set(i, votes[i] >= rule.k);
  return decision;
}

void MetricsAccumulator::add(const BitVector& decision, const ChannelStates& truth) {
  if (per_channel_.empty()) per_channel_.resize(truth.size());
  if (decision.size() != truth.size() || truth.size() != per_channel_.size()) {
    throw std::invalid_argument("score: decision and truth shapes differ");
  }
  for (std::size_t i = 0; i < truth.size(); ++i) {
    auto& t = per_channel_[i];
    if (truth.get(i)) {
      ++t.busy_slots;
      if (!decision.get(i)) ++t.false_negatives;
    } else {
      ++t.idle_slots;
      if (decision.get(i)) ++t.false_positives;
    }
  }
}

void MetricsAccumulator::merge(const MetricsAccumulator& other) {
  if (other.per_channel_.empty()) return;
  if (per_channel_.empty()) per_channel_.resize(other.per_channel_.size());
  if (per_channel_.size() != other.per_channel_.size()) {
    throw std::invalid_argument("metrics merge: channel counts differ");
  }
  for (std::size_t i = 0; i < per_channel_.size(); ++i) {
    per_channel_[i].idle_slots += other.per_channel_[i].idle_slots;
    per_channel_[i].false_positives += other.per_channel_[i].false_positives;
    per_channel_[i].busy_slots += other.per_channel_[i].busy_slots;
    per_channel_[i].false_negatives += other.per_channel_[i].false_negatives;
  }
}

SensingMetrics MetricsAccumulator::metrics() const {
  SensingMetrics m;
  m.per_channel = per_channel_;
  for (const auto& t : per_channel_) {
    m.totals.idle_slots += t.idle_slots;
    m.totals.false_positives += t.false_positives;
    m.totals.busy_slots += t.busy_slots;
    m.totals.false_negatives += t.false_negatives;
  }
  if (m.totals.idle_slots) {
    m.false_positive_rate = static_cast<double>(m.totals.false_positives) / static_cast<double>(m.totals.idle_slots);
  }
  if (m.totals.busy_slots) {
    m.false_negative_rate = static_cast<double>(m.totals.false_negatives) / static_cast<double>(m.totals.busy_slots);
  }
  return m;
}

SensingMetrics score(std::span<const BitVector> decisions, std::span<const ChannelStates> truths) {
  if (decisions.empty()) throw std::invalid_argument("score: no rounds to score");
  if (decisions.size() != truths.size()) throw std::invalid_argument("score: round counts differ");
  MetricsAccumulator acc(truths.front().size());
  for (std::size_t t = 0; t < decisions.size(); ++t) acc.add(decisions[t], truths[t]);
  return acc.metrics();
}

}  // namespace yousense
