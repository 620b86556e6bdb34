// Acceptance checks. Each criterion prints one PASS/FAIL line; the exit code
// is non-zero when any selected criterion fails. Pass criterion numbers as
// arguments to run a subset.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "../support/oracles.hpp"
#include "yousense/adversary.hpp"
#include "yousense/experiment.hpp"
#include "yousense/infoleak.hpp"
#include "yousense/otp.hpp"
#include "yousense/random.hpp"
#include "yousense/round_log.hpp"
#include "yousense/simulator.hpp"

using namespace yousense;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;

  void fail(const std::string& why) {
    if (pass) detail = why;
    pass = false;
  }
};

std::string num(double v, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

double binomial_sigma(double p, double n) { return std::sqrt(std::max(p * (1.0 - p), 0.0) / n); }

Scenario honest_scenario(std::size_t channels, std::size_t users, double false_alarm, double miss) {
  auto s = with_channels(Scenario::defaults(), channels);
  UserSpec u;
  u.detector = DetectorProfile::uniform(channels, false_alarm, miss);
  s.users.assign(users, u);
  return s;
}

DetectorProfile random_profile(std::size_t m, Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 0.45);
  DetectorProfile d;
  for (std::size_t i = 0; i < m; ++i) {
    d.false_alarm.push_back(u(rng));
    d.miss.push_back(u(rng));
  }
  return d;
}

// Random complement-closed subset: either an interleaved construction or an
// arbitrary union of secure pairs.
PadSubset random_closed_subset(std::size_t m, Rng& rng) {
  if (bernoulli(rng, 0.5)) return generate_subset(m, 1 + uniform_index(rng, m), rng);
  std::set<Pad> pads;
  const std::size_t pairs = 1 + uniform_index(rng, std::min<std::size_t>(6, std::size_t{1} << (m - 1)));
  while (pads.size() < 2 * pairs) {
    const auto p = generate_pad(m, rng);
    pads.insert(p);
    pads.insert(~p);
  }
  return PadSubset::from_pads({pads.begin(), pads.end()});
}

// ---------------------------------------------------------------------------

Verdict zero_leakage() {
  Verdict v;
  Rng rng(101);
  double worst = 0.0;
  std::size_t checks = 0;
  for (int t = 0; t < 200; ++t) {
    const std::size_t m = 1 + uniform_index(rng, 12);
    const auto subset = random_closed_subset(m, rng);
    if (!subset.complement_closed()) v.fail("generated subset not closed");
    std::vector<DetectorProfile> senders;
    for (int k = 0; k < 8; ++k) senders.push_back(random_profile(subset.padded_length(), rng));
    for (double p1 : {0.1, 0.3, 0.5, 0.7, 0.9}) {
      for (std::size_t i = 0; i < subset.padded_length(); ++i) {
        worst = std::max(worst, std::abs(masking_level(subset, p1, senders[0], i)));
        for (std::size_t n = 1; n <= 8; ++n) {
          worst = std::max(worst, std::abs(joint_masking_level(subset, p1, std::span(senders).first(n), i)));
          ++checks;
        }
      }
    }
  }
  if (worst > 1e-12) v.fail("max |MI| " + num(worst));
  if (v.pass) v.detail = std::to_string(checks) + " joint checks, max |MI| " + num(worst);
  return v;
}

Verdict recovery_formula() {
  Verdict v;
  const int trials = 100000;
  double worst_z = 0.0;
  for (std::size_t m : {1, 3, 5, 9, 21}) {
    for (double eta : {0.6, 0.82, 0.95}) {
      Rng rng = make_rng(202, {m, static_cast<std::uint64_t>(eta * 100)});
      const auto base = generate_pad(m, rng);
      const auto pair = PadSubset::from_pads({base, ~base});
      int ok = 0;
      for (int t = 0; t < trials; ++t) {
        const auto sender = generate_pad(m, rng);
        auto own = sender;
        for (std::size_t i = 0; i < m; ++i) {
          if (bernoulli(rng, 1.0 - eta)) own.flip(i);
        }
        const auto enc = encrypt_report(sender, pair, rng);
        ok += recover_pad(own, enc.ciphertext, pair, rng) == enc.pad;
      }
      const double p = predict_success_rate(m, eta);
      const double rate = ok / double(trials);
      const double sigma = binomial_sigma(p, trials);
      const double z = sigma > 0 ? std::abs(rate - p) / sigma : (rate == p ? 0.0 : INFINITY);
      worst_z = std::max(worst_z, z);
      if (z > 3.0) v.fail("M=" + std::to_string(m) + " eta=" + num(eta) + ": " + num(rate) + " vs " + num(p));
    }
  }
  Rng rng(203);
  double worst_diff = 0.0;
  for (std::size_t n = 1; n <= 15; ++n) {
    for (int rep = 0; rep < 4; ++rep) {
      std::vector<double> eta(n);
      for (auto& e : eta) e = std::uniform_real_distribution<double>(0.5, 1.0)(rng);
      if (rep == 0) std::fill(eta.begin(), eta.end(), 0.82);
      worst_diff = std::max(worst_diff, std::abs(predict_success_rate(eta) - oracle::success_by_enumeration(eta)));
    }
  }
  if (worst_diff > 1e-12) v.fail("closed form differs from enumeration by " + num(worst_diff));
  if (v.pass) v.detail = "max |z| " + num(worst_z, 3) + ", max enumeration diff " + num(worst_diff, 3);
  return v;
}

Verdict success_vs_channels() {
  Verdict v;
  auto s = honest_scenario(100, 5, 0.1, 0.1);
  s.rounds = 350;
  ExperimentOptions options;
  options.replicas = 2;
  options.common_random_numbers = true;
  const auto points = run_sweep(s, {parse_sweep("channels=1:100")}, options);
  std::vector<double> rate, sigma;
  for (const auto& p : points) {
    rate.push_back(p.summary.recovery_rate());
    sigma.push_back(binomial_sigma(rate.back(), double(p.summary.recovery_trials)));
  }
  double min_after = 1.0;
  for (std::size_t i = 0; i < rate.size(); ++i) {
    const std::size_t m = i + 1;
    if (m >= 21) {
      min_after = std::min(min_after, rate[i]);
      if (rate[i] <= 0.99) v.fail("M=" + std::to_string(m) + " success " + num(rate[i]));
    }
    if (i > 0 && rate[i] < rate[i - 1] - 2.0 * std::hypot(sigma[i], sigma[i - 1])) {
      v.fail("drop at M=" + std::to_string(m) + ": " + num(rate[i - 1]) + " -> " + num(rate[i]));
    }
  }
  if (v.pass) {
    v.detail = "M=1 " + num(rate[0], 4) + ", M=5 " + num(rate[4], 4) + ", M=21 " + num(rate[20], 5) +
               ", min over M>=21 " + num(min_after, 5);
  }
  return v;
}

Verdict success_vs_pairs() {
  Verdict v;
  auto s = honest_scenario(100, 5, 0.1, 0.1);
  s.rounds = 500;
  ExperimentOptions options;
  options.common_random_numbers = true;
  const auto points = run_sweep(s, {parse_sweep("pairs=1,2,4,10")}, options);
  std::string detail;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& sum = points[i].summary;
    detail += (i ? ", " : "") + num(points[i].values[0]) + " pairs " + num(sum.recovery_rate(), 5);
    if (sum.recovery_trials < 10000) v.fail("too few trials");
    if (i == 0) continue;
    const auto& prev = points[i - 1].summary;
    const double tol = 2.0 * std::hypot(binomial_sigma(prev.recovery_rate(), double(prev.recovery_trials)),
                                        binomial_sigma(sum.recovery_rate(), double(sum.recovery_trials)));
    if (sum.recovery_rate() > prev.recovery_rate() + tol) v.fail("increase: " + detail);
  }
  if (v.pass) v.detail = detail;
  return v;
}

Verdict plaintext_degradation() {
  Verdict v;
  auto s = honest_scenario(100, 5, 0.1, 0.1);
  s.mode = Mode::plaintext;
  s.rounds = 20000;
  ExperimentOptions options;
  options.common_random_numbers = true;
  const auto points = run_sweep(s, {parse_sweep("selfish=0:3")}, options);
  std::string detail;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto m = points[i].summary.honest.metrics();
    detail += (i ? "; " : "") + std::to_string(i) + ": FP " + num(m.false_positive_rate, 4) + " FN " +
              num(m.false_negative_rate, 4);
    if (i == 0) {
      const double oracle_fp = oracle::binomial_tail(5, 3, 0.1);
      if (m.totals.idle_slots < 1000000) v.fail("only " + std::to_string(m.totals.idle_slots) + " idle slots");
      if (std::abs(m.false_positive_rate - oracle_fp) > 0.001) {
        v.fail("FP " + num(m.false_positive_rate) + " vs " + num(oracle_fp));
      }
      continue;
    }
    const auto prev = points[i - 1].summary.honest.metrics();
    if (m.false_positive_rate < prev.false_positive_rate || m.false_negative_rate < prev.false_negative_rate) {
      v.fail("not monotone: " + detail);
    }
  }
  if (v.pass) v.detail = detail;
  return v;
}

Verdict protected_matches_plaintext() {
  Verdict v;
  std::string detail;
  for (std::size_t m : {25, 50, 100}) {
    auto s = honest_scenario(m, 5, 0.1, 0.1);
    s.rounds = 2000;
    auto p = s;
    p.mode = Mode::plaintext;
    const auto a = simulate(s).honest.metrics();
    const auto b = simulate(p).honest.metrics();
    const double dfp = std::abs(a.false_positive_rate - b.false_positive_rate);
    const double dfn = std::abs(a.false_negative_rate - b.false_negative_rate);
    detail += (detail.empty() ? "" : ", ") + std::string("M=") + std::to_string(m) + " dFP " + num(dfp, 3) +
              " dFN " + num(dfn, 3);
    if (dfp > 0.01 || dfn > 0.01) v.fail(detail);
  }
  if (v.pass) v.detail = detail;
  return v;
}

Verdict partial_sensing_defense() {
  Verdict v;
  auto s = honest_scenario(20, 4, 0.1, 0.1);
  UserSpec pes;
  pes.role = Role::pes;
  pes.detector = DetectorProfile::uniform(20, 0.1, 0.1);
  pes.mask_size = 5;
  s.users.push_back(pes);
  s.subset.block_length = 5;
  s.rounds = 25000;
  Simulator sim(s);
  if (!sim.subset() || sim.subset()->num_blocks() != 4) {
    v.fail("expected 4 blocks");
    return v;
  }
  const auto sum = sim.run();
  const double bound = predict_success_rate(5, 0.82) / 8.0 + 0.02;
  if (sum.attack_trials < 100000) v.fail("only " + std::to_string(sum.attack_trials) + " trials");
  if (sum.attack_rate() > bound) v.fail("attacker " + num(sum.attack_rate()) + " > " + num(bound));
  if (v.pass) {
    v.detail = "attacker " + num(sum.attack_rate(), 4) + " <= " + num(bound, 4) + " over " +
               std::to_string(sum.attack_trials) + " trials; honest " + num(sum.recovery_rate(), 4);
  }
  return v;
}

Verdict properties() {
  Verdict v;
  // XOR round trip, every report and pad up to 12 bits.
  for (std::size_t m = 1; m <= 12 && v.pass; ++m) {
    std::vector<BitVector> all;
    for (std::uint32_t x = 0; x < (1U << m); ++x) {
      BitVector b(m);
      for (std::size_t i = 0; i < m; ++i) b.set(i, (x >> i) & 1U);
      all.push_back(b);
    }
    for (const auto& r : all) {
      for (const auto& k : all) {
        if (decrypt(Ciphertext{r ^ k, 0}, k) != r) {
          v.fail("round trip M=" + std::to_string(m));
          break;
        }
      }
    }
  }
  // Closure of generated subsets.
  Rng rng(808);
  std::size_t subsets = 0;
  for (std::size_t m = 1; m <= 64; ++m) {
    for (std::size_t phi = (m + PadSubset::kMaxBlocks - 1) / PadSubset::kMaxBlocks; phi <= m; ++phi) {
      ++subsets;
      if (!generate_subset(m, phi, rng).complement_closed()) v.fail("open subset M=" + std::to_string(m));
    }
    for (std::size_t pairs = 1; pairs <= 12 && (pairs == 1 || std::size_t{1} << (m - 1) >= pairs); ++pairs) {
      if (m < 2 && pairs > 1) break;
      ++subsets;
      if (!generate_paired_subset(m, pairs, rng).complement_closed()) v.fail("open paired subset");
    }
  }
  // Posterior argmax is own XOR cipher, and the vote finds it.
  for (std::size_t m = 1; m <= 10; ++m) {
    std::vector<double> eta(m);
    for (auto& e : eta) e = std::uniform_real_distribution<double>(0.51, 0.99)(rng);
    std::vector<Pad> everything;
    for (std::uint32_t x = 0; x < (1U << m); ++x) {
      Pad p(m);
      for (std::size_t i = 0; i < m; ++i) p.set(i, (x >> i) & 1U);
      everything.push_back(p);
    }
    const auto full = PadSubset::from_pads(everything);
    const BitVector own = generate_pad(m, rng);
    for (const auto& c : everything) {
      const Ciphertext ct{c, 0};
      const Pad target = own ^ c;
      const double top = pad_posterior(own, ct, eta, target);
      for (const auto& cand : everything) {
        if (cand != target && pad_posterior(own, ct, eta, cand) >= top) v.fail("argmax M=" + std::to_string(m));
      }
      if (recover_pad(own, ct, full, rng) != target) v.fail("vote disagrees with argmax");
    }
  }
  // xi = 0.5 on every bit if and only if the subset leaks nothing; closure implies both.
  const auto d = DetectorProfile::uniform(3, 0.1, 0.2);
  for (std::uint32_t mask = 1; mask < 256; ++mask) {
    std::vector<Pad> pads;
    for (std::uint32_t x = 0; x < 8; ++x) {
      if ((mask >> x) & 1U) {
        Pad p(3);
        for (std::size_t i = 0; i < 3; ++i) p.set(i, (x >> i) & 1U);
        pads.push_back(p);
      }
    }
    const auto s = PadSubset::from_pads(pads);
    const auto xi = xi_profile(s);
    bool balanced = true, silent = true;
    for (std::size_t i = 0; i < 3; ++i) {
      balanced = balanced && xi[i] == 0.5;
      silent = silent && masking_level(s, 0.4, d, i) < 1e-12;
    }
    if (balanced != silent) v.fail("xi/leakage mismatch");
    if (s.complement_closed() && !balanced) v.fail("closed subset with unbalanced xi");
  }
  // Fusion ignores report order.
  for (int t = 0; t < 1000; ++t) {
    std::vector<BitVector> reports;
    const std::size_t n = 1 + uniform_index(rng, 7);
    for (std::size_t k = 0; k < n; ++k) reports.push_back(generate_pad(33, rng));
    const FusionRule rule{1 + uniform_index(rng, n), n};
    const auto expected = fuse(reports, rule);
    std::shuffle(reports.begin(), reports.end(), rng);
    if (fuse(reports, rule) != expected) v.fail("fusion order dependence");
  }
  // Byte-identical reruns.
  auto run_bytes = [] {
    auto s = honest_scenario(30, 4, 0.1, 0.1);
    UserSpec e;
    e.role = Role::ees;
    e.detector = s.users[0].detector;
    s.users.push_back(e);
    s.subset.block_length = 6;
    s.rounds = 200;
    std::ostringstream out;
    RoundLogWriter log(out, 5);
    const auto sum = simulate(s, 0, [&](const RoundResult& r) { log.write(r); });
    write_table(out, sum.to_table(), OutputFormat::csv);
    ExperimentOptions opt;
    opt.threads = 3;
    opt.replicas = 2;
    s.rounds = 20;
    write_table(out, run_experiment(s, {parse_sweep("channels=6:30:6")}, opt), OutputFormat::json_lines);
    return out.str();
  };
  const auto first = run_bytes();
  if (first != run_bytes()) v.fail("reruns differ");
  if (v.pass) v.detail = std::to_string(subsets) + " generated subsets closed; rerun " +
                         std::to_string(first.size()) + " bytes identical";
  return v;
}

struct Criterion {
  int id;
  const char* name;
  double budget_s;
  std::function<Verdict()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria{
      {1, "zero leakage of secure-pair-closed subsets", 60, zero_leakage},
      {2, "recovery rate matches its closed form", 300, recovery_formula},
      {3, "recovery success against channel count", 120, success_vs_channels},
      {4, "recovery success against pair count", 120, success_vs_pairs},
      {5, "plaintext fusion degrades with forwarders", 180, plaintext_degradation},
      {6, "protected fusion matches plaintext fusion", 180, protected_matches_plaintext},
      {7, "partial sensing cannot decode interleaved pads", 120, partial_sensing_defense},
      {8, "property suites", 120, properties},
  };
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));

  int failures = 0;
  for (const auto& c : criteria) {
    if (!selected.empty() && !selected.count(c.id)) continue;
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v.fail(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs > c.budget_s) v.fail("took " + num(secs, 3) + " s, budget " + num(c.budget_s) + " s");
    std::printf("%s [%d] %s (%.1f s): %s\n", v.pass ? "PASS" : "FAIL", c.id, c.name, secs, v.detail.c_str());
    std::fflush(stdout);
    failures += v.pass ? 0 : 1;
  }
  return failures == 0 ? 0 : 1;
}
