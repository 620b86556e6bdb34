#include <doctest.h>

#include <cmath>
#include <vector>

#include "yousense/adversary.hpp"
#include "yousense/random.hpp"

using namespace yousense;

namespace {

BitVector noisy_copy(const BitVector& v, double flip, Rng& rng) {
  auto out = v;
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (bernoulli(rng, flip)) out.flip(i);
  }
  return out;
}

}  // namespace

TEST_SUITE("adversary") {

TEST_CASE("exhaustive selfish forwarding") {
  Rng rng(1);
  const Ciphertext d{BitVector::from_string("1100"), 3};
  const auto copy = ees_act(std::span(&d, 1), 4, 4, 0.0, rng);
  CHECK(copy.bits == d.bits);
  CHECK(copy.sender == 4);

  const Ciphertext a{BitVector::from_string("0011"), 0};
  CHECK(ees_act(std::span(&d, 1), 4, 4, 0.0, rng).bits != ees_act(std::span(&a, 1), 4, 4, 0.0, rng).bits);

  CHECK(ees_act({}, 9, 4, 0.0, rng).bits.size() == 9);

  std::size_t agree = 0;
  const Ciphertext wide{BitVector(1000), 0};
  for (int t = 0; t < 100; ++t) agree += 1000 - ees_act(std::span(&wide, 1), 1000, 1, 0.5, rng).bits.count();
  CHECK(std::abs(agree / 1e5 - 0.5) < 0.01);
}

TEST_CASE("blind decoding of a secure pair") {
  Rng rng(2);
  const auto pair = parse_subset("01101,10010");
  const auto d = DetectorProfile::uniform(5, 0.1, 0.1);
  int ok = 0;
  for (int t = 0; t < 20000; ++t) {
    const auto pad = pair.pad(uniform_index(rng, 2));
    const auto out = ees_decode_attempt(Ciphertext{generate_pad(5, rng) ^ pad, 0}, pair, 0.5, d, rng);
    ok += out.guessed_pad == pad;
  }
  CHECK(std::abs(ok / 20000.0 - 0.5) < 0.02);
}

TEST_CASE("a single-pad subset is always decoded") {
  Rng rng(3);
  const auto single = parse_subset("01101");
  const auto perfect = DetectorProfile::perfect(5);
  for (int t = 0; t < 100; ++t) {
    const auto truth = generate_pad(5, rng);
    auto out = ees_decode_attempt(Ciphertext{truth ^ single.pad(0), 0}, single, 0.5, perfect, rng);
    out.grade(single.pad(0));
    CHECK(out.pad_recovered);
    CHECK(out.guessed_states == truth);
  }
}

TEST_CASE("partial sensing breaks a single pair but not an interleaved subset") {
  Rng rng(4);
  const std::size_t m = 20;
  const int trials = 20000;

  const auto base = generate_pad(m, rng);
  const auto pair = PadSubset::from_pads({base, ~base});
  BitVector mask9(m);
  for (std::size_t i = 0; i < 9; ++i) mask9.set(i, true);
  int ok = 0;
  for (int t = 0; t < trials; ++t) {
    const auto report = generate_pad(m, rng);
    const auto pad = pair.pad(uniform_index(rng, 2));
    const auto own = noisy_copy(report, 0.18, rng) & mask9;
    ok += pes_act(mask9, own, Ciphertext{report ^ pad, 0}, pair, rng).guessed_pad == pad;
  }
  CHECK(std::abs(ok / double(trials) - predict_success_rate(9, 0.82)) < 0.01);

  const auto inter = generate_subset(m, 5, rng);
  REQUIRE(inter.num_blocks() == 4);
  BitVector mask5(m);
  for (std::size_t i = 0; i < 5; ++i) mask5.set(i, true);
  ok = 0;
  for (int t = 0; t < trials; ++t) {
    const auto report = generate_pad(m, rng);
    const auto pad = inter.pad(uniform_index(rng, inter.size()));
    const auto own = noisy_copy(report, 0.18, rng) & mask5;
    ok += pes_act(mask5, own, Ciphertext{report ^ pad, 0}, inter, rng).guessed_pad == pad;
  }
  const double rate = ok / double(trials);
  CHECK(rate <= predict_success_rate(5, 0.82) / 8 + 0.01);
  CHECK(rate > predict_success_rate(5, 0.82) / 8 - 0.01);
}

TEST_CASE("an empty mask is blind guessing") {
  Rng rng(5);
  const auto inter = generate_subset(8, 4, rng);
  int ok = 0;
  for (int t = 0; t < 20000; ++t) {
    const auto pad = inter.pad(uniform_index(rng, inter.size()));
    const auto out = pes_act(BitVector(8), BitVector(8), Ciphertext{generate_pad(8, rng) ^ pad, 0}, inter, rng);
    CHECK(out.channels_sensed == 0);
    ok += out.guessed_pad == pad;
  }
  CHECK(std::abs(ok / 20000.0 - 0.25) < 0.02);
}

namespace {

struct HistoryRun {
  double honest = 0;
  double attacker = 0;
};

HistoryRun history_trial(std::size_t m, double slot, int trials, std::uint64_t seed) {
  Rng rng(seed);
  const auto model = ChannelModel::uniform(m, 50, 50, slot);
  const auto d = DetectorProfile::uniform(m, 0.1, 0.1);
  const auto base = generate_pad(m, rng);
  const auto pair = PadSubset::from_pads({base, ~base});
  int honest = 0, attacker = 0;
  for (int t = 0; t < trials; ++t) {
    const auto before = sample_states(model, rng);
    const auto now = sample_states(model, before, rng);
    const auto stale = sense(before, d, rng);
    const auto sent = encrypt_report(sense(now, d, rng), pair, rng);
    honest += recover_pad(sense(now, d, rng), sent.ciphertext, pair, rng) == sent.pad;
    attacker += history_act(stale, sent.ciphertext, pair, rng).guessed_pad == sent.pad;
  }
  return {honest / double(trials), attacker / double(trials)};
}

}  // namespace

TEST_CASE("history attack limits") {
  const auto still = history_trial(9, 1e-9, 20000, 6);
  CHECK(std::abs(still.attacker - still.honest) < 0.01);
  const auto loose = history_trial(9, 10.0, 20000, 7);
  CHECK(std::abs(loose.attacker - 0.5) < 0.02);
}

TEST_CASE("history attack at persistence 0.9") {
  const double slot = -std::log(0.8) / 100.0;
  // Stale agreement: persistence * 0.82 + (1 - persistence) * (1 - 0.82).
  const double stale_eta = 0.9 * 0.82 + 0.1 * 0.18;
  CHECK(stale_eta == doctest::Approx(0.756));

  const auto m21 = history_trial(21, slot, 100000, 8);
  const double gap21 = predict_success_rate(21, 0.82) - predict_success_rate(21, stale_eta);
  CHECK(m21.attacker < m21.honest);
  CHECK(m21.honest == doctest::Approx(predict_success_rate(21, 0.82)).epsilon(0.002));
  CHECK(m21.attacker == doctest::Approx(predict_success_rate(21, stale_eta)).epsilon(0.003));
  CHECK(gap21 == doctest::Approx(0.0049).epsilon(0.02));

  const auto m5 = history_trial(5, slot, 100000, 9);
  CHECK(m5.honest - m5.attacker >= 0.04);
}

}
