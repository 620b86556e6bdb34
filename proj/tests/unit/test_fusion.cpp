#include <doctest.h>

#include <algorithm>
#include <vector>

#include "../support/oracles.hpp"
#include "yousense/fusion.hpp"
#include "yousense/random.hpp"
#include "yousense/spectrum.hpp"

using namespace yousense;

namespace {
std::vector<BitVector> bits(std::initializer_list<const char*> list) {
  std::vector<BitVector> out;
  for (const char* s : list) out.push_back(BitVector::from_string(s));
  return out;
}
}  // namespace

TEST_SUITE("fusion") {

TEST_CASE("fuse") {
  const auto same = bits({"1010", "1010", "1010"});
  CHECK(fuse(same, FusionRule::majority(3)) == same[0]);
  CHECK(fuse(bits({"10", "11", "01"}), FusionRule{2, 3}).to_string() == "11");
  CHECK(fuse(bits({"100", "010", "000"}), FusionRule{1, 3}).to_string() == "110");
  CHECK(fuse(bits({"110", "011"}), FusionRule{2, 2}).to_string() == "010");
  CHECK(FusionRule::majority(4).k == 3);
  CHECK(FusionRule::majority(5).k == 3);
  CHECK_THROWS(FusionRule{0, 3}.validate());
  CHECK_THROWS(FusionRule{4, 3}.validate());
  CHECK_THROWS((void)fuse(bits({"10"}), FusionRule{1, 2}));
}

TEST_CASE("fusion is invariant under report permutation") {
  Rng rng(1);
  for (int t = 0; t < 200; ++t) {
    std::vector<BitVector> reports;
    for (int k = 0; k < 5; ++k) {
      BitVector r(7);
      for (std::size_t i = 0; i < 7; ++i) r.set(i, bernoulli(rng, 0.5));
      reports.push_back(r);
    }
    const FusionRule rule{1 + static_cast<std::size_t>(t % 5), 5};
    const auto expected = fuse(reports, rule);
    std::shuffle(reports.begin(), reports.end(), rng);
    CHECK(fuse(reports, rule) == expected);
  }
}

TEST_CASE("scores") {
  const auto truth = bits({"1100", "0011"});
  CHECK(score(truth, truth).false_positive_rate == 0.0);
  CHECK(score(truth, truth).false_negative_rate == 0.0);
  std::vector<BitVector> inverse{~truth[0], ~truth[1]};
  const auto m = score(inverse, truth);
  CHECK(m.false_positive_rate == 1.0);
  CHECK(m.false_negative_rate == 1.0);
  CHECK(m.totals.idle_slots == 4);
  const auto all_idle = bits({"00"});
  CHECK(score(all_idle, all_idle).false_negative_rate == 0.0);
}

TEST_CASE("majority of five noisy detectors matches the binomial tail") {
  Rng rng(2);
  const ChannelStates idle(1000);
  const auto d = DetectorProfile::uniform(1000, 0.1, 0.1);
  MetricsAccumulator acc;
  for (int t = 0; t < 1000; ++t) {
    std::vector<BitVector> reports;
    for (int k = 0; k < 5; ++k) reports.push_back(sense(idle, d, rng));
    acc.add(fuse(reports, FusionRule::majority(5)), idle);
  }
  const double expected = oracle::binomial_tail(5, 3, 0.1);
  CHECK(expected == doctest::Approx(0.00856));
  CHECK(std::abs(acc.metrics().false_positive_rate - expected) < 0.0005);
}

TEST_CASE("accumulators merge") {
  MetricsAccumulator a, b, all;
  const auto t = BitVector::from_string("0101");
  a.add(BitVector::from_string("1101"), t);
  b.add(BitVector::from_string("0100"), t);
  all.add(BitVector::from_string("1101"), t);
  all.add(BitVector::from_string("0100"), t);
  a.merge(b);
  CHECK(a.metrics().false_positive_rate == all.metrics().false_positive_rate);
  CHECK(a.metrics().false_negative_rate == doctest::Approx(0.25));
}

}
