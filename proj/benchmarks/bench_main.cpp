#include <benchmark/benchmark.h>

#include <vector>

#include "yousense/infoleak.hpp"
#include "yousense/otp.hpp"
#include "yousense/random.hpp"
#include "yousense/simulator.hpp"

using namespace yousense;

static void BM_RecoverPad(benchmark::State& state) {
  const auto m = static_cast<std::size_t>(state.range(0));
  const auto phi = static_cast<std::size_t>(state.range(1));
  Rng rng(1);
  const auto subset = generate_subset(m, phi, rng);
  const auto report = generate_pad(m, rng);
  const auto enc = encrypt_report(report, subset, rng);
  for (auto _ : state) benchmark::DoNotOptimize(recover_pad(report, enc.ciphertext, subset, rng));
}
BENCHMARK(BM_RecoverPad)->Args({21, 21})->Args({100, 100})->Args({100, 5})->Args({1000, 25});

static void BM_RecoverExplicit(benchmark::State& state) {
  Rng rng(2);
  const auto subset = generate_paired_subset(100, static_cast<std::size_t>(state.range(0)), rng);
  const auto report = generate_pad(100, rng);
  const auto enc = encrypt_report(report, subset, rng);
  for (auto _ : state) benchmark::DoNotOptimize(recover_pad(report, enc.ciphertext, subset, rng));
}
BENCHMARK(BM_RecoverExplicit)->Arg(3)->Arg(10);

static void BM_GenerateSubset(benchmark::State& state) {
  Rng rng(3);
  const auto m = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(generate_subset(m, 5, rng));
}
BENCHMARK(BM_GenerateSubset)->Arg(100)->Arg(300);

static void BM_PredictSuccess(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(predict_success_rate(n, 0.82));
}
BENCHMARK(BM_PredictSuccess)->Arg(5)->Arg(101)->Arg(1001);

static void BM_InvertSuccess(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(invert_success_rate(0.999999, 0.6));
}
BENCHMARK(BM_InvertSuccess);

static void BM_JointMaskingLevel(benchmark::State& state) {
  const auto senders = std::vector<DetectorProfile>(static_cast<std::size_t>(state.range(0)),
                                                    DetectorProfile::uniform(12, 0.1, 0.1));
  Rng rng(4);
  const auto subset = generate_subset(12, 4, rng);
  for (auto _ : state) benchmark::DoNotOptimize(joint_masking_level(subset, 0.5, senders, 0));
}
BENCHMARK(BM_JointMaskingLevel)->Arg(1)->Arg(8)->Arg(16);

static void BM_Round(benchmark::State& state) {
  auto s = with_channels(Scenario::defaults(), static_cast<std::size_t>(state.range(0)));
  s.subset.block_length = std::min<std::size_t>(s.num_channels(), 21);
  Rng rng(5);
  const auto subset = build_subset(s, rng);
  RoundState rs;
  for (auto _ : state) benchmark::DoNotOptimize(run_round(s, &subset, rs));
}
BENCHMARK(BM_Round)->Arg(25)->Arg(100)->Arg(400);

BENCHMARK_MAIN();
