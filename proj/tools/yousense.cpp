// yousense: command-line front end for subset generation, recovery-rate
// prediction, leakage analysis and simulation.

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "yousense/experiment.hpp"
#include "yousense/infoleak.hpp"
#include "yousense/otp.hpp"
#include "yousense/random.hpp"
#include "yousense/round_log.hpp"
#include "yousense/scenario.hpp"
#include "yousense/simulator.hpp"
#include "yousense/table.hpp"
#include "yousense/version.hpp"

namespace ys = yousense;

namespace {

struct Common {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string format = "csv";
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--config", c.config, "Scenario file (JSON)")->check(CLI::ExistingFile);
  cmd->add_option("--seed", c.seed, "Master seed");
  cmd->add_option("--out", c.out, "Output path (default: stdout)");
  cmd->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"csv", "json-lines"}));
}

ys::Scenario scenario_of(const Common& c) {
  ys::Scenario s = c.config.empty() ? ys::Scenario::defaults() : ys::load_scenario(c.config);
  if (c.seed) s.seed = *c.seed;
  return s;
}

ys::OutputMetadata metadata(std::string_view command, std::uint64_t seed, const ys::Scenario* scenario) {
  ys::OutputMetadata meta{{"tool", "yousense"},
                          {"version", std::string(ys::library_version())},
                          {"command", std::string(command)},
                          {"seed", std::to_string(seed)}};
  if (scenario) meta.emplace_back("config_hash", ys::config_hash(*scenario));
  return meta;
}

void emit(const Common& c, const ys::Table& table, const ys::OutputMetadata& meta) {
  const auto format = ys::parse_output_format(c.format);
  if (c.out.empty()) {
    ys::write_table(std::cout, table, format, meta);
    std::cout.flush();
    return;
  }
  std::ofstream file(c.out, std::ios::binary);
  if (!file) throw std::runtime_error("cannot open " + c.out + " for writing");
  ys::write_table(file, table, format, meta);
  if (!file) throw std::runtime_error("write failed: " + c.out);
}

ys::Table subset_table(const ys::PadSubset& subset) {
  ys::Table table({"index", "pad"});
  const auto pads = subset.pads();
  for (std::size_t j = 0; j < pads.size(); ++j) {
    table.add_row({static_cast<std::int64_t>(j), pads[j].to_string()});
  }
  return table;
}

struct SubsetArgs {
  std::optional<std::size_t> channels;
  std::optional<std::size_t> phi;
  std::optional<double> p_tar;
  std::optional<double> eta;
  std::optional<std::size_t> pairs;
  std::optional<double> omega;
};

void add_subset_options(CLI::App* cmd, SubsetArgs& a) {
  cmd->add_option("--channels", a.channels, "Number of channels M")->check(CLI::PositiveNumber);
  auto* phi = cmd->add_option("--phi", a.phi, "Block length")->check(CLI::PositiveNumber);
  auto* ptar = cmd->add_option("--p-tar", a.p_tar, "Target recovery success rate")->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--eta", a.eta, "Agreement probability between reports")->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--pairs", a.pairs, "Exact number of secure pairs")->check(CLI::PositiveNumber);
  cmd->add_option("--omega", a.omega, "Block length multiplier")->check(CLI::PositiveNumber);
  phi->excludes(ptar);
}

// Command-line subset parameters override the scenario's.
ys::Scenario with_subset_args(ys::Scenario s, const SubsetArgs& a) {
  if (a.channels) s = ys::with_channels(s, *a.channels);
  if (a.phi || a.p_tar || a.pairs) s.subset = ys::SubsetSpec{};
  if (a.phi) s.subset.block_length = *a.phi;
  if (a.p_tar) s.subset.target_success = *a.p_tar;
  if (a.pairs) s.subset.pairs = *a.pairs;
  if (a.omega) s.subset.omega = *a.omega;
  if (a.eta) s.subset.eta = *a.eta;
  s.validate();
  return s;
}

int run_subset_gen(const Common& c, const SubsetArgs& a) {
  const auto s = with_subset_args(scenario_of(c), a);
  ys::Rng rng = ys::make_rng(s.seed, {0, static_cast<std::uint64_t>(ys::StreamPurpose::subset)});
  const auto subset = ys::build_subset(s, rng);
  auto meta = metadata("subset-gen", s.seed, &s);
  meta.emplace_back("channels", std::to_string(subset.channels()));
  meta.emplace_back("padded_length", std::to_string(subset.padded_length()));
  meta.emplace_back("block_length", std::to_string(subset.block_length()));
  emit(c, subset_table(subset), meta);
  return 0;
}

int run_predict(const Common& c, const SubsetArgs& a) {
  const auto s = scenario_of(c);
  const double eta = a.eta ? *a.eta : ys::representative_eta(s);
  const auto meta = metadata("predict", s.seed, c.config.empty() ? nullptr : &s);
  if (a.p_tar) {
    const std::size_t phi = ys::invert_success_rate(*a.p_tar, eta);
    ys::Table table({"p_tar", "eta", "phi", "success_rate"});
    table.add_row({*a.p_tar, eta, static_cast<std::int64_t>(phi), ys::predict_success_rate(phi, eta)});
    emit(c, table, meta);
    return 0;
  }
  if (!a.phi) throw ys::ConfigError("predict needs --phi or --p-tar");
  ys::Table table({"phi", "eta", "success_rate"});
  table.add_row({static_cast<std::int64_t>(*a.phi), eta, ys::predict_success_rate(*a.phi, eta)});
  emit(c, table, meta);
  return 0;
}

struct MaskArgs {
  std::string pads;
  double p1 = 0.5;
  double false_alarm = 0.1;
  double miss = 0.1;
  std::size_t senders = 1;
};

int run_mask_level(const Common& c, const SubsetArgs& a, const MaskArgs& m) {
  auto s = scenario_of(c);
  std::optional<ys::PadSubset> subset;
  if (!m.pads.empty()) {
    subset = ys::parse_subset(m.pads);
  } else {
    s = with_subset_args(s, a);
    ys::Rng rng = ys::make_rng(s.seed, {0, static_cast<std::uint64_t>(ys::StreamPurpose::subset)});
    subset = ys::build_subset(s, rng);
  }
  if (m.senders < 1 || m.senders > ys::kMaxJointSenders) {
    throw ys::ConfigError("--senders must be in [1, " + std::to_string(ys::kMaxJointSenders) + "]");
  }
  const std::vector<ys::DetectorProfile> senders(
      m.senders, ys::DetectorProfile::uniform(subset->padded_length(), m.false_alarm, m.miss));
  const auto report = ys::leakage_report(*subset, m.p1, senders);
  auto meta = metadata("mask-level", s.seed, m.pads.empty() ? &s : nullptr);
  meta.emplace_back("subset_size", std::to_string(subset->size()));
  emit(c, report.to_table(), meta);
  return 0;
}

struct SimArgs {
  std::optional<std::size_t> rounds;
  std::string mode;
  std::string round_log;
};

ys::Scenario with_sim_args(ys::Scenario s, const SimArgs& a) {
  if (a.rounds) s.rounds = *a.rounds;
  if (a.mode == "plaintext") s.mode = ys::Mode::plaintext;
  if (a.mode == "yousense") s.mode = ys::Mode::yousense;
  s.validate();
  return s;
}

int run_simulate(const Common& c, const SimArgs& a) {
  const auto s = with_sim_args(scenario_of(c), a);
  std::ofstream log_file;
  std::unique_ptr<ys::RoundLogWriter> log;
  if (!a.round_log.empty()) {
    log_file.open(a.round_log, std::ios::binary);
    if (!log_file) throw std::runtime_error("cannot open " + a.round_log + " for writing");
    log = std::make_unique<ys::RoundLogWriter>(log_file, static_cast<std::uint32_t>(s.users.size()));
  }
  ys::RoundObserver observer;
  if (log) observer = [&](const ys::RoundResult& r) { log->write(r); };
  const auto summary = ys::simulate(s, 0, observer);
  if (log_file.is_open() && !log_file.flush()) throw std::runtime_error("write failed: " + a.round_log);
  emit(c, summary.to_table(), metadata("simulate", s.seed, &s));
  return 0;
}

struct ExperimentArgs {
  std::vector<std::string> sweeps;
  ys::ExperimentOptions options;
};

int run_experiment(const Common& c, const SimArgs& sa, const ExperimentArgs& a) {
  const auto s = with_sim_args(scenario_of(c), sa);
  std::vector<ys::SweepAxis> axes;
  for (const auto& text : a.sweeps) axes.push_back(ys::parse_sweep(text));
  const auto table = ys::run_experiment(s, axes, a.options);
  auto meta = metadata("experiment", s.seed, &s);
  for (const auto& text : a.sweeps) meta.emplace_back("sweep", text);
  meta.emplace_back("replicas", std::to_string(a.options.replicas));
  meta.emplace_back("common_random_numbers", a.options.common_random_numbers ? "true" : "false");
  emit(c, table, meta);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"YouSense trapdoor one-time-pad spectrum sensing toolkit"};
  app.set_version_flag("--version", std::string(ys::library_version()));
  app.require_subcommand(1);

  Common common;
  SubsetArgs subset_args;
  MaskArgs mask_args;
  SimArgs sim_args;
  ExperimentArgs exp_args;

  auto* subset_gen = app.add_subcommand("subset-gen", "Generate a public pad subset");
  add_common(subset_gen, common);
  add_subset_options(subset_gen, subset_args);

  auto* predict = app.add_subcommand("predict", "Predicted recovery success rate, or block length for a target");
  add_common(predict, common);
  predict->add_option("--phi", subset_args.phi, "Block length")->check(CLI::PositiveNumber);
  predict->add_option("--p-tar", subset_args.p_tar, "Target success rate")->check(CLI::Range(0.0, 1.0));
  predict->add_option("--eta", subset_args.eta, "Agreement probability")->check(CLI::Range(0.0, 1.0));

  auto* mask = app.add_subcommand("mask-level", "Per-channel information leakage of a subset");
  add_common(mask, common);
  add_subset_options(mask, subset_args);
  mask->add_option("--pads", mask_args.pads, "Explicit subset as comma-separated bit strings");
  mask->add_option("--p1", mask_args.p1, "Channel busy probability")->check(CLI::Range(0.0, 1.0));
  mask->add_option("--false-alarm", mask_args.false_alarm, "Sender false-alarm probability")
      ->check(CLI::Range(0.0, 1.0));
  mask->add_option("--miss", mask_args.miss, "Sender miss probability")->check(CLI::Range(0.0, 1.0));
  mask->add_option("--senders", mask_args.senders, "Number of colluding-view senders for joint leakage");

  auto add_sim_options = [&](CLI::App* cmd) {
    cmd->add_option("--rounds", sim_args.rounds, "Override the number of rounds");
    cmd->add_option("--mode", sim_args.mode, "Override the protocol mode")
        ->check(CLI::IsMember({"yousense", "plaintext"}));
  };

  auto* simulate = app.add_subcommand("simulate", "Run one scenario");
  add_common(simulate, common);
  add_sim_options(simulate);
  simulate->add_option("--round-log", sim_args.round_log, "Write a binary per-round log");

  auto* experiment = app.add_subcommand("experiment", "Sweep one or two scenario parameters");
  add_common(experiment, common);
  add_sim_options(experiment);
  experiment->add_option("--sweep", exp_args.sweeps, "name=a:b[:step] or name=v1,v2,...")->expected(1, 2);
  experiment->add_option("--replicas", exp_args.options.replicas, "Independent runs per sweep point")
      ->check(CLI::PositiveNumber);
  experiment->add_option("--threads", exp_args.options.threads, "Worker threads (0: all cores)");
  experiment->add_flag("--crn", exp_args.options.common_random_numbers,
                       "Use common random numbers across sweep points");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*subset_gen) return run_subset_gen(common, subset_args);
    if (*predict) return run_predict(common, subset_args);
    if (*mask) return run_mask_level(common, subset_args, mask_args);
    if (*simulate) return run_simulate(common, sim_args);
    if (*experiment) return run_experiment(common, sim_args, exp_args);
  } catch (const std::exception& e) {
    std::cerr << "yousense: error: " << e.what() << '\n';
    return 2;
  }
  return 1;
}
