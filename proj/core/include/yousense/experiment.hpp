#ifndef YOUSENSE_EXPERIMENT_HPP
#define YOUSENSE_EXPERIMENT_HPP

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "yousense/scenario.hpp"
#include "yousense/simulator.hpp"
#include "yousense/table.hpp"

namespace yousense {

/// One swept scenario parameter.
///
/// Recognised names: channels, pairs, phi, p_tar, omega, selfish, rounds,
/// slot_period, false_alarm, miss.
struct SweepAxis {
  std::string parameter;
  std::vector<double> values;

  [[nodiscard]] bool integral() const;
};

/// Parses "name=a:b", "name=a:b:step" (inclusive) or "name=v1,v2,...".
[[nodiscard]] SweepAxis parse_sweep(std::string_view text);

/// Copy of `scenario` with `parameter` set to `value`. `selfish` turns the
/// last `value` users into exhaustive selfish users. Throws ConfigError.
[[nodiscard]] Scenario apply_sweep(const Scenario& scenario, std::string_view parameter, double value);

struct ExperimentOptions {
  std::size_t threads = 1;   ///< 0 picks hardware concurrency
  std::size_t replicas = 1;  ///< independent runs per sweep point
  /// Reuse the same random streams at every sweep point.
  bool common_random_numbers = false;
};

struct SweepPoint {
  std::vector<double> values;  ///< one per axis
  SimulationSummary summary;
};

/// Runs every point of the cartesian product of up to two axes.
[[nodiscard]] std::vector<SweepPoint> run_sweep(const Scenario& scenario, const std::vector<SweepAxis>& axes,
                                                const ExperimentOptions& options = {});

/// Long format: one column per axis, then metric, value.
[[nodiscard]] Table run_experiment(const Scenario& scenario, const std::vector<SweepAxis>& axes,
                                   const ExperimentOptions& options = {});

}  // namespace yousense

#endif  // YOUSENSE_EXPERIMENT_HPP
