#include "yousense/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

namespace yousense {

namespace {

double parse_double(std::string_view text, std::string_view where) {
  double value = 0.0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw ConfigError("sweep: bad number '" + std::string(text) + "' in " + std::string(where));
  }
  return value;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(sep, start);
    parts.push_back(text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

std::size_t as_count(double value, std::string_view parameter) {
  if (!(value >= 0.0) || std::floor(value) != value) {
    throw ConfigError("sweep: " + std::string(parameter) + " needs a non-negative integer");
  }
  return static_cast<std::size_t>(value);
}

constexpr std::string_view kIntegral[] = {"channels", "pairs", "phi", "selfish", "rounds"};
constexpr std::string_view kReal[] = {"p_tar", "omega", "slot_period", "false_alarm", "miss"};

}  // namespace

bool SweepAxis::integral() const {
  return std::find(std::begin(kIntegral), std::end(kIntegral), parameter) != std::end(kIntegral);
}

SweepAxis parse_sweep(std::string_view text) {
  const auto eq = text.find('=');
  if (eq == std::string_view::npos || eq == 0) throw ConfigError("sweep: expected name=values");
  SweepAxis axis;
  axis.parameter = std::string(text.substr(0, eq));
  const bool known = axis.integral() ||
                     std::find(std::begin(kReal), std::end(kReal), axis.parameter) != std::end(kReal);
  if (!known) throw ConfigError("sweep: unknown parameter '" + axis.parameter + "'");
  const auto rest = text.substr(eq + 1);
  if (rest.find(':') != std::string_view::npos) {
    const auto parts = split(rest, ':');
    if (parts.size() > 3) throw ConfigError("sweep: range is a:b or a:b:step");
    const double lo = parse_double(parts[0], axis.parameter);
    const double hi = parse_double(parts[1], axis.parameter);
    const double step = parts.size() == 3 ? parse_double(parts[2], axis.parameter) : 1.0;
    if (!(step > 0.0) || hi < lo) throw ConfigError("sweep: empty or invalid range");
    const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
    for (std::size_t i = 0; i < count; ++i) axis.values.push_back(lo + static_cast<double>(i) * step);
  } else {
    for (auto part : split(rest, ',')) axis.values.push_back(parse_double(part, axis.parameter));
  }
  if (axis.values.empty()) throw ConfigError("sweep: no values");
  return axis;
}

Scenario apply_sweep(const Scenario& scenario, std::string_view parameter, double value) {
  Scenario s = scenario;
  if (parameter == "channels") {
    s = with_channels(s, as_count(value, parameter));
  } else if (parameter == "pairs") {
    s.subset.pairs = as_count(value, parameter);
  } else if (parameter == "phi") {
    s.subset.pairs.reset();
    s.subset.block_length = as_count(value, parameter);
  } else if (parameter == "p_tar") {
    s.subset.pairs.reset();
    s.subset.block_length.reset();
    s.subset.target_success = value;
  } else if (parameter == "omega") {
    s.subset.omega = value;
  } else if (parameter == "selfish") {
    const std::size_t k = as_count(value, parameter);
    if (k >= s.users.size()) throw ConfigError("sweep: selfish count must leave an honest user");
    for (std::size_t i = s.users.size() - k; i < s.users.size(); ++i) s.users[i].role = Role::ees;
  } else if (parameter == "rounds") {
    s.rounds = as_count(value, parameter);
  } else if (parameter == "slot_period") {
    s.channels.slot_period = value;
  } else if (parameter == "false_alarm" || parameter == "miss") {
    for (auto& u : s.users) {
      auto& v = parameter == "miss" ? u.detector.miss : u.detector.false_alarm;
      std::fill(v.begin(), v.end(), value);
    }
  } else {
    throw ConfigError("sweep: unknown parameter '" + std::string(parameter) + "'");
  }
  s.validate();
  return s;
}

std::vector<SweepPoint> run_sweep(const Scenario& scenario, const std::vector<SweepAxis>& axes,
                                  const ExperimentOptions& options) {
  if (axes.size() > 2) throw ConfigError("sweep: at most two axes");
  if (options.replicas == 0) throw ConfigError("sweep: replicas must be >= 1");

  std::vector<SweepPoint> points;
  std::vector<Scenario> scenarios;
  if (axes.empty()) {
    scenario.validate();
    points.push_back({});
    scenarios.push_back(scenario);
  } else {
    const auto& outer = axes[0];
    for (double a : outer.values) {
      Scenario sa = apply_sweep(scenario, outer.parameter, a);
      if (axes.size() == 1) {
        points.push_back({{a}, {}});
        scenarios.push_back(std::move(sa));
        continue;
      }
      for (double b : axes[1].values) {
        points.push_back({{a, b}, {}});
        scenarios.push_back(apply_sweep(sa, axes[1].parameter, b));
      }
    }
  }

  const std::size_t replicas = options.replicas;
  const std::size_t tasks = points.size() * replicas;
  std::vector<SimulationSummary> results(tasks);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto worker = [&] {
    while (true) {
      const std::size_t task = next.fetch_add(1);
      if (task >= tasks) return;
      try {
        const std::size_t stream = options.common_random_numbers ? task % replicas : task;
        results[task] = simulate(scenarios[task / replicas], stream);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(tasks);
      }
    }
  };

  std::size_t threads = options.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : options.threads;
  threads = std::min(threads, std::max<std::size_t>(tasks, 1));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  for (std::size_t p = 0; p < points.size(); ++p) {
    for (std::size_t r = 0; r < replicas; ++r) points[p].summary.merge(results[p * replicas + r]);
  }
  return points;
}

Table run_experiment(const Scenario& scenario, const std::vector<SweepAxis>& axes,
                     const ExperimentOptions& options) {
  std::vector<std::string> columns;
  for (const auto& axis : axes) columns.push_back(axis.parameter);
  columns.emplace_back("metric");
  columns.emplace_back("value");
  Table table(columns);
  for (const auto& point : run_sweep(scenario, axes, options)) {
    std::vector<Cell> prefix;
    for (std::size_t a = 0; a < axes.size(); ++a) {
      if (axes[a].integral()) {
        prefix.emplace_back(static_cast<std::int64_t>(point.values[a]));
      } else {
        prefix.emplace_back(point.values[a]);
      }
    }
    for (const auto& [name, value] : point.summary.metric_values()) {
      auto row = prefix;
      row.emplace_back(name);
      row.emplace_back(value);
      table.add_row(std::move(row));
    }
  }
  return table;
}

}  // namespace yousense
