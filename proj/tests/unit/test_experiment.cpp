#include <doctest.h>

#include <sstream>

#include "yousense/experiment.hpp"

using namespace yousense;

namespace {
std::string csv(const Table& t) {
  std::ostringstream out;
  write_table(out, t, OutputFormat::csv);
  return out.str();
}
}  // namespace

TEST_SUITE("experiment") {

TEST_CASE("sweep syntax") {
  const auto r = parse_sweep("channels=1:5");
  CHECK(r.parameter == "channels");
  CHECK(r.values == std::vector<double>{1, 2, 3, 4, 5});
  CHECK(parse_sweep("channels=10:30:10").values == std::vector<double>{10, 20, 30});
  CHECK(parse_sweep("pairs=1,2,4,10").values == std::vector<double>{1, 2, 4, 10});
  CHECK(parse_sweep("omega=1:2:0.5").values.size() == 3);
  CHECK_THROWS_AS((void)parse_sweep("colour=1,2"), ConfigError);
  CHECK_THROWS_AS((void)parse_sweep("channels"), ConfigError);
  CHECK_THROWS_AS((void)parse_sweep("channels=5:1"), ConfigError);
  CHECK_THROWS_AS((void)parse_sweep("channels=a,b"), ConfigError);
}

TEST_CASE("applying sweep values") {
  const auto base = Scenario::defaults();
  CHECK(apply_sweep(base, "channels", 7).num_channels() == 7);
  CHECK(apply_sweep(base, "selfish", 3).count(Role::ees) == 3);
  CHECK(*apply_sweep(base, "pairs", 4).subset.pairs == 4);
  CHECK_THROWS_AS((void)apply_sweep(base, "selfish", 5), ConfigError);
  CHECK_THROWS_AS((void)apply_sweep(base, "channels", 2.5), ConfigError);
}

TEST_CASE("results do not depend on the number of threads") {
  auto s = Scenario::defaults();
  s.rounds = 20;
  const std::vector<SweepAxis> axes{parse_sweep("channels=5:25:5"), parse_sweep("selfish=0,1")};
  ExperimentOptions one, many;
  one.replicas = many.replicas = 2;
  many.threads = 4;
  const auto a = run_experiment(s, axes, one);
  CHECK(a.rows().size() == 5 * 2 * 10);
  CHECK(a.columns().front() == "channels");
  CHECK(csv(a) == csv(run_experiment(s, axes, many)));
}

TEST_CASE("common random numbers reuse streams across points") {
  auto s = Scenario::defaults();
  s.rounds = 20;
  ExperimentOptions crn;
  crn.common_random_numbers = true;
  const auto points = run_sweep(s, {parse_sweep("rounds=20,20")}, crn);
  REQUIRE(points.size() == 2);
  CHECK(points[0].summary.honest.metrics().false_positive_rate ==
        points[1].summary.honest.metrics().false_positive_rate);
  const auto independent = run_sweep(s, {parse_sweep("rounds=20,20")});
  CHECK(independent[0].summary.honest.metrics().false_positive_rate !=
        independent[1].summary.honest.metrics().false_positive_rate);
}

}
