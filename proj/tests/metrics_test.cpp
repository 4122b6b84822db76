#include <doctest.h>

#include <cmath>

#include "maestro/errors.hpp"
#include "maestro/metrics.hpp"
#include "maestro/sim.hpp"

using namespace maestro;

namespace {

WorkflowTrace small_trace(std::uint64_t seed) {
  GeneratorSpec g;
  g.kind_pools = {make_kind_pool("a", 3, {2.0, 6.0}, {0.5, 1.0}, seed),
                  make_kind_pool("b", 3, {2.0, 6.0}, {0.5, 1.0}, seed + 1)};
  g.protection = {0.1, 0.2, 0.7};
  g.non_critical_fraction = 0.2;
  TraceSpec spec;
  spec.n_requests = 60;
  spec.mean_interarrival = 4.0;
  spec.pool_size = 6;
  spec.deadline = {30.0, 60.0};
  return generate_trace(spec, g, seed);
}

}  // namespace

TEST_CASE("metrics from the log match metrics from the run") {
  for (Policy policy : {Policy::Baseline, Policy::HealingOnly, Policy::HealingPlusProtection, Policy::Fcfs}) {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      SimConfig cfg;
      cfg.seed = seed;
      cfg.policy = policy;
      cfg.churn = ChurnConfig::from_population(6.0, 25.0 * static_cast<double>(seed));
      cfg.trust = {0.2, 0.3, 0.5};
      cfg.sp_speed = {0.5, 2.0};
      cfg.delta_wait = seed % 2 ? 5.0 : 0.0;
      const SimResult r = run(cfg, small_trace(seed));
      const RunMetrics direct = metrics_from_result(r);
      const RunMetrics replayed = metrics_from_log(r.log);
      CHECK(direct == replayed);
      CHECK(direct.workflows == 60);
      CHECK(direct.on_time + direct.late + direct.failed == direct.workflows);
      CHECK(direct.pct_success >= 0.0);
      CHECK(direct.pct_success <= 100.0);
      CHECK(direct.pct_tasks_executed <= 100.0);
      CHECK(direct.makespans.size() == direct.on_time + direct.late);
      for (double m : direct.makespans) CHECK(m >= 0.0);
    }
  }
}

TEST_CASE("malformed logs are rejected") {
  CHECK_THROWS_AS(metrics_from_log({"not json"}), FormatError);
  CHECK_THROWS_AS(metrics_from_log({R"({"t":0})"}), FormatError);
  CHECK(metrics_from_log({}).workflows == 0);
}

TEST_CASE("summaries use the sample standard deviation") {
  const Summary s = summarize({2.0, 4.0, 4.0, 4.0, 5.0, 5.0, 7.0, 9.0});
  CHECK(s.n == 8);
  CHECK(s.mean == doctest::Approx(5.0));
  CHECK(s.stddev == doctest::Approx(std::sqrt(32.0 / 7.0)));
  CHECK(summarize({3.0}).stddev == 0.0);
  CHECK(summarize({}).n == 0);
}
