#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "maestro/sim.hpp"

namespace maestro {

struct RunMetrics {
  std::size_t workflows = 0;
  std::size_t on_time = 0;
  std::size_t late = 0;
  std::size_t failed = 0;
  double pct_success = 0.0;         // on-time completions over all workflows
  double pct_tasks_executed = 0.0;  // scheduled post-dedup tasks over pre-dedup tasks
  std::vector<double> makespans;    // completed workflows, ordered by wf id
  double mean_makespan = 0.0;
  std::size_t replica_count = 0;
  std::size_t comparisons = 0;
  std::size_t original_tasks = 0;
  std::size_t scheduled_tasks = 0;

  friend bool operator==(const RunMetrics&, const RunMetrics&) = default;
};

/// Metrics accumulated while the simulation ran.
RunMetrics metrics_from_result(const SimResult& result);
/// The same metrics recomputed from the event log alone.
RunMetrics metrics_from_log(const std::vector<std::string>& lines);

struct Summary {
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation
  std::size_t n = 0;
};

Summary summarize(const std::vector<double>& values);

}  // namespace maestro
