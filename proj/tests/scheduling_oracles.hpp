// Brute-force references for level, priority and replication computations.
#pragma once

#include <cmath>
#include <map>
#include <vector>

#include "maestro/scheduler.hpp"
#include "maestro/workflow.hpp"

namespace maestro::testing {

/// Longest cost over every explicit path from each task to an exit task.
inline std::map<TaskId, double> levels_by_path_enumeration(const Workflow& w, double mean_inverse_speed,
                                                           double link_rate, double ccr_threshold) {
  std::vector<std::vector<std::size_t>> kids(w.size());
  double comm = 0.0, comp = 0.0;
  for (const Edge& e : w.edges()) {
    const std::size_t p = w.index_of(e.parent);
    kids[p].push_back(w.index_of(e.child));
    if (!w.tasks()[p].is_dummy) comm += w.tasks()[p].output_size / link_rate;
  }
  for (const Task& t : w.tasks()) comp += t.work() * mean_inverse_speed;
  const bool with_comm = comp > 0.0 ? comm / comp > ccr_threshold : comm > 0.0;

  auto cost = [&](std::size_t i) { return w.tasks()[i].work() * mean_inverse_speed; };
  auto beta = [&](std::size_t i) { return with_comm && !w.tasks()[i].is_dummy ? w.tasks()[i].output_size / link_rate : 0.0; };

  std::map<TaskId, double> out;
  for (std::size_t start = 0; start < w.size(); ++start) {
    double best = 0.0;
    // Explicit stack of partial paths. Each complete path is summed from its
    // exit back to the start, so the result is exact under any rounding.
    std::vector<std::vector<std::size_t>> stack{{start}};
    while (!stack.empty()) {
      std::vector<std::size_t> path = std::move(stack.back());
      stack.pop_back();
      const std::size_t node = path.back();
      if (kids[node].empty()) {
        double acc = cost(path.back());
        for (std::size_t k = path.size() - 1; k-- > 0;) acc = cost(path[k]) + (beta(path[k]) + acc);
        best = std::max(best, acc);
      }
      for (std::size_t c : kids[node]) {
        std::vector<std::size_t> next = path;
        next.push_back(c);
        stack.push_back(std::move(next));
      }
    }
    out[w.tasks()[start].id] = best;
  }
  return out;
}

/// Insertion sort on (slack, arrival, task, replica) with recomputed slack.
inline std::vector<ReadyTask> reference_priority(std::vector<ReadyTask> ready, double now) {
  for (ReadyTask& r : ready) r.slack = r.deadline - r.level - now;
  auto before = [](const ReadyTask& a, const ReadyTask& b) {
    if (a.slack != b.slack) return a.slack < b.slack;
    if (a.arrival != b.arrival) return a.arrival < b.arrival;
    if (a.task.value != b.task.value) return a.task.value < b.task.value;
    return a.replica < b.replica;
  };
  for (std::size_t i = 1; i < ready.size(); ++i) {
    for (std::size_t j = i; j > 0 && before(ready[j], ready[j - 1]); --j) std::swap(ready[j], ready[j - 1]);
  }
  return ready;
}

/// Length of the shortest candidate prefix meeting the requirement, or the
/// cap-limited full prefix when none does.
inline std::size_t minimal_prefix(const std::vector<double>& ps, double required, std::size_t cap) {
  const std::size_t limit = std::min(cap, ps.size());
  for (std::size_t n = 1; n <= limit; ++n) {
    double fail = 1.0;
    for (std::size_t i = 0; i < n; ++i) fail *= 1.0 - ps[i];
    if (1.0 - fail >= required) return n;
  }
  return limit;
}

}  // namespace maestro::testing
