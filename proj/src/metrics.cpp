#include "maestro/metrics.hpp"

#include <cmath>
#include <map>
#include <set>

#include <json.hpp>

#include "maestro/errors.hpp"

namespace maestro {
namespace {

void finish(RunMetrics& m, const std::map<std::string, double>& makespan_by_wf) {
  for (const auto& [wf, span] : makespan_by_wf) m.makespans.push_back(span);
  double sum = 0.0;
  for (double s : m.makespans) sum += s;
  m.mean_makespan = m.makespans.empty() ? 0.0 : sum / static_cast<double>(m.makespans.size());
  m.pct_success = m.workflows == 0 ? 0.0 : 100.0 * static_cast<double>(m.on_time) / static_cast<double>(m.workflows);
  m.pct_tasks_executed = m.original_tasks == 0 ? 0.0
                                               : 100.0 * static_cast<double>(m.scheduled_tasks) /
                                                     static_cast<double>(m.original_tasks);
}

}  // namespace

RunMetrics metrics_from_result(const SimResult& result) {
  RunMetrics m;
  std::map<std::string, double> spans;
  for (const WorkflowResult& w : result.workflows) {
    ++m.workflows;
    switch (w.outcome) {
      case Outcome::CompletedOnTime: ++m.on_time; break;
      case Outcome::CompletedLate: ++m.late; break;
      case Outcome::Failed: ++m.failed; break;
    }
    if (w.outcome != Outcome::Failed) spans[w.wf_id] = w.finish - w.arrival;
  }
  m.replica_count = result.replicas;
  m.comparisons = result.comparisons;
  m.original_tasks = result.original_tasks;
  m.scheduled_tasks = result.scheduled_tasks;
  finish(m, spans);
  return m;
}

RunMetrics metrics_from_log(const std::vector<std::string>& lines) {
  RunMetrics m;
  std::map<std::string, double> spans;
  std::set<std::pair<std::uint64_t, std::uint64_t>> scheduled;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    try {
      const nlohmann::json rec = nlohmann::json::parse(lines[i]);
      const std::string ev = rec.at("ev").get<std::string>();
      if (ev == "arrival") {
        m.original_tasks += rec.at("tasks").get<std::size_t>();
      } else if (ev == "dedup") {
        m.comparisons += rec.at("comparisons").get<std::size_t>();
      } else if (ev == "alloc") {
        if (rec.at("replica").get<bool>()) ++m.replica_count;
        scheduled.emplace(rec.at("job").get<std::uint64_t>(), rec.at("task").get<std::uint64_t>());
      } else if (ev == "wf_done") {
        ++m.workflows;
        const std::string outcome = rec.at("outcome").get<std::string>();
        if (outcome == "on_time") {
          ++m.on_time;
        } else if (outcome == "late") {
          ++m.late;
        } else {
          ++m.failed;
        }
        if (outcome != "failed") {
          spans[rec.at("wf").get<std::string>()] = rec.at("finish").get<double>() - rec.at("arrival").get<double>();
        }
      }
    } catch (const nlohmann::json::exception& e) {
      throw FormatError("event log line " + std::to_string(i + 1) + ": " + e.what());
    }
  }
  m.scheduled_tasks = scheduled.size();
  finish(m, spans);
  return m;
}

Summary summarize(const std::vector<double>& values) {
  Summary s;
  s.n = values.size();
  if (s.n == 0) return s;
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / static_cast<double>(s.n);
  if (s.n > 1) {
    double sq = 0.0;
    for (double v : values) sq += (v - s.mean) * (v - s.mean);
    s.stddev = std::sqrt(sq / static_cast<double>(s.n - 1));
  }
  return s;
}

}  // namespace maestro
