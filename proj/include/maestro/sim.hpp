#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "maestro/churn.hpp"
#include "maestro/generator.hpp"
#include "maestro/scheduler.hpp"
#include "maestro/trace.hpp"

namespace maestro {

/// Baseline: no healing, no replication. HealingOnly reallocates failed
/// tasks. HealingPlusProtection also replicates. Fcfs is the full scheme
/// with first-come-first-served ordering instead of least slack.
enum class Policy { Baseline, HealingOnly, HealingPlusProtection, Fcfs };

std::string_view to_string(Policy p);
std::optional<Policy> parse_policy(std::string_view s);

struct TrustMix {
  double personal = 0.0;
  double trusted = 0.0;
  double volunteered = 1.0;
};

/// An SP with scripted attributes and presence, bypassing churn.
struct FixedSp {
  double speed = 1.0;
  Trust trust = Trust::Volunteered;
  double join = 0.0;
  double leave = std::numeric_limits<double>::infinity();
};

struct SimConfig {
  std::uint64_t seed = 1;
  ChurnConfig churn = ChurnConfig::static_pool(10);
  double delta_wait = 0.0;   // dedup window, s
  double delta_ready = 0.0;  // ready-task window, s
  double ccr_threshold = 1.0;
  double link_rate = 1.0;
  ReplicaCaps caps;
  TrustMix trust;
  RealRange sp_speed{1.0, 1.0};
  AvailabilityModel::Family availability = AvailabilityModel::Family::Exponential;
  Policy policy = Policy::HealingPlusProtection;
  /// Simulation end; workflows still open then fail. 0 picks the latest
  /// absolute deadline plus the dedup window plus the longest relative deadline.
  double horizon = 0.0;
  bool keep_log = true;
  /// When non-empty, these SPs replace the churn process. The churn mean
  /// availability still feeds the success-probability model.
  std::vector<FixedSp> fixed_sps;

  /// Throws ConfigError.
  void check() const;
};

enum class Outcome { CompletedOnTime, CompletedLate, Failed };

std::string_view to_string(Outcome o);

struct WorkflowResult {
  std::string wf_id;
  double arrival = 0.0;
  double deadline = 0.0;  // absolute
  Outcome outcome = Outcome::Failed;
  double finish = 0.0;    // completion or failure time
  std::size_t tasks = 0;  // real tasks before dedup
};

struct SimResult {
  std::vector<WorkflowResult> workflows;
  std::vector<std::string> log;  // one JSON record per line
  std::size_t original_tasks = 0;
  std::size_t scheduled_tasks = 0;  // distinct post-dedup tasks allocated at least once
  std::size_t allocations = 0;
  std::size_t replicas = 0;
  std::size_t allocation_failures = 0;
  std::size_t heals = 0;
  std::size_t comparisons = 0;
  std::size_t sp_joins = 0;
  std::size_t sp_leaves = 0;
  double horizon = 0.0;

  std::string log_text() const;
};

/// Runs one simulation. Deterministic for a fixed (config, trace).
SimResult run(const SimConfig& config, const WorkflowTrace& trace);
/// Same for requests that already carry absolute arrivals and deadlines.
SimResult run(const SimConfig& config, const std::vector<Workflow>& requests);

struct ExecutionOutcome {
  bool success = false;
  double time = 0.0;  // completion or failure time
};

/// An allocation completes at its finish time if its SP is still present
/// then; otherwise it fails when the SP leaves.
ExecutionOutcome execute(const Allocation& alloc, double sp_leave_time);

}  // namespace maestro
