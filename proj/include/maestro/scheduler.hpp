#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "maestro/workflow.hpp"

namespace maestro {

enum class Trust { Personal, Trusted, Volunteered };

std::string_view to_string(Trust t);

/// Public tasks run anywhere, protected tasks on trusted or personal
/// devices, private tasks on personal devices only.
constexpr bool authorized(Protection p, Trust t) {
  switch (p) {
    case Protection::Public: return true;
    case Protection::Protected: return t != Trust::Volunteered;
    case Protection::Private: return t == Trust::Personal;
  }
  return false;
}

using SpId = std::uint64_t;

struct Allocation {
  TaskId task;
  SpId sp = 0;
  double t_start = 0.0;
  double t_finish = 0.0;
  bool is_replica = false;
  double p_succ = 1.0;
  std::uint64_t id = 0;
};

struct SpProfile {
  SpId sp_id = 0;
  double speed = 1.0;  // work units per second
  Trust trust = Trust::Volunteered;
  std::vector<Allocation> queue;  // ordered, non-overlapping
  double advertised_until = std::numeric_limits<double>::infinity();
  double join_time = 0.0;

  /// Earliest time a newly queued task could start.
  double queue_end(double now) const;
};

struct AvailabilityModel {
  enum class Family { Exponential, Deterministic, Uniform };
  Family family = Family::Exponential;
  /// Mean availability T̃. Uniform draws lie in [0, 2 T̃]. Infinite means
  /// SPs never leave.
  double mean = std::numeric_limits<double>::infinity();
};

struct ReplicaCaps {
  int blocking = 2;
  int fork = 3;
  int non_critical = 1;

  int cap(Criticality c) const;
};

/// Averages over the SPs currently in the cloud, used by level computation.
struct LevelEnv {
  double mean_inverse_speed = 1.0;  // mean of 1/speed over live SPs
  double link_rate = 1.0;           // output-size units per second
  double ccr_threshold = 1.0;
};

LevelEnv level_env(std::span<const SpProfile> live_sps, double link_rate, double ccr_threshold);

/// Communication-to-computation ratio of a workflow under `env`.
double ccr(const Workflow& w, const LevelEnv& env);

/// Longest average-cost path from each task to an exit task, inclusive.
/// Communication terms enter only when ccr(w) exceeds the threshold;
/// edges leaving pass-through tasks carry no communication.
std::map<TaskId, double> compute_levels(const Workflow& w, const LevelEnv& env);

/// Allowed wait before the task must start; negative once it is late.
constexpr double compute_slack(double now, double deadline, double level) { return deadline - level - now; }

struct ReadyTask {
  TaskId task;
  std::string wf_id;
  double arrival = 0.0;  // earliest arrival among served workflows
  double deadline = 0.0;
  double level = 0.0;
  double slack = 0.0;
  double work = 0.0;
  double required_p_succ = 0.0;
  int replica_cap = 1;
  int replica = 0;  // 0 for the original
  Protection protection = Protection::Public;
  Criticality criticality = Criticality::Blocking;
};

enum class PriorityRule { LeastSlack, Fcfs };

/// Least slack first; ties by earlier arrival, then task id, then replica
/// index. Fcfs orders by arrival, then task id.
std::vector<ReadyTask> prioritize(std::vector<ReadyTask> ready, PriorityRule rule = PriorityRule::LeastSlack);

struct FinishOption {
  SpId sp = 0;
  double t_start = 0.0;
  double t_finish = 0.0;
};

/// Authorized SPs by ascending finish time (ties by SP id). Throws
/// NoEligibleSp when authorization rules out every SP.
std::vector<FinishOption> earliest_finish(const ReadyTask& task, std::span<const SpProfile> sps, double now);

/// Per-task success probability so that all `incomplete` tasks succeed with
/// probability 1 - p_fail. Throws std::domain_error when incomplete is 0.
double required_success_probability(std::size_t incomplete, double p_fail);

/// Chance that `sp` stays in the cloud until the allocation finishes.
double task_success_probability(const Allocation& alloc, const SpProfile& sp, const AvailabilityModel& model,
                                double now);

struct ReplicaCandidate {
  FinishOption option;
  double p = 0.0;
};

struct ReplicaPlan {
  std::vector<ReplicaCandidate> chosen;
  double achieved = 0.0;
  bool requirement_met = false;
  bool cap_reached = false;
};

/// Takes candidates in order until 1 - prod(1 - p) reaches the required
/// probability or the task's replica cap is hit. Non-critical tasks get a
/// single allocation.
ReplicaPlan plan_replicas(const ReadyTask& task, std::span<const ReplicaCandidate> candidates);

/// Returns a failed task to the ready set with its slack recomputed at now.
ReadyTask heal(ReadyTask task, double now);

/// When a task that became ready at `t` is dispatched: immediately for a
/// zero window, otherwise at the next window boundary.
double ready_dispatch_time(double t, double window);

}  // namespace maestro
