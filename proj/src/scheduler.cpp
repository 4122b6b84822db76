#include "maestro/scheduler.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <tuple>

#include "maestro/errors.hpp"

namespace maestro {

std::string_view to_string(Trust t) {
  switch (t) {
    case Trust::Personal: return "personal";
    case Trust::Trusted: return "trusted";
    case Trust::Volunteered: return "volunteered";
  }
  return "?";
}

double SpProfile::queue_end(double now) const {
  return queue.empty() ? now : std::max(now, queue.back().t_finish);
}

int ReplicaCaps::cap(Criticality c) const {
  switch (c) {
    case Criticality::NonCritical: return non_critical;
    case Criticality::Blocking: return blocking;
    case Criticality::Fork: return fork;
  }
  return 1;
}

LevelEnv level_env(std::span<const SpProfile> live_sps, double link_rate, double ccr_threshold) {
  LevelEnv env;
  env.link_rate = link_rate;
  env.ccr_threshold = ccr_threshold;
  if (!live_sps.empty()) {
    double sum = 0.0;
    for (const SpProfile& sp : live_sps) sum += 1.0 / sp.speed;
    env.mean_inverse_speed = sum / static_cast<double>(live_sps.size());
  }
  return env;
}

namespace {

double edge_comm(const Workflow& w, std::size_t parent, const LevelEnv& env) {
  const Task& t = w.tasks()[parent];
  return t.is_dummy ? 0.0 : t.output_size / env.link_rate;
}

}  // namespace

double ccr(const Workflow& w, const LevelEnv& env) {
  double comm = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    for (std::size_t c : w.children(i)) {
      (void)c;
      comm += edge_comm(w, i, env);
    }
  }
  const double comp = w.total_work() * env.mean_inverse_speed;
  if (comp <= 0.0) return comm > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
  return comm / comp;
}

std::map<TaskId, double> compute_levels(const Workflow& w, const LevelEnv& env) {
  const auto order = w.topological_order();
  if (!order) throw CycleError("compute_levels: workflow " + w.id() + " is cyclic");
  const bool with_comm = ccr(w, env) > env.ccr_threshold;

  std::vector<double> level(w.size(), 0.0);
  for (auto it = order->rbegin(); it != order->rend(); ++it) {
    const std::size_t i = *it;
    double tail = 0.0;
    for (std::size_t c : w.children(i)) {
      const double beta = with_comm ? edge_comm(w, i, env) : 0.0;
      tail = std::max(tail, beta + level[c]);
    }
    level[i] = w.tasks()[i].work() * env.mean_inverse_speed + tail;
  }
  std::map<TaskId, double> out;
  for (std::size_t i = 0; i < w.size(); ++i) out[w.tasks()[i].id] = level[i];
  return out;
}

std::vector<ReadyTask> prioritize(std::vector<ReadyTask> ready, PriorityRule rule) {
  if (rule == PriorityRule::LeastSlack) {
    std::stable_sort(ready.begin(), ready.end(), [](const ReadyTask& a, const ReadyTask& b) {
      return std::tie(a.slack, a.arrival, a.task, a.replica) < std::tie(b.slack, b.arrival, b.task, b.replica);
    });
  } else {
    std::stable_sort(ready.begin(), ready.end(), [](const ReadyTask& a, const ReadyTask& b) {
      return std::tie(a.arrival, a.task, a.replica) < std::tie(b.arrival, b.task, b.replica);
    });
  }
  return ready;
}

std::vector<FinishOption> earliest_finish(const ReadyTask& task, std::span<const SpProfile> sps, double now) {
  std::vector<FinishOption> out;
  for (const SpProfile& sp : sps) {
    if (!authorized(task.protection, sp.trust)) continue;
    const double start = sp.queue_end(now);
    out.push_back({sp.sp_id, start, start + task.work / sp.speed});
  }
  if (out.empty()) {
    throw NoEligibleSp("no SP is authorized for " + std::string(to_string(task.protection)) + " task " +
                       std::to_string(task.task.value));
  }
  std::sort(out.begin(), out.end(), [](const FinishOption& a, const FinishOption& b) {
    return std::tie(a.t_finish, a.sp) < std::tie(b.t_finish, b.sp);
  });
  return out;
}

double required_success_probability(std::size_t incomplete, double p_fail) {
  if (incomplete == 0) throw std::domain_error("required_success_probability: no incomplete tasks");
  if (!(p_fail >= 0.0 && p_fail < 1.0)) throw std::domain_error("required_success_probability: p_fail outside [0,1)");
  return std::pow(1.0 - p_fail, 1.0 / static_cast<double>(incomplete));
}

double task_success_probability(const Allocation& alloc, const SpProfile& sp, const AvailabilityModel& model,
                                double now) {
  const double needed = std::max(0.0, alloc.t_finish - now);
  if (needed == 0.0) return 1.0;
  switch (model.family) {
    case AvailabilityModel::Family::Exponential:
      if (std::isinf(model.mean)) return 1.0;
      return std::exp(-needed / model.mean);
    case AvailabilityModel::Family::Deterministic:
      return alloc.t_finish <= sp.advertised_until ? 1.0 : 0.0;
    case AvailabilityModel::Family::Uniform: {
      if (std::isinf(model.mean)) return 1.0;
      // Residual of U[0, 2T̃] given the SP has been present for `age`.
      const double span = 2.0 * model.mean;
      const double age = std::max(0.0, now - sp.join_time);
      if (age >= span) return 0.0;
      return std::clamp((span - age - needed) / (span - age), 0.0, 1.0);
    }
  }
  return 0.0;
}

ReplicaPlan plan_replicas(const ReadyTask& task, std::span<const ReplicaCandidate> candidates) {
  ReplicaPlan plan;
  const std::size_t cap = task.criticality == Criticality::NonCritical
                              ? 1
                              : static_cast<std::size_t>(std::max(1, task.replica_cap));
  double all_fail = 1.0;
  for (const ReplicaCandidate& c : candidates) {
    if (plan.chosen.size() == cap) break;
    plan.chosen.push_back(c);
    all_fail *= 1.0 - c.p;
    if (1.0 - all_fail >= task.required_p_succ) break;
  }
  plan.achieved = 1.0 - all_fail;
  plan.requirement_met = plan.achieved >= task.required_p_succ;
  plan.cap_reached = !plan.requirement_met && plan.chosen.size() == cap;
  return plan;
}

ReadyTask heal(ReadyTask task, double now) {
  task.slack = compute_slack(now, task.deadline, task.level);
  task.replica = 0;
  return task;
}

double ready_dispatch_time(double t, double window) {
  if (window <= 0.0) return t;
  return std::ceil(t / window) * window;
}

}  // namespace maestro
