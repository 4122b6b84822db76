#include "maestro/sim.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <queue>
#include <set>
#include <tuple>

#include <json.hpp>

#include "maestro/dedup.hpp"
#include "maestro/errors.hpp"

namespace maestro {

std::string_view to_string(Policy p) {
  switch (p) {
    case Policy::Baseline: return "baseline";
    case Policy::HealingOnly: return "healing";
    case Policy::HealingPlusProtection: return "protection";
    case Policy::Fcfs: return "fcfs";
  }
  return "?";
}

std::optional<Policy> parse_policy(std::string_view s) {
  for (Policy p : {Policy::Baseline, Policy::HealingOnly, Policy::HealingPlusProtection, Policy::Fcfs}) {
    if (to_string(p) == s) return p;
  }
  return std::nullopt;
}

std::string_view to_string(Outcome o) {
  switch (o) {
    case Outcome::CompletedOnTime: return "on_time";
    case Outcome::CompletedLate: return "late";
    case Outcome::Failed: return "failed";
  }
  return "?";
}

void SimConfig::check() const {
  churn.check();
  if (!(delta_wait >= 0.0) || !(delta_ready >= 0.0)) throw ConfigError("sim: windows must be non-negative");
  if (!(ccr_threshold >= 0.0)) throw ConfigError("sim: ccr_threshold must be non-negative");
  if (!(link_rate > 0.0)) throw ConfigError("sim: link_rate must be positive");
  if (caps.blocking < 1 || caps.fork < 1 || caps.non_critical < 1) throw ConfigError("sim: replica caps must be >= 1");
  if (sp_speed.empty() || !(sp_speed.lo > 0.0)) throw ConfigError("sim: SP speed range must be positive");
  const double mix = trust.personal + trust.trusted + trust.volunteered;
  if (trust.personal < 0 || trust.trusted < 0 || trust.volunteered < 0 || std::abs(mix - 1.0) > 1e-9) {
    throw ConfigError("sim: trust mix must be non-negative and sum to 1");
  }
  if (!(horizon >= 0.0)) throw ConfigError("sim: horizon must be non-negative");
  for (const FixedSp& sp : fixed_sps) {
    if (!(sp.speed > 0.0) || !(sp.join >= 0.0) || !(sp.leave >= sp.join)) throw ConfigError("sim: bad fixed SP");
  }
}

std::string SimResult::log_text() const {
  std::string out;
  for (const std::string& line : log) {
    out += line;
    out += '\n';
  }
  return out;
}

ExecutionOutcome execute(const Allocation& alloc, double sp_leave_time) {
  if (sp_leave_time > alloc.t_finish) return {true, alloc.t_finish};
  return {false, std::max(sp_leave_time, alloc.t_start)};
}

namespace {

enum class EventKind { WorkflowArrival, SpJoin, SpLeave, TaskComplete, DedupWindowExpiry, ReadyWindowExpiry };

struct Event {
  double time;
  std::uint64_t seq;
  EventKind kind;
  std::uint64_t arg;
};

struct Later {
  bool operator()(const Event& a, const Event& b) const { return std::tie(a.time, a.seq) > std::tie(b.time, b.seq); }
};

enum class TaskState { Waiting, Ready, Running, Done, Dead };
enum class AllocState { Running, Queued, Done, Failed, Cancelled };

struct JobTask {
  TaskState state = TaskState::Waiting;
  std::size_t pending = 0;
  std::vector<std::size_t> served;  // request indices
  std::vector<std::uint64_t> live;  // allocation ids
  bool allocated = false;
  double deadline = 0.0;
  double arrival = 0.0;
};

struct Job {
  Workflow w;
  std::vector<JobTask> tasks;
};

struct Request {
  Workflow wf;
  std::size_t remaining = 0;
  bool open = true;
  WorkflowResult result;
};

struct AllocRec {
  std::size_t job = 0;
  std::size_t idx = 0;
  SpId sp = 0;
  AllocState state = AllocState::Queued;
};

using TaskKey = std::pair<std::size_t, std::size_t>;  // (job, index in job)

class Engine {
 public:
  Engine(const SimConfig& cfg, const std::vector<Workflow>& requests) : cfg_(cfg) {
    cfg_.check();
    std::map<std::string, std::size_t> seen;
    double last_deadline = 0.0, longest = 0.0;
    for (const Workflow& w : requests) {
      const ValidationReport report = validate(w);
      if (!report.ok()) throw ConfigError("sim: workflow " + w.id() + " is invalid: " + report.violations.front().detail);
      if (!seen.emplace(w.id(), requests_.size()).second) throw ConfigError("sim: duplicate workflow id " + w.id());
      Request r;
      r.wf = w;
      r.result.wf_id = w.id();
      r.result.arrival = w.arrival_time();
      r.result.deadline = w.deadline();
      r.result.tasks = w.real_task_count();
      requests_.push_back(std::move(r));
      last_deadline = std::max(last_deadline, w.deadline());
      longest = std::max(longest, w.deadline() - w.arrival_time());
      result_.original_tasks += w.real_task_count();
    }
    horizon_ = cfg_.horizon > 0.0 ? cfg_.horizon : last_deadline + cfg_.delta_wait + longest;
    result_.horizon = horizon_;
    model_.family = cfg_.availability;
    model_.mean = cfg_.churn.mean_availability;
  }

  SimResult run() {
    Rng churn_rng(cfg_.seed, Stream::Churn);
    std::vector<SpLifetime> lives;
    if (!cfg_.fixed_sps.empty()) {
      for (std::size_t i = 0; i < cfg_.fixed_sps.size(); ++i) {
        lives.push_back({i, cfg_.fixed_sps[i].join, cfg_.fixed_sps[i].leave});
      }
    } else if (!requests_.empty()) {
      lives = spawn_churn(cfg_.churn, horizon_, churn_rng);
    }
    assign_attributes(lives);
    for (const SpLifetime& l : lives) {
      push(l.join, EventKind::SpJoin, l.id);
      if (std::isfinite(l.leave)) push(l.leave, EventKind::SpLeave, l.id);
    }
    std::vector<std::size_t> order(requests_.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return requests_[a].wf.arrival_time() < requests_[b].wf.arrival_time();
    });
    for (std::size_t i : order) push(requests_[i].wf.arrival_time(), EventKind::WorkflowArrival, i);

    while (!events_.empty()) {
      const Event e = events_.top();
      if (e.time > horizon_) break;
      events_.pop();
      now_ = e.time;
      handle(e);
      if (dispatch_due_) {
        dispatch_due_ = false;
        dispatch();
      }
    }
    now_ = horizon_;
    for (std::size_t r = 0; r < requests_.size(); ++r) {
      if (requests_[r].open) close(r, Outcome::Failed);
    }
    for (Request& r : requests_) result_.workflows.push_back(r.result);
    if (!requests_.empty()) emit_summary();
    return std::move(result_);
  }

 private:
  // ----- events -------------------------------------------------------------

  void push(double time, EventKind kind, std::uint64_t arg) { events_.push(Event{time, seq_++, kind, arg}); }

  void handle(const Event& e) {
    switch (e.kind) {
      case EventKind::WorkflowArrival: on_arrival(e.arg); break;
      case EventKind::SpJoin: on_join(e.arg); break;
      case EventKind::SpLeave: on_leave(e.arg); break;
      case EventKind::TaskComplete: on_complete(e.arg); break;
      case EventKind::DedupWindowExpiry: on_dedup_window(); break;
      case EventKind::ReadyWindowExpiry:
        ready_windows_.erase(e.time);
        dispatch();
        break;
    }
  }

  void on_arrival(std::size_t r) {
    log({{"ev", "arrival"}, {"wf", requests_[r].wf.id()}, {"tasks", requests_[r].result.tasks},
         {"deadline", requests_[r].wf.deadline()}});
    if (cfg_.delta_wait <= 0.0) {
      form_jobs({r});
      return;
    }
    if (batch_.empty()) push(now_ + cfg_.delta_wait, EventKind::DedupWindowExpiry, 0);
    batch_.push_back(r);
  }

  void on_dedup_window() {
    std::vector<std::size_t> batch;
    batch.swap(batch_);
    form_jobs(batch);
  }

  void on_join(SpId id) {
    SpProfile sp = attributes_[id];
    sp.join_time = now_;
    ++result_.sp_joins;
    log({{"ev", "sp_join"}, {"sp", id}, {"speed", sp.speed}, {"trust", to_string(sp.trust)}});
    live_.push_back(std::move(sp));
    if (!ready_.empty()) request_dispatch();
  }

  void on_leave(SpId id) {
    auto it = find_sp(id);
    if (it == live_.end()) return;
    ++result_.sp_leaves;
    log({{"ev", "sp_leave"}, {"sp", id}});
    const std::vector<Allocation> queue = std::move(it->queue);
    live_.erase(it);
    for (const Allocation& a : queue) {
      AllocRec& rec = allocs_[a.id];
      rec.state = AllocState::Failed;
      ++result_.allocation_failures;
      JobTask& task = jobs_[rec.job].tasks[rec.idx];
      log({{"ev", "fail"}, {"alloc", a.id}, {"job", rec.job}, {"task", a.task.value}, {"sp", id}});
      std::erase(task.live, a.id);
      if (task.live.empty() && task.state == TaskState::Running) lost(rec.job, rec.idx);
    }
  }

  void on_complete(std::uint64_t alloc_id) {
    AllocRec& rec = allocs_[alloc_id];
    if (rec.state != AllocState::Running) return;
    rec.state = AllocState::Done;
    auto sp = find_sp(rec.sp);
    const std::size_t job = rec.job, idx = rec.idx;
    log({{"ev", "complete"}, {"alloc", alloc_id}, {"job", job}, {"task", jobs_[job].w.tasks()[idx].id.value},
         {"sp", rec.sp}});
    sp->queue.erase(sp->queue.begin());
    JobTask& task = jobs_[job].tasks[idx];
    std::erase(task.live, alloc_id);
    const std::vector<std::uint64_t> siblings = task.live;
    for (std::uint64_t s : siblings) cancel(s);
    task.live.clear();
    restart_queue(*sp);
    if (task.state == TaskState::Running) finish_task(job, idx);
  }

  // ----- SP queues ----------------------------------------------------------

  std::vector<SpProfile>::iterator find_sp(SpId id) {
    auto it = std::lower_bound(live_.begin(), live_.end(), id,
                               [](const SpProfile& sp, SpId v) { return sp.sp_id < v; });
    return it != live_.end() && it->sp_id == id ? it : live_.end();
  }

  double duration(const Allocation& a, const SpProfile& sp) const {
    const AllocRec& rec = allocs_[a.id];
    return jobs_[rec.job].w.tasks()[rec.idx].work() / sp.speed;
  }

  /// Starts the head allocation if idle and re-times the rest back to back.
  void restart_queue(SpProfile& sp) {
    double t = now_;
    for (std::size_t i = 0; i < sp.queue.size(); ++i) {
      Allocation& a = sp.queue[i];
      AllocRec& rec = allocs_[a.id];
      if (i == 0 && rec.state == AllocState::Running) {
        t = a.t_finish;
        continue;
      }
      a.t_start = t;
      a.t_finish = t + duration(a, sp);
      t = a.t_finish;
      if (i == 0) {
        rec.state = AllocState::Running;
        push(a.t_finish, EventKind::TaskComplete, a.id);
      }
    }
  }

  void cancel(std::uint64_t alloc_id) {
    AllocRec& rec = allocs_[alloc_id];
    if (rec.state != AllocState::Running && rec.state != AllocState::Queued) return;
    rec.state = AllocState::Cancelled;
    log({{"ev", "cancel"}, {"alloc", alloc_id}, {"job", rec.job}, {"task", jobs_[rec.job].w.tasks()[rec.idx].id.value},
         {"sp", rec.sp}});
    auto sp = find_sp(rec.sp);
    if (sp == live_.end()) return;
    std::erase_if(sp->queue, [&](const Allocation& a) { return a.id == alloc_id; });
    restart_queue(*sp);
  }

  // ----- workflow bookkeeping -----------------------------------------------

  void form_jobs(const std::vector<std::size_t>& batch_requests) {
    DedupBatch batch;
    batch.window = cfg_.delta_wait;
    std::map<std::string, std::size_t> index;
    for (std::size_t r : batch_requests) {
      batch.workflows.push_back(requests_[r].wf);
      index[requests_[r].wf.id()] = r;
    }
    const MergedWorkflowSet merged = dedup(batch);
    result_.comparisons += merged.comparisons;
    log({{"ev", "dedup"}, {"workflows", batch_requests.size()}, {"tasks_in", merged.original_tasks},
         {"tasks_out", merged.surviving_tasks()}, {"comparisons", merged.comparisons}});

    std::vector<TaskKey> roots;
    for (const Workflow& w : merged.workflows) {
      const std::size_t j = jobs_.size();
      Job job{w, std::vector<JobTask>(w.size())};
      for (std::size_t i = 0; i < w.size(); ++i) {
        JobTask& jt = job.tasks[i];
        const Task& t = w.tasks()[i];
        jt.pending = w.parents(i).size();
        jt.deadline = w.deadline();
        jt.arrival = w.arrival_time();
        if (!t.is_dummy) {
          std::set<std::size_t> served;
          for (const TaskRef& ref : merged.provenance.at(t.id)) served.insert(index.at(ref.wf_id));
          jt.served.assign(served.begin(), served.end());
          jt.deadline = std::numeric_limits<double>::infinity();
          jt.arrival = std::numeric_limits<double>::infinity();
          for (std::size_t r : jt.served) {
            jt.deadline = std::min(jt.deadline, requests_[r].wf.deadline());
            jt.arrival = std::min(jt.arrival, requests_[r].wf.arrival_time());
            ++requests_[r].remaining;
          }
          survivor_[t.id] = {j, i};
        }
        if (jt.pending == 0) roots.emplace_back(j, i);
      }
      jobs_.push_back(std::move(job));
    }
    for (auto [j, i] : roots) make_ready(j, i);
  }

  void make_ready(std::size_t job, std::size_t idx) {
    JobTask& t = jobs_[job].tasks[idx];
    if (jobs_[job].w.tasks()[idx].is_dummy) {
      finish_task(job, idx);
      return;
    }
    t.state = TaskState::Ready;
    ready_.insert({job, idx});
    request_dispatch();
  }

  void finish_task(std::size_t job, std::size_t idx) {
    JobTask& t = jobs_[job].tasks[idx];
    t.state = TaskState::Done;
    ready_.erase({job, idx});
    for (std::size_t r : t.served) {
      Request& req = requests_[r];
      if (req.remaining > 0) --req.remaining;
      if (req.remaining == 0 && req.open) {
        close(r, now_ <= req.wf.deadline() ? Outcome::CompletedOnTime : Outcome::CompletedLate);
      }
    }
    const Workflow& w = jobs_[job].w;
    for (std::size_t c : w.children(idx)) {
      if (--jobs_[job].tasks[c].pending == 0) make_ready(job, c);
    }
  }

  /// Every allocation of a running task has failed.
  void lost(std::size_t job, std::size_t idx) {
    JobTask& t = jobs_[job].tasks[idx];
    const TaskId id = jobs_[job].w.tasks()[idx].id;
    if (cfg_.policy == Policy::Baseline) {
      t.state = TaskState::Dead;
      log({{"ev", "dead"}, {"job", job}, {"task", id.value}});
      for (std::size_t r : t.served) {
        if (requests_[r].open) close(r, Outcome::Failed);
      }
      return;
    }
    ++result_.heals;
    log({{"ev", "heal"}, {"job", job}, {"task", id.value}});
    make_ready(job, idx);
  }

  void close(std::size_t r, Outcome outcome) {
    Request& req = requests_[r];
    req.open = false;
    req.result.outcome = outcome;
    req.result.finish = now_;
    log({{"ev", "wf_done"}, {"wf", req.wf.id()}, {"outcome", to_string(outcome)}, {"arrival", req.result.arrival},
         {"deadline", req.result.deadline}, {"finish", now_}, {"tasks", req.result.tasks}});
  }

  // ----- dispatch -----------------------------------------------------------

  void request_dispatch() {
    if (cfg_.delta_ready <= 0.0) {
      dispatch_due_ = true;
      return;
    }
    const double t = ready_dispatch_time(now_, cfg_.delta_ready);
    if (ready_windows_.insert(t).second) push(t, EventKind::ReadyWindowExpiry, 0);
  }

  bool replicates() const {
    return cfg_.policy == Policy::HealingPlusProtection || cfg_.policy == Policy::Fcfs;
  }

  double required_probability(const JobTask& t) const {
    double req = 0.0;
    for (std::size_t r : t.served) {
      const Request& q = requests_[r];
      if (!q.open || q.remaining == 0) continue;
      req = std::max(req, required_success_probability(q.remaining, q.wf.p_fail()));
    }
    return req;
  }

  void dispatch() {
    if (ready_.empty() || live_.empty()) return;
    const LevelEnv env = level_env(live_, cfg_.link_rate, cfg_.ccr_threshold);
    std::map<std::size_t, std::map<TaskId, double>> levels;
    std::vector<ReadyTask> batch;
    for (auto [j, i] : ready_) {
      auto lv = levels.find(j);
      if (lv == levels.end()) lv = levels.emplace(j, compute_levels(jobs_[j].w, env)).first;
      const Task& task = jobs_[j].w.tasks()[i];
      const JobTask& jt = jobs_[j].tasks[i];
      ReadyTask rt;
      rt.task = task.id;
      rt.wf_id = jobs_[j].w.id();
      rt.arrival = jt.arrival;
      rt.deadline = jt.deadline;
      rt.level = lv->second.at(task.id);
      rt.slack = compute_slack(now_, rt.deadline, rt.level);
      rt.work = task.work();
      rt.protection = task.protection;
      rt.criticality = task.criticality;
      rt.replica_cap = cfg_.caps.cap(task.criticality);
      rt.required_p_succ = required_probability(jt);
      batch.push_back(std::move(rt));
    }
    const PriorityRule rule = cfg_.policy == Policy::Fcfs ? PriorityRule::Fcfs : PriorityRule::LeastSlack;
    for (const ReadyTask& rt : prioritize(std::move(batch), rule)) allocate(rt);
  }

  void allocate(const ReadyTask& rt) {
    std::vector<FinishOption> options;
    try {
      options = earliest_finish(rt, live_, now_);
    } catch (const NoEligibleSp&) {
      return;  // waits for an authorized SP to join
    }
    std::vector<ReplicaCandidate> chosen;
    if (replicates()) {
      std::vector<ReplicaCandidate> candidates;
      for (const FinishOption& o : options) {
        const SpProfile& sp = *find_sp(o.sp);
        const double p = task_success_probability(Allocation{rt.task, o.sp, o.t_start, o.t_finish}, sp, model_, now_);
        candidates.push_back({o, p});
      }
      chosen = plan_replicas(rt, candidates).chosen;
    } else {
      const SpProfile& sp = *find_sp(options.front().sp);
      const FinishOption& o = options.front();
      chosen.push_back({o, task_success_probability(Allocation{rt.task, o.sp, o.t_start, o.t_finish}, sp, model_, now_)});
    }

    const auto [j, i] = survivor_.at(rt.task);
    JobTask& jt = jobs_[j].tasks[i];
    for (std::size_t k = 0; k < chosen.size(); ++k) {
      const ReplicaCandidate& c = chosen[k];
      SpProfile& sp = *find_sp(c.option.sp);
      Allocation a{rt.task, sp.sp_id, c.option.t_start, c.option.t_finish, k > 0, c.p, allocs_.size()};
      const bool idle = sp.queue.empty();
      allocs_.push_back(AllocRec{j, i, sp.sp_id, idle ? AllocState::Running : AllocState::Queued});
      sp.queue.push_back(a);
      if (idle) push(a.t_finish, EventKind::TaskComplete, a.id);
      jt.live.push_back(a.id);
      ++result_.allocations;
      if (a.is_replica) ++result_.replicas;
      log({{"ev", "alloc"}, {"alloc", a.id}, {"job", j}, {"task", rt.task.value}, {"sp", a.sp},
           {"t_start", a.t_start}, {"t_finish", a.t_finish}, {"replica", a.is_replica}, {"p", a.p_succ},
           {"slack", rt.slack}, {"protection", to_string(rt.protection)}, {"trust", to_string(sp.trust)}});
    }
    if (!jt.allocated) {
      jt.allocated = true;
      ++result_.scheduled_tasks;
    }
    jt.state = TaskState::Running;
    ready_.erase({j, i});
  }

  // ----- setup and output ---------------------------------------------------

  void assign_attributes(const std::vector<SpLifetime>& lives) {
    Rng attr(cfg_.seed, Stream::SpAttributes);
    const TrustMix& m = cfg_.trust;
    auto draw_trust = [&](double u) {
      if (u < m.personal) return Trust::Personal;
      if (u < m.personal + m.trusted) return Trust::Trusted;
      return Trust::Volunteered;
    };
    // The initial population follows the mix exactly (largest remainder).
    const std::size_t n0 = cfg_.churn.initial_population;
    std::vector<Trust> initial;
    {
      const double shares[3] = {m.personal * n0, m.trusted * n0, m.volunteered * n0};
      std::size_t counts[3];
      std::size_t total = 0;
      for (int k = 0; k < 3; ++k) total += counts[k] = static_cast<std::size_t>(std::floor(shares[k]));
      std::vector<int> by_remainder{0, 1, 2};
      std::stable_sort(by_remainder.begin(), by_remainder.end(), [&](int a, int b) {
        return shares[a] - std::floor(shares[a]) > shares[b] - std::floor(shares[b]);
      });
      for (std::size_t k = 0; total < n0; ++k, ++total) ++counts[by_remainder[k % 3]];
      const Trust kinds[3] = {Trust::Personal, Trust::Trusted, Trust::Volunteered};
      for (int k = 0; k < 3; ++k) initial.insert(initial.end(), counts[k], kinds[k]);
      Rng shuffle(cfg_.seed, Stream::SpAttributes, 1);
      for (std::size_t k = initial.size(); k > 1; --k) {
        std::swap(initial[k - 1], initial[static_cast<std::size_t>(shuffle.uniform_int(0, static_cast<int>(k) - 1))]);
      }
    }
    for (const SpLifetime& l : lives) {
      SpProfile sp;
      sp.sp_id = l.id;
      sp.speed = attr.uniform(cfg_.sp_speed.lo, cfg_.sp_speed.hi);
      const double u = attr.uniform();
      sp.trust = l.id < initial.size() ? initial[l.id] : draw_trust(u);
      sp.advertised_until = l.leave;
      if (!cfg_.fixed_sps.empty()) {
        sp.speed = cfg_.fixed_sps[l.id].speed;
        sp.trust = cfg_.fixed_sps[l.id].trust;
      }
      attributes_.push_back(std::move(sp));
    }
  }

  void log(nlohmann::ordered_json record) {
    if (!cfg_.keep_log) return;
    nlohmann::ordered_json line;
    line["t"] = now_;
    for (auto& [k, v] : record.items()) line[k] = v;
    result_.log.push_back(line.dump());
  }

  void emit_summary() {
    std::size_t on_time = 0, late = 0, failed = 0;
    for (const WorkflowResult& w : result_.workflows) {
      on_time += w.outcome == Outcome::CompletedOnTime;
      late += w.outcome == Outcome::CompletedLate;
      failed += w.outcome == Outcome::Failed;
    }
    log({{"ev", "summary"}, {"workflows", result_.workflows.size()}, {"on_time", on_time}, {"late", late},
         {"failed", failed}, {"original_tasks", result_.original_tasks}, {"scheduled_tasks", result_.scheduled_tasks},
         {"allocations", result_.allocations}, {"replicas", result_.replicas}, {"heals", result_.heals},
         {"comparisons", result_.comparisons}, {"sp_joins", result_.sp_joins}, {"sp_leaves", result_.sp_leaves}});
  }

  SimConfig cfg_;
  AvailabilityModel model_;
  double horizon_ = 0.0;
  double now_ = 0.0;
  std::uint64_t seq_ = 0;
  std::priority_queue<Event, std::vector<Event>, Later> events_;
  std::vector<Request> requests_;
  std::vector<Job> jobs_;
  std::map<TaskId, TaskKey> survivor_;
  std::vector<AllocRec> allocs_;
  std::vector<SpProfile> attributes_;
  std::vector<SpProfile> live_;  // sorted by id
  std::set<TaskKey> ready_;
  std::vector<std::size_t> batch_;
  std::set<double> ready_windows_;
  bool dispatch_due_ = false;
  SimResult result_;
};

}  // namespace

SimResult run(const SimConfig& config, const std::vector<Workflow>& requests) {
  return Engine(config, requests).run();
}

SimResult run(const SimConfig& config, const WorkflowTrace& trace) {
  trace.check();
  return run(config, trace.requests());
}

}  // namespace maestro
