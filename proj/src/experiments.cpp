#include "maestro/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <exception>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <thread>
#include <utility>

#include "maestro/rng.hpp"

namespace maestro {

namespace {

// Replication s of an experiment uses one trace seed and one simulation seed,
// shared by every policy and sweep value (common random numbers).
std::uint64_t trace_seed(std::uint64_t master, std::size_t s) { return derive_seed(master, Stream::Trace, s); }
std::uint64_t sim_seed(std::uint64_t master, std::size_t s) { return derive_seed(master, Stream::Churn, s); }

struct Job {
  std::string x;
  std::string series;
  std::function<double()> measure;
};

ExperimentTable collect(std::string name, std::string x_label, std::vector<Job>& jobs, unsigned threads) {
  std::vector<double> values(jobs.size());
  parallel_for(jobs.size(), threads, [&](std::size_t i) { values[i] = jobs[i].measure(); });

  ExperimentTable table{std::move(name), std::move(x_label), {}};
  std::vector<std::pair<std::string, std::string>> order;
  std::map<std::pair<std::string, std::string>, std::vector<double>> groups;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    auto key = std::make_pair(jobs[i].x, jobs[i].series);
    auto [it, fresh] = groups.try_emplace(key);
    if (fresh) order.push_back(key);
    it->second.push_back(values[i]);
  }
  for (const auto& key : order) table.points.push_back({key.first, key.second, summarize(groups[key])});
  return table;
}

SimConfig quiet(SimConfig cfg, std::uint64_t seed) {
  cfg.seed = seed;
  cfg.keep_log = false;
  return cfg;
}

GeneratorSpec staged_generator(const std::string& prefix, std::vector<int> pool_sizes, RealRange work,
                               std::uint64_t seed) {
  GeneratorSpec g;
  g.stages = {3, 4};
  g.tasks_per_stage = {1, 3};
  g.parents_per_task = {1, 2};
  for (std::size_t s = 0; s < pool_sizes.size(); ++s) {
    g.kind_pools.push_back(make_kind_pool(prefix + std::to_string(s) + "-", pool_sizes[s], work, {0.5, 2.0},
                                          derive_seed(seed, Stream::Pool, s)));
  }
  g.non_critical_fraction = 0.2;
  return g;
}

}  // namespace

const ExperimentPoint& ExperimentTable::at(const std::string& x, const std::string& series) const {
  for (const ExperimentPoint& p : points) {
    if (p.x == x && p.series == series) return p;
  }
  throw std::out_of_range("experiment " + name + ": no point (" + x + ", " + series + ")");
}

double ExperimentTable::mean(const std::string& x, const std::string& series) const { return at(x, series).stats.mean; }

void write_csv(const ExperimentTable& table, std::ostream& out) {
  out << table.x_label << ",series,mean,stddev,n\n";
  char buf[64];
  for (const ExperimentPoint& p : table.points) {
    std::snprintf(buf, sizeof buf, "%.6f,%.6f,%zu", p.stats.mean, p.stats.stddev, p.stats.n);
    out << p.x << ',' << p.series << ',' << buf << '\n';
  }
}

std::string format_x(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", x);
  return buf;
}

void parallel_for(std::size_t n, unsigned jobs, const std::function<void(std::size_t)>& body) {
  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  jobs = static_cast<unsigned>(std::min<std::size_t>(jobs, std::max<std::size_t>(n, 1)));
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < n;) {
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next = n;
      }
    }
  };
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (error) std::rethrow_exception(error);
}

DedupReductionSetup::DedupReductionSetup() {
  generator = staged_generator("r", {3, 6, 10, 10}, {2.0, 6.0}, 101);
  sim.churn = ChurnConfig::static_pool(10);
}

ExperimentTable dedup_reduction(const DedupReductionSetup& setup, bool adapted, std::uint64_t seed, unsigned jobs) {
  std::vector<Job> work;
  for (double mu : setup.mus) {
    for (std::size_t s = 0; s < setup.seeds; ++s) {
      TraceSpec spec{setup.n_requests, mu, setup.pool_size, setup.deadline, setup.p_fail};
      auto trace = std::make_shared<const WorkflowTrace>(generate_trace(spec, setup.generator, trace_seed(seed, s)));
      const std::vector<double>& xs = adapted ? setup.ratios : setup.windows;
      for (double x : xs) {
        SimConfig cfg = quiet(setup.sim, sim_seed(seed, s));
        cfg.delta_wait = adapted ? x * mu : x;
        work.push_back({format_x(x), "mu=" + format_x(mu),
                        [cfg, trace] { return metrics_from_result(run(cfg, *trace)).pct_tasks_executed; }});
      }
    }
  }
  return collect(adapted ? "dedup-reduction-adapted" : "dedup-reduction-agnostic",
                 adapted ? "wait_over_mu" : "wait_s", work, jobs);
}

DedupSuccessSetup::DedupSuccessSetup() {
  trace = TraceSpec{500, 10.0, 10, {40.0, 80.0}, 0.1};
  // Wide four-stage workflows on slow SPs: the pool runs near saturation
  // without dedup while critical paths stay well inside the deadlines.
  generator = staged_generator("s", {3, 6, 10, 10}, {2.0, 4.0}, 202);
  generator.stages = {4, 4};
  generator.tasks_per_stage = {2, 5};
  sim.churn = ChurnConfig::static_pool(10);
  sim.sp_speed = {0.47, 0.47};
}

ExperimentTable dedup_success(const DedupSuccessSetup& setup, std::uint64_t seed, unsigned jobs) {
  std::vector<Job> work;
  for (std::size_t s = 0; s < setup.seeds; ++s) {
    auto trace = std::make_shared<const WorkflowTrace>(generate_trace(setup.trace, setup.generator, trace_seed(seed, s)));
    auto success = [trace](SimConfig cfg) { return metrics_from_result(run(cfg, *trace)).pct_success; };
    SimConfig plain = quiet(setup.sim, sim_seed(seed, s));
    plain.delta_wait = 0.0;
    work.push_back({"", "no-dedup", [=] { return success(plain); }});
    for (double ratio : setup.ratios) {
      SimConfig cfg = plain;
      cfg.delta_wait = ratio * setup.trace.mean_interarrival;
      work.push_back({format_x(ratio), "dedup", [=] { return success(cfg); }});
      SimConfig fcfs = cfg;
      fcfs.policy = Policy::Fcfs;
      work.push_back({format_x(ratio), "fcfs", [=] { return success(fcfs); }});
    }
  }
  ExperimentTable table = collect("dedup-success", "wait_over_mu", work, jobs);
  // The zero-window run does not depend on the ratio; it is measured once per
  // replication and reported as a flat series.
  const Summary flat = table.points.front().stats;
  table.points.erase(table.points.begin());
  for (double ratio : setup.ratios) table.points.push_back({format_x(ratio), "no-dedup", flat});
  return table;
}

ScenarioSetup::ScenarioSetup() {
  scenarios = {{"A", 10000.0}, {"B", 2000.0}, {"C", 600.0}, {"D", 200.0}, {"E", 60.0}};
  trace = MixedTraceSpec{};
  small = staged_generator("small", {4, 8, 12, 12}, {2.0, 6.0}, 303);
  small.stages = {2, 3};
  large = staged_generator("large", {4, 8, 12, 12}, {20.0, 40.0}, 404);
  sim.trust = {0.2, 0.3, 0.5};
}

ExperimentTable scenarios(const ScenarioSetup& setup, std::uint64_t seed, unsigned jobs) {
  std::vector<Job> work;
  for (std::size_t s = 0; s < setup.seeds; ++s) {
    auto trace =
        std::make_shared<const WorkflowTrace>(mixed_size_trace(setup.trace, setup.small, setup.large, trace_seed(seed, s)));
    for (const Scenario& sc : setup.scenarios) {
      for (Policy policy : setup.policies) {
        SimConfig cfg = quiet(setup.sim, sim_seed(seed, s));
        cfg.churn = ChurnConfig::from_population(setup.population, sc.mean_availability);
        cfg.policy = policy;
        work.push_back({sc.name, std::string(to_string(policy)),
                        [cfg, trace] { return metrics_from_result(run(cfg, *trace)).pct_success; }});
      }
    }
  }
  return collect("scenarios", "scenario", work, jobs);
}

ProtectionPriceSetup::ProtectionPriceSetup() {
  schemes = {{"S1", {0.05, 0.45, 0.50}},
             {"S2", {0.02, 0.38, 0.60}},
             {"S3", {0.01, 0.29, 0.70}},
             {"S4", {0.0, 0.20, 0.80}},
             {"S5", {0.0, 0.0, 1.0}}};
  trace = TraceSpec{500, 10.0, 10, {40.0, 80.0}, 0.1};
  generator = staged_generator("p", {3, 6, 10, 10}, {2.0, 6.0}, 505);
  generator.stages = {4, 4};
  generator.tasks_per_stage = {2, 5};
  // 100 SPs so that the 1% personal share is exactly one device.
  sim.churn = ChurnConfig::static_pool(100);
  sim.sp_speed = {0.22, 0.45};
  sim.trust = {0.01, 0.33, 0.66};
}

ExperimentTable protection_price(const ProtectionPriceSetup& setup, std::uint64_t seed, unsigned jobs) {
  std::vector<Job> work;
  for (std::size_t s = 0; s < setup.seeds; ++s) {
    for (const Scheme& scheme : setup.schemes) {
      // Same structure seed for every scheme; the uniform draws behind the
      // protection labels are shared too, so schemes differ only in labels.
      GeneratorSpec g = setup.generator;
      g.protection = scheme.mix;
      auto trace = std::make_shared<const WorkflowTrace>(generate_trace(setup.trace, g, trace_seed(seed, s)));
      SimConfig cfg = quiet(setup.sim, sim_seed(seed, s));
      work.push_back({scheme.name, "success", [cfg, trace] { return metrics_from_result(run(cfg, *trace)).pct_success; }});
    }
  }
  return collect("protection-price", "scheme", work, jobs);
}

}  // namespace maestro
