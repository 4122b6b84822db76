// Command-line front end. Exit codes: 0 ok, 2 usage, 3 validation, 4 runtime.

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "maestro/config.hpp"
#include "maestro/dedup.hpp"
#include "maestro/errors.hpp"
#include "maestro/experiments.hpp"
#include "maestro/metrics.hpp"
#include "maestro/sim.hpp"
#include "maestro/trace.hpp"
#include "maestro/workflow_io.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;
using namespace maestro;

namespace {

constexpr int kOk = 0;
constexpr int kUsage = 2;
constexpr int kInvalid = 3;
constexpr int kRuntime = 4;

/// Input documents that fail their schema or invariants.
struct InvalidInput : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string config_path;
  std::string trace_path;
  std::optional<std::uint64_t> seed;
  std::string out;
  unsigned jobs = 0;
  std::optional<std::string> policy;
  std::optional<double> delta_wait;
  std::optional<double> delta_ready;
  std::vector<std::string> inputs;
  std::size_t count = 0;
  std::string experiment;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Config effective_config(const Options& o) {
  Config c = o.config_path.empty() ? default_config() : load_config(o.config_path);
  if (o.seed) c.seed = *o.seed;
  c.sim.seed = c.seed;
  if (o.policy) c.sim.policy = *parse_policy(*o.policy);
  if (o.delta_wait) c.sim.delta_wait = *o.delta_wait;
  if (o.delta_ready) c.sim.delta_ready = *o.delta_ready;
  c.sim.check();
  return c;
}

/// A run directory that is written once and described by manifest.json.
class RunDir {
 public:
  RunDir(const Options& o, const std::string& command, const Config& config)
      : command_(command), seed_(config.seed), config_hash_(content_hash(dump_config(config))) {
    if (!o.out.empty()) {
      dir_ = o.out;
      if (fs::exists(dir_) && !fs::is_empty(dir_)) {
        throw std::runtime_error("refusing to overwrite non-empty output directory " + dir_.string());
      }
    } else {
      const char* root = std::getenv("MAESTRO_OUT");
      const fs::path base = fs::path(root && *root ? root : "maestro-out") /
                            (command + "-" + config_hash_.substr(0, 8) + "-s" + std::to_string(seed_));
      dir_ = base;
      for (int k = 2; fs::exists(dir_); ++k) dir_ = base.string() + "-" + std::to_string(k);
    }
    fs::create_directories(dir_);
    manifest_["command"] = command_;
    manifest_["seed"] = seed_;
    manifest_["config_hash"] = config_hash_;
    manifest_["config"] = o.config_path.empty() ? "defaults" : o.config_path;
    manifest_["inputs"] = ordered_json::object();
    manifest_["outputs"] = ordered_json::object();
  }

  const fs::path& path() const { return dir_; }

  void input(const std::string& name, const std::string& digest) { manifest_["inputs"][name] = digest; }

  void write(const std::string& rel, const std::string& content) {
    const fs::path p = dir_ / rel;
    fs::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary);
    out << content;
    if (!out) throw std::runtime_error("cannot write " + p.string());
    manifest_["outputs"][rel] = content_hash(content);
  }

  /// Records files some other writer created under the run directory.
  void adopt(const fs::path& sub) {
    std::vector<fs::path> files;
    for (const auto& e : fs::recursive_directory_iterator(dir_ / sub)) {
      if (e.is_regular_file()) files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
    for (const fs::path& f : files) manifest_["outputs"][fs::relative(f, dir_).generic_string()] = content_hash(slurp(f));
  }

  void finish() {
    std::ofstream out(dir_ / "manifest.json");
    out << manifest_.dump(2) << '\n';
    std::cout << "wrote " << dir_.string() << '\n';
  }

 private:
  std::string command_;
  std::uint64_t seed_;
  std::string config_hash_;
  fs::path dir_;
  ordered_json manifest_;
};

Workflow load_valid_workflow(const fs::path& p) {
  Workflow w;
  try {
    w = read_workflow(p);
  } catch (const FormatError& e) {
    throw InvalidInput(p.string() + ": " + e.what());
  }
  const ValidationReport report = validate(w);
  if (!report.ok()) {
    std::string msg = p.string() + ": invalid workflow";
    for (const Violation& v : report.violations) msg += "\n  " + std::string(to_string(v.kind)) + ": " + v.detail;
    throw InvalidInput(msg);
  }
  return w;
}

std::vector<fs::path> expand_inputs(const std::vector<std::string>& inputs) {
  std::vector<fs::path> files;
  for (const std::string& in : inputs) {
    if (fs::is_directory(in)) {
      std::vector<fs::path> found;
      for (const auto& e : fs::directory_iterator(in)) {
        if (e.is_regular_file() && e.path().extension() == ".json") found.push_back(e.path());
      }
      std::sort(found.begin(), found.end());
      files.insert(files.end(), found.begin(), found.end());
    } else if (fs::exists(in)) {
      files.emplace_back(in);
    } else {
      throw UsageError("no such input: " + in);
    }
  }
  return files;
}

WorkflowTrace trace_for(const Options& o, const Config& c, RunDir* run) {
  if (o.trace_path.empty()) return generate_trace(c.trace, c.generator, c.seed);
  WorkflowTrace t;
  try {
    t = load_trace(o.trace_path);
  } catch (const FormatError& e) {
    throw InvalidInput(e.what());
  } catch (const SpecError& e) {
    throw InvalidInput(e.what());
  }
  if (run) run->input("trace.csv", content_hash(slurp(fs::path(o.trace_path) / "trace.csv")));
  return t;
}

int cmd_validate(const Options& o) {
  if (o.inputs.empty() && o.config_path.empty()) throw UsageError("validate: nothing to check");
  bool all_ok = true;
  if (!o.config_path.empty()) {
    try {
      load_config(o.config_path);
      std::cout << "ok " << o.config_path << '\n';
    } catch (const std::exception& e) {
      std::cerr << e.what() << '\n';
      all_ok = false;
    }
  }
  for (const std::string& in : o.inputs) {
    try {
      if (fs::is_directory(in) && fs::exists(fs::path(in) / "trace.csv")) {
        const WorkflowTrace t = load_trace(in);
        for (const Workflow& w : t.templates) {
          const ValidationReport r = validate(w);
          if (!r.ok()) throw InvalidInput(in + ": template " + w.id() + " is invalid");
        }
        std::cout << "ok " << in << " (" << t.entries.size() << " requests)\n";
      } else {
        for (const fs::path& f : expand_inputs({in})) {
          load_valid_workflow(f);
          std::cout << "ok " << f.string() << '\n';
        }
      }
    } catch (const UsageError&) {
      throw;
    } catch (const std::exception& e) {
      std::cerr << e.what() << '\n';
      all_ok = false;
    }
  }
  return all_ok ? kOk : kInvalid;
}

int cmd_gen_workflows(const Options& o) {
  const Config c = effective_config(o);
  RunDir run(o, "gen-workflows", c);
  const std::size_t n = o.count > 0 ? o.count : c.trace.pool_size;
  for (const Workflow& w : generate_pool(c.generator, n, c.seed)) {
    run.write("workflows/" + w.id() + ".json", to_json(w).dump(2) + "\n");
  }
  run.finish();
  return kOk;
}

int cmd_gen_trace(const Options& o) {
  const Config c = effective_config(o);
  RunDir run(o, "gen-trace", c);
  save_trace(generate_trace(c.trace, c.generator, c.seed), run.path() / "trace");
  run.adopt("trace");
  run.finish();
  return kOk;
}

int cmd_dedup(const Options& o) {
  const Config c = effective_config(o);
  const std::vector<fs::path> files = expand_inputs(o.inputs);
  if (files.empty()) throw UsageError("dedup: no workflow files given");
  RunDir run(o, "dedup", c);

  std::vector<Workflow> loaded;
  for (const fs::path& f : files) {
    loaded.push_back(load_valid_workflow(f));
    run.input(f.generic_string(), content_hash(slurp(f)));
  }
  // Inputs are independent documents: give them distinct names and, when
  // their task ids overlap, disjoint id ranges.
  std::set<std::uint64_t> seen_ids;
  bool overlap = false;
  std::uint64_t stride = 1;
  for (const Workflow& w : loaded) {
    stride = std::max(stride, w.max_task_id().value + 1);
    for (const Task& t : w.tasks()) overlap |= !seen_ids.insert(t.id.value).second;
  }
  DedupBatch batch;
  std::map<std::string, int> name_uses;
  for (std::size_t i = 0; i < loaded.size(); ++i) {
    const Workflow& w = loaded[i];
    std::string name = w.id();
    if (++name_uses[name] > 1) name += "#" + std::to_string(name_uses[name]);
    batch.workflows.push_back(
        (overlap ? w.with_id_offset(i * stride) : w).rescheduled(name, w.arrival_time(), w.deadline(), w.p_fail()));
  }
  const MergedWorkflowSet merged = dedup(batch);

  const double discard_pct =
      merged.original_tasks == 0 ? 0.0 : 100.0 * static_cast<double>(merged.discarded_tasks()) / merged.original_tasks;
  ordered_json prov;
  prov["workflows"] = batch.workflows.size();
  prov["original_tasks"] = merged.original_tasks;
  prov["surviving_tasks"] = merged.surviving_tasks();
  prov["discarded_tasks"] = merged.discarded_tasks();
  prov["discard_pct"] = discard_pct;
  prov["comparisons"] = merged.comparisons;
  prov["survivors"] = ordered_json::array();
  for (const auto& [survivor, refs] : merged.provenance) {
    ordered_json s{{"task", survivor.value}, {"fork", merged.fork_tasks.count(survivor) > 0}};
    s["serves"] = ordered_json::array();
    for (const TaskRef& r : refs) s["serves"].push_back({{"wf", r.wf_id}, {"task", r.task.value}});
    prov["survivors"].push_back(s);
  }
  run.write("provenance.json", prov.dump(2) + "\n");
  for (std::size_t i = 0; i < merged.workflows.size(); ++i) {
    run.write("merged/" + std::to_string(i) + ".json", to_json(merged.workflows[i]).dump(2) + "\n");
  }
  std::printf("%zu tasks -> %zu (%.1f%% discarded, %zu comparisons)\n", merged.original_tasks,
              merged.surviving_tasks(), discard_pct, merged.comparisons);
  run.finish();
  return kOk;
}

int cmd_simulate(const Options& o) {
  const Config c = effective_config(o);
  RunDir run(o, "simulate", c);
  const WorkflowTrace trace = trace_for(o, c, &run);
  const SimResult result = maestro::run(c.sim, trace);
  const RunMetrics m = metrics_from_result(result);

  run.write("events.jsonl", result.log_text());
  ordered_json mj{{"workflows", m.workflows},
                  {"on_time", m.on_time},
                  {"late", m.late},
                  {"failed", m.failed},
                  {"pct_success", m.pct_success},
                  {"pct_tasks_executed", m.pct_tasks_executed},
                  {"mean_makespan", m.mean_makespan},
                  {"replica_count", m.replica_count},
                  {"comparisons", m.comparisons},
                  {"original_tasks", m.original_tasks},
                  {"scheduled_tasks", m.scheduled_tasks}};
  run.write("metrics.json", mj.dump(2) + "\n");
  std::ostringstream csv;
  csv << "wf_id,arrival,deadline,outcome,finish,tasks\n";
  csv.precision(17);
  for (const WorkflowResult& w : result.workflows) {
    csv << w.wf_id << ',' << w.arrival << ',' << w.deadline << ',' << to_string(w.outcome) << ',' << w.finish << ','
        << w.tasks << '\n';
  }
  run.write("workflows.csv", csv.str());
  std::printf("%zu workflows: %.1f%% on time, %.1f%% of tasks executed, %zu replicas\n", m.workflows, m.pct_success,
              m.pct_tasks_executed, m.replica_count);
  run.finish();
  return kOk;
}

int cmd_experiment(const Options& o) {
  static const std::vector<std::string> names{"dedup-reduction", "dedup-success", "scenarios", "protection-price"};
  const bool all = o.experiment == "all";
  if (!all && std::find(names.begin(), names.end(), o.experiment) == names.end()) {
    throw UsageError("unknown experiment " + o.experiment);
  }
  const Config c = effective_config(o);
  RunDir run(o, "experiment-" + o.experiment, c);
  auto emit = [&](const ExperimentTable& t) {
    std::ostringstream csv;
    write_csv(t, csv);
    run.write(t.name + ".csv", csv.str());
  };
  auto wants = [&](const std::string& n) { return all || o.experiment == n; };
  if (wants("dedup-reduction")) {
    DedupReductionSetup s;
    s.seeds = c.replications;
    emit(dedup_reduction(s, true, c.seed, o.jobs));
    emit(dedup_reduction(s, false, c.seed, o.jobs));
  }
  if (wants("dedup-success")) {
    DedupSuccessSetup s;
    s.seeds = c.replications;
    emit(dedup_success(s, c.seed, o.jobs));
  }
  if (wants("scenarios")) {
    ScenarioSetup s;
    s.seeds = c.replications;
    emit(scenarios(s, c.seed, o.jobs));
  }
  if (wants("protection-price")) {
    ProtectionPriceSetup s;
    s.seeds = c.replications;
    emit(protection_price(s, c.seed, o.jobs));
  }
  run.finish();
  return kOk;
}

void common_flags(CLI::App* sub, Options& o) {
  sub->add_option("--config", o.config_path, "JSON configuration file")->check(CLI::ExistingFile);
  sub->add_option("--seed", o.seed, "master seed (overrides the config)");
  sub->add_option("--out", o.out, "output directory (default: $MAESTRO_OUT/<run>)");
}

void sim_flags(CLI::App* sub, Options& o) {
  sub->add_option("--trace", o.trace_path, "trace directory with trace.csv")->check(CLI::ExistingDirectory);
  sub->add_option("--policy", o.policy, "scheduling policy")
      ->check(CLI::IsMember({"baseline", "healing", "protection", "fcfs"}));
  sub->add_option("--delta-wait", o.delta_wait, "dedup waiting window [s]")->check(CLI::NonNegativeNumber);
  sub->add_option("--delta-ready", o.delta_ready, "ready-task window [s]")->check(CLI::NonNegativeNumber);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Workflow orchestration on mobile device clouds: generation, dedup, simulation and experiments"};
  app.require_subcommand(1, 1);
  Options o;

  auto* validate_cmd = app.add_subcommand("validate", "check workflow files, trace directories or a config");
  validate_cmd->add_option("paths", o.inputs, "workflow JSON files, directories or trace directories");
  validate_cmd->add_option("--config", o.config_path, "JSON configuration file to check");

  auto* genw = app.add_subcommand("gen-workflows", "generate a pool of workflow templates");
  common_flags(genw, o);
  genw->add_option("--count", o.count, "number of workflows (default: trace.pool_size)");

  auto* gent = app.add_subcommand("gen-trace", "generate a workflow request trace");
  common_flags(gent, o);

  auto* dd = app.add_subcommand("dedup", "deduplicate a batch of workflows and report provenance");
  common_flags(dd, o);
  dd->add_option("--in", o.inputs, "workflow files or directories")->required();

  auto* sim = app.add_subcommand("simulate", "run one simulation");
  common_flags(sim, o);
  sim_flags(sim, o);

  auto* exp = app.add_subcommand("experiment", "run an experiment suite and write CSV");
  common_flags(exp, o);
  exp->add_option("name", o.experiment, "dedup-reduction, dedup-success, scenarios, protection-price or all")
      ->required();
  exp->add_option("--jobs", o.jobs, "worker threads (0: one per core)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (validate_cmd->parsed()) return cmd_validate(o);
    if (genw->parsed()) return cmd_gen_workflows(o);
    if (gent->parsed()) return cmd_gen_trace(o);
    if (dd->parsed()) return cmd_dedup(o);
    if (sim->parsed()) return cmd_simulate(o);
    if (exp->parsed()) return cmd_experiment(o);
  } catch (const UsageError& e) {
    std::cerr << "usage: " << e.what() << '\n';
    return kUsage;
  } catch (const InvalidInput& e) {
    std::cerr << "invalid: " << e.what() << '\n';
    return kInvalid;
  } catch (const FormatError& e) {
    std::cerr << "invalid: " << e.what() << '\n';
    return kInvalid;
  } catch (const ConfigError& e) {
    std::cerr << "invalid: " << e.what() << '\n';
    return kInvalid;
  } catch (const SpecError& e) {
    std::cerr << "invalid: " << e.what() << '\n';
    return kInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntime;
  }
  return kUsage;
}
