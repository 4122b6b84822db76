#include "maestro/trace.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <sstream>

#include "maestro/errors.hpp"
#include "maestro/rng.hpp"
#include "maestro/workflow_io.hpp"

namespace maestro {

const Workflow& WorkflowTrace::template_for(const TraceEntry& e) const {
  for (const Workflow& w : templates) {
    if (w.id() == e.template_id) return w;
  }
  throw SpecError("trace: unknown template " + e.template_id);
}

std::vector<Workflow> WorkflowTrace::requests() const {
  std::uint64_t stride = 1;
  for (const Workflow& w : templates) stride = std::max(stride, w.max_task_id().value + 1);
  std::map<std::string, const Workflow*> by_id;
  for (const Workflow& w : templates) by_id[w.id()] = &w;
  std::vector<Workflow> out;
  out.reserve(entries.size());
  const int width = static_cast<int>(std::to_string(entries.size()).size());
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const TraceEntry& e = entries[i];
    auto it = by_id.find(e.template_id);
    if (it == by_id.end()) throw SpecError("trace: unknown template " + e.template_id);
    std::ostringstream name;
    name << 'r' << std::setw(width) << std::setfill('0') << i;
    out.push_back(it->second->with_id_offset(i * stride).rescheduled(name.str(), e.arrival_time,
                                                                     e.arrival_time + e.deadline, e.p_fail));
  }
  return out;
}

void WorkflowTrace::check() const {
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (i > 0 && entries[i].arrival_time < entries[i - 1].arrival_time) throw SpecError("trace: arrivals not sorted");
    template_for(entries[i]);
  }
}

namespace {

void check_spec(std::size_t n, double mu, std::size_t pool, const RealRange& deadline, double p_fail) {
  if (n < 1) throw SpecError("trace: n_requests must be at least 1");
  if (!(mu > 0.0)) throw SpecError("trace: mean inter-arrival must be positive");
  if (pool < 1) throw SpecError("trace: pool must hold at least one template");
  if (deadline.empty() || !(deadline.lo > 0.0)) throw SpecError("trace: deadline range must be non-empty and positive");
  if (!(p_fail >= 0.0 && p_fail < 1.0)) throw SpecError("trace: p_fail must lie in [0,1)");
}

}  // namespace

WorkflowTrace generate_trace(const TraceSpec& spec, std::vector<Workflow> templates, std::uint64_t seed) {
  check_spec(spec.n_requests, spec.mean_interarrival, templates.size(), spec.deadline, spec.p_fail);
  WorkflowTrace trace;
  trace.mean_interarrival = spec.mean_interarrival;
  trace.templates = std::move(templates);
  Rng rng(seed, Stream::Trace);
  double t = 0.0;
  for (std::size_t i = 0; i < spec.n_requests; ++i) {
    t += rng.exponential(spec.mean_interarrival);
    const auto& tpl = trace.templates[static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(trace.templates.size()) - 1))];
    trace.entries.push_back({t, tpl.id(), rng.uniform(spec.deadline.lo, spec.deadline.hi), spec.p_fail});
  }
  return trace;
}

WorkflowTrace generate_trace(const TraceSpec& spec, const GeneratorSpec& generator, std::uint64_t seed) {
  check_spec(spec.n_requests, spec.mean_interarrival, spec.pool_size, spec.deadline, spec.p_fail);
  return generate_trace(spec, generate_pool(generator, spec.pool_size, seed), seed);
}

WorkflowTrace mixed_size_trace(const MixedTraceSpec& spec, const GeneratorSpec& small, const GeneratorSpec& large,
                               std::uint64_t seed) {
  check_spec(spec.n_requests, spec.mean_interarrival, spec.pool_size, spec.small_deadline, spec.p_fail);
  if (!(spec.small_fraction >= 0.0 && spec.small_fraction <= 1.0)) throw SpecError("trace: small_fraction outside [0,1]");
  const bool has_large = spec.small_fraction < 1.0;
  if (has_large && (spec.large_deadline.empty() || !(spec.large_deadline.lo > 0.0))) {
    throw SpecError("trace: large deadline range must be non-empty and positive");
  }
  std::size_t n_small = spec.pool_size;
  if (has_large) {
    if (spec.small_fraction > 0.0 && spec.pool_size < 2) throw SpecError("trace: pool too small for the mix");
    const auto rounded = static_cast<std::size_t>(std::llround(static_cast<double>(spec.pool_size) * spec.small_fraction));
    n_small = spec.small_fraction > 0.0 ? std::clamp<std::size_t>(rounded, 1, spec.pool_size - 1) : 0;
  }
  const std::size_t n_large = spec.pool_size - n_small;

  WorkflowTrace trace;
  trace.mean_interarrival = spec.mean_interarrival;
  trace.templates = generate_pool(small, n_small, seed, "S");
  for (Workflow& w : generate_pool(large, n_large, derive_seed(seed, Stream::Pool, 1u << 20), "L")) {
    trace.templates.push_back(std::move(w));
  }

  Rng rng(seed, Stream::Trace);
  double t = 0.0;
  for (std::size_t i = 0; i < spec.n_requests; ++i) {
    t += rng.exponential(spec.mean_interarrival);
    const bool is_small = rng.uniform() < spec.small_fraction;
    const std::size_t lo = is_small ? 0 : n_small;
    const std::size_t count = is_small ? n_small : n_large;
    const auto& tpl = trace.templates[lo + static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(count) - 1))];
    const RealRange& d = is_small ? spec.small_deadline : spec.large_deadline;
    trace.entries.push_back({t, tpl.id(), rng.uniform(d.lo, d.hi), spec.p_fail});
  }
  return trace;
}

void save_trace(const WorkflowTrace& trace, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir / "templates");
  std::ofstream out(dir / "trace.csv");
  if (!out) throw std::runtime_error("cannot write " + (dir / "trace.csv").string());
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  out << "# mean_interarrival=" << trace.mean_interarrival << '\n';
  out << "arrival_time,template_id,deadline,p_fail\n";
  for (const TraceEntry& e : trace.entries) {
    out << e.arrival_time << ',' << e.template_id << ',' << e.deadline << ',' << e.p_fail << '\n';
  }
  for (const Workflow& w : trace.templates) write_workflow(w, dir / "templates" / (w.id() + ".json"));
}

namespace {

double parse_double(const std::string& s, const std::string& where) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw FormatError(where + ": not a number: '" + s + "'");
  }
  if (used != s.size()) throw FormatError(where + ": not a number: '" + s + "'");
  return v;
}

}  // namespace

WorkflowTrace load_trace(const std::filesystem::path& dir) {
  std::ifstream in(dir / "trace.csv");
  if (!in) throw FormatError("cannot read " + (dir / "trace.csv").string());
  WorkflowTrace trace;
  std::string line;
  std::size_t line_no = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::string where = "trace.csv:" + std::to_string(line_no);
    if (line.empty()) continue;
    if (line.rfind("# mean_interarrival=", 0) == 0) {
      trace.mean_interarrival = parse_double(line.substr(20), where);
      continue;
    }
    if (line[0] == '#') continue;
    if (!header) {
      if (line != "arrival_time,template_id,deadline,p_fail") throw FormatError(where + ": unexpected header");
      header = true;
      continue;
    }
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
    if (cells.size() != 4) throw FormatError(where + ": expected 4 columns");
    trace.entries.push_back({parse_double(cells[0], where), cells[1], parse_double(cells[2], where),
                             parse_double(cells[3], where)});
  }
  if (!header) throw FormatError("trace.csv: missing header");

  std::vector<std::filesystem::path> files;
  if (std::filesystem::exists(dir / "templates")) {
    for (const auto& e : std::filesystem::directory_iterator(dir / "templates")) {
      if (e.path().extension() == ".json") files.push_back(e.path());
    }
  }
  std::sort(files.begin(), files.end());
  for (const auto& f : files) trace.templates.push_back(read_workflow(f));
  trace.check();
  return trace;
}

}  // namespace maestro
