#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "maestro/generator.hpp"
#include "maestro/workflow.hpp"

namespace maestro {

struct TraceEntry {
  double arrival_time = 0.0;
  std::string template_id;
  double deadline = 0.0;  // relative to arrival
  double p_fail = 0.1;
};

/// Timed requests for workflow templates.
struct WorkflowTrace {
  std::vector<TraceEntry> entries;  // non-decreasing arrival
  double mean_interarrival = 0.0;
  std::vector<Workflow> templates;

  const Workflow& template_for(const TraceEntry& e) const;
  /// One workflow per entry with absolute arrival and deadline. Task ids are
  /// shifted so that they are unique across the whole trace.
  std::vector<Workflow> requests() const;
  /// Throws SpecError on unsorted arrivals or unknown templates.
  void check() const;
};

struct TraceSpec {
  std::size_t n_requests = 100;
  double mean_interarrival = 10.0;  // s
  std::size_t pool_size = 10;
  RealRange deadline{40.0, 80.0};
  double p_fail = 0.1;
};

/// Exponential inter-arrivals, uniform deadlines and uniformly drawn templates.
WorkflowTrace generate_trace(const TraceSpec& spec, std::vector<Workflow> templates, std::uint64_t seed);
/// As above with a fresh pool of `spec.pool_size` templates from `generator`.
WorkflowTrace generate_trace(const TraceSpec& spec, const GeneratorSpec& generator, std::uint64_t seed);

struct MixedTraceSpec {
  std::size_t n_requests = 500;
  double mean_interarrival = 20.0;
  std::size_t pool_size = 10;
  double small_fraction = 0.66;
  RealRange small_deadline{40.0, 80.0};
  RealRange large_deadline{80.0, 160.0};
  double p_fail = 0.1;
};

/// Small and large workflows in the given proportion. The pool is split in
/// the same proportion between the two generators.
WorkflowTrace mixed_size_trace(const MixedTraceSpec& spec, const GeneratorSpec& small, const GeneratorSpec& large,
                               std::uint64_t seed);

/// Writes `trace.csv` and `templates/<id>.json` under `dir`.
void save_trace(const WorkflowTrace& trace, const std::filesystem::path& dir);
WorkflowTrace load_trace(const std::filesystem::path& dir);

}  // namespace maestro
