#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "maestro/workflow.hpp"

namespace maestro {

struct IntRange {
  int lo = 0;
  int hi = 0;

  bool empty() const { return lo > hi; }
};

struct RealRange {
  double lo = 0.0;
  double hi = 0.0;

  bool empty() const { return !(lo <= hi); }
};

/// A task type the generator may draw. Equal names always carry equal work
/// and output size, which is what lets distinct workflows share sub-graphs.
struct KindSpec {
  std::string name;
  double mean_work = 1.0;
  double output_size = 1.0;
};

/// Fractions of private / protected / public tasks.
struct ProtectionMix {
  double private_frac = 0.0;
  double protected_frac = 0.0;
  double public_frac = 1.0;

  /// Threshold mapping of a uniform draw; nested mixes stay coupled.
  Protection classify(double u) const;
};

struct GeneratorSpec {
  IntRange stages{2, 4};
  IntRange tasks_per_stage{1, 3};
  IntRange parents_per_task{1, 2};
  /// Pool i supplies stage i; stages past the last pool reuse it.
  std::vector<std::vector<KindSpec>> kind_pools;
  ProtectionMix protection;
  double non_critical_fraction = 0.0;
  double deadline = 0.0;
  double p_fail = 0.1;
};

/// Deterministic for a fixed (spec, seed). Stage-0 tasks have no parents;
/// every other task draws its parents from the previous stage. Throws
/// SpecError on empty ranges, empty pools or a mix that does not sum to 1.
Workflow generate_workflow(const GeneratorSpec& spec, std::uint64_t seed, const std::string& wf_id = "wf");

/// `count` workflows named <prefix><i>, each from its own derived seed.
std::vector<Workflow> generate_pool(const GeneratorSpec& spec, std::size_t count, std::uint64_t seed,
                                    const std::string& prefix = "T");

/// `count` kinds named <prefix><i> with work and output size drawn from the ranges.
std::vector<KindSpec> make_kind_pool(const std::string& prefix, int count, RealRange work, RealRange output_size,
                                     std::uint64_t seed);

void check_spec(const GeneratorSpec& spec);

}  // namespace maestro
