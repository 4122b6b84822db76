#include "maestro/generator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "maestro/errors.hpp"
#include "maestro/rng.hpp"

namespace maestro {

Protection ProtectionMix::classify(double u) const {
  if (u < private_frac) return Protection::Private;
  if (u < private_frac + protected_frac) return Protection::Protected;
  return Protection::Public;
}

void check_spec(const GeneratorSpec& spec) {
  if (spec.stages.empty() || spec.stages.lo < 1) throw SpecError("stages range is empty");
  if (spec.tasks_per_stage.empty() || spec.tasks_per_stage.lo < 1) throw SpecError("tasks_per_stage range is empty");
  if (spec.parents_per_task.empty() || spec.parents_per_task.lo < 1) throw SpecError("parents_per_task range is empty");
  if (spec.kind_pools.empty()) throw SpecError("no kind pool");
  for (const auto& pool : spec.kind_pools) {
    if (pool.empty()) throw SpecError("empty kind pool");
    for (const KindSpec& k : pool) {
      if (!(k.mean_work > 0.0)) throw SpecError("kind " + k.name + " has non-positive work");
      if (k.name == kDummyKind) throw SpecError("kind name 'dummy' is reserved");
    }
  }
  const ProtectionMix& m = spec.protection;
  if (m.private_frac < 0 || m.protected_frac < 0 || m.public_frac < 0 ||
      std::abs(m.private_frac + m.protected_frac + m.public_frac - 1.0) > 1e-9) {
    throw SpecError("protection mix must be non-negative and sum to 1");
  }
  if (!(spec.non_critical_fraction >= 0.0 && spec.non_critical_fraction <= 1.0)) {
    throw SpecError("non_critical_fraction outside [0, 1]");
  }
  if (!(spec.p_fail >= 0.0 && spec.p_fail < 1.0)) throw SpecError("p_fail outside [0, 1)");
}

Workflow generate_workflow(const GeneratorSpec& spec, std::uint64_t seed, const std::string& wf_id) {
  check_spec(spec);
  Rng structure(seed, Stream::Structure);
  Rng protection(seed, Stream::Protection);
  Rng criticality(seed, Stream::Criticality);

  const int n_stages = structure.uniform_int(spec.stages.lo, spec.stages.hi);
  std::vector<Task> tasks;
  std::vector<Edge> edges;
  std::vector<std::uint64_t> prev_stage;
  std::uint64_t next_id = 0;

  for (int s = 0; s < n_stages; ++s) {
    const auto& pool = spec.kind_pools[std::min<std::size_t>(static_cast<std::size_t>(s), spec.kind_pools.size() - 1)];
    const int width = structure.uniform_int(spec.tasks_per_stage.lo, spec.tasks_per_stage.hi);
    std::vector<std::uint64_t> this_stage;
    for (int j = 0; j < width; ++j) {
      const KindSpec& kind = structure.pick(std::span<const KindSpec>(pool));
      Task t;
      t.id = TaskId{next_id++};
      t.kind = TaskKind{kind.name, kind.mean_work};
      t.stage = s;
      t.output_size = kind.output_size;
      t.protection = spec.protection.classify(protection.uniform());
      t.criticality = criticality.bernoulli(spec.non_critical_fraction) ? Criticality::NonCritical : Criticality::Blocking;

      if (s > 0) {
        const int max_parents = std::min<int>(spec.parents_per_task.hi, static_cast<int>(prev_stage.size()));
        const int min_parents = std::min(spec.parents_per_task.lo, max_parents);
        const int n_parents = structure.uniform_int(min_parents, max_parents);
        std::vector<std::uint64_t> candidates = prev_stage;
        // Partial Fisher-Yates over the previous stage.
        for (int p = 0; p < n_parents; ++p) {
          const int pick = structure.uniform_int(p, static_cast<int>(candidates.size()) - 1);
          std::swap(candidates[static_cast<std::size_t>(p)], candidates[static_cast<std::size_t>(pick)]);
          edges.push_back({TaskId{candidates[static_cast<std::size_t>(p)]}, t.id});
        }
      }
      this_stage.push_back(t.id.value);
      tasks.push_back(std::move(t));
    }
    prev_stage = std::move(this_stage);
  }
  return Workflow(wf_id, std::move(tasks), std::move(edges), spec.deadline, spec.p_fail);
}

std::vector<Workflow> generate_pool(const GeneratorSpec& spec, std::size_t count, std::uint64_t seed,
                                    const std::string& prefix) {
  std::vector<Workflow> pool;
  pool.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    pool.push_back(generate_workflow(spec, derive_seed(seed, Stream::Pool, i), prefix + std::to_string(i)));
  }
  return pool;
}

std::vector<KindSpec> make_kind_pool(const std::string& prefix, int count, RealRange work, RealRange output_size,
                                     std::uint64_t seed) {
  if (count < 1 || work.empty() || output_size.empty() || !(work.lo > 0.0)) {
    throw SpecError("make_kind_pool: empty range");
  }
  Rng rng(seed, Stream::Pool, 0xC0FFEE);
  std::vector<KindSpec> pool;
  for (int i = 0; i < count; ++i) {
    KindSpec k;
    k.name = prefix + std::to_string(i);
    k.mean_work = rng.uniform(work.lo, work.hi);
    // Sizes are rounded so that equality tests are exact.
    k.output_size = std::round(rng.uniform(output_size.lo, output_size.hi) * 100.0) / 100.0;
    pool.push_back(std::move(k));
  }
  return pool;
}

}  // namespace maestro
