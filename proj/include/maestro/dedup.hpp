#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "maestro/workflow.hpp"

namespace maestro {

/// A task of one workflow in a batch.
struct TaskRef {
  std::string wf_id;
  TaskId task;

  friend auto operator<=>(const TaskRef&, const TaskRef&) = default;
};

/// Workflows collected during one broker waiting window.
struct DedupBatch {
  std::vector<Workflow> workflows;
  double window = 0.0;  // seconds
};

/// Result of consolidating a batch.
///
/// Every original non-dummy task either survives or is mapped to exactly one
/// surviving task. Survivors keep the id of their first member. Each entry of
/// `workflows` is one connected consolidated DAG, with pass-through tasks
/// re-inserted so edges join consecutive stages.
struct MergedWorkflowSet {
  std::vector<Workflow> workflows;
  std::set<TaskId> fork_tasks;
  /// Surviving task -> the original tasks it satisfies, itself first.
  std::map<TaskId, std::vector<TaskRef>> provenance;
  /// Original task -> its surviving task (survivors map to themselves).
  std::map<TaskRef, TaskId> survivor_of;
  std::size_t original_tasks = 0;
  std::size_t comparisons = 0;

  std::size_t surviving_tasks() const { return provenance.size(); }
  std::size_t discarded_tasks() const { return original_tasks - surviving_tasks(); }
  /// Distinct wf_ids served by a surviving task.
  std::set<std::string> served_workflows(TaskId survivor) const;
};

/// Bookkeeping filled by check_similarity.
struct SimilarityTrace {
  std::set<TaskId> visited_k;
  std::set<TaskId> visited_l;
  std::size_t comparisons = 0;
};

/// Context-free similarity of task `k` of `wk` and task `l` of `wl`: equal kind
/// names, equal output sizes, equal input sizes, and a perfect matching
/// between their (dummy-transparent) parent sets under the same relation.
/// Matched tasks and their matched ancestors are recorded in `trace`.
bool check_similarity(const Workflow& wk, TaskId k, const Workflow& wl, TaskId l, SimilarityTrace* trace = nullptr);

/// Merges duplicate stage-0-rooted sub-graphs across the batch.
///
/// Workflows are folded in order into a running merged set. For each arrival
/// its tasks are visited in topological order; a task is compared against the
/// not-yet-matched survivors that could share its parents (stage-0 survivors
/// for roots, children of the parents' survivors otherwise) and merges into
/// the first similar one. A task that matches nothing is kept and re-parented
/// onto the survivors of its parents.
///
/// Several tasks of one workflow with the same kind, size and parents pair up
/// with their counterparts by (stage, id) rank, which makes the result
/// independent of the order of `batch.workflows`.
///
/// Preconditions: task ids unique across the batch, every workflow acyclic.
MergedWorkflowSet dedup(const DedupBatch& batch);

/// Number of similarity checks dedup(batch) performs.
std::size_t pair_comparison_count(const DedupBatch& batch);

}  // namespace maestro
