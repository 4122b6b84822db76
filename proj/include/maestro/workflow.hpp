#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace maestro {

struct TaskId {
  std::uint64_t value = 0;

  friend auto operator<=>(const TaskId&, const TaskId&) = default;
};

enum class Criticality { NonCritical, Blocking, Fork };
enum class Protection { Public, Protected, Private };

std::string_view to_string(Criticality c);
std::string_view to_string(Protection p);
std::optional<Criticality> parse_criticality(std::string_view s);
std::optional<Protection> parse_protection(std::string_view s);

/// Reserved kind name for pass-through tasks.
inline constexpr std::string_view kDummyKind = "dummy";

struct TaskKind {
  std::string name;
  double mean_work = 0.0;  // abstract work units

  friend bool operator==(const TaskKind&, const TaskKind&) = default;
};

struct Task {
  TaskId id;
  TaskKind kind;
  int stage = 0;
  double output_size = 0.0;
  std::vector<double> input_sizes;  // one per parent, filled by Workflow
  Criticality criticality = Criticality::Blocking;
  Protection protection = Protection::Public;
  bool is_dummy = false;

  double work() const { return is_dummy ? 0.0 : kind.mean_work; }
};

struct Edge {
  TaskId parent;
  TaskId child;

  friend bool operator==(const Edge&, const Edge&) = default;
};

/// A staged DAG of tasks with a deadline and an acceptable failure
/// probability. Immutable once built; adjacency is indexed by position in
/// tasks().
///
/// Construction rejects structural errors (duplicate task ids, edges to
/// unknown tasks). Semantic invariants such as acyclicity are reported by
/// validate().
class Workflow {
 public:
  Workflow() = default;
  Workflow(std::string wf_id, std::vector<Task> tasks, std::vector<Edge> edges, double deadline,
           double p_fail, double arrival_time = 0.0);

  const std::string& id() const { return wf_id_; }
  const std::vector<Task>& tasks() const { return tasks_; }
  const std::vector<Edge>& edges() const { return edges_; }
  double deadline() const { return deadline_; }
  double p_fail() const { return p_fail_; }
  double arrival_time() const { return arrival_time_; }

  std::size_t size() const { return tasks_.size(); }
  bool contains(TaskId id) const;
  std::size_t index_of(TaskId id) const;
  const Task& task(TaskId id) const { return tasks_[index_of(id)]; }

  std::span<const std::size_t> parents(std::size_t index) const { return parents_[index]; }
  std::span<const std::size_t> children(std::size_t index) const { return children_[index]; }

  /// Nearest non-dummy ancestors, looking through dummy chains. Sorted.
  std::vector<std::size_t> real_parents(std::size_t index) const;

  /// Kahn order, ties broken by (stage, id). Empty optional if cyclic.
  std::optional<std::vector<std::size_t>> topological_order() const;

  /// Number of distinct stages spanned (max stage + 1); 0 when empty.
  int stage_count() const;
  std::size_t real_task_count() const;
  double total_work() const;

  TaskId max_task_id() const;

  /// Copy with new timing; structure is shared by value.
  Workflow rescheduled(std::string wf_id, double arrival_time, double deadline, double p_fail) const;
  /// Copy with every task id shifted by `offset`.
  Workflow with_id_offset(std::uint64_t offset) const;

 private:
  void build_index();

  std::string wf_id_;
  std::vector<Task> tasks_;
  std::vector<Edge> edges_;
  double deadline_ = 0.0;
  double p_fail_ = 0.0;
  double arrival_time_ = 0.0;

  std::vector<std::pair<TaskId, std::size_t>> id_index_;  // sorted by id
  std::vector<std::vector<std::size_t>> parents_;
  std::vector<std::vector<std::size_t>> children_;
};

struct Violation {
  enum class Kind { Cycle, StageGap, Orphan, RootWithParent, BadProbability, DummyInvariant, NonPositiveWork };
  Kind kind;
  std::string detail;
};

std::string_view to_string(Violation::Kind k);

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  bool has(Violation::Kind k) const;
};

ValidationReport validate(const Workflow& workflow);

/// Replaces every stage-skipping edge with a chain of pass-through tasks so
/// that each edge joins consecutive stages. New ids start at `first_free`,
/// or after the largest existing id when not given.
///
/// Throws CycleError on cyclic input and std::invalid_argument for an edge
/// whose child is not at a later stage than its parent.
Workflow insert_dummies(const Workflow& workflow, std::optional<TaskId> first_free = std::nullopt);

}  // namespace maestro

template <>
struct std::hash<maestro::TaskId> {
  std::size_t operator()(const maestro::TaskId& id) const noexcept { return std::hash<std::uint64_t>{}(id.value); }
};
