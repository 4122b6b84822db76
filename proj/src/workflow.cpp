#include "maestro/workflow.hpp"

#include <algorithm>
#include <queue>
#include <stdexcept>
#include <tuple>

#include "maestro/errors.hpp"

namespace maestro {

std::string_view to_string(Criticality c) {
  switch (c) {
    case Criticality::NonCritical: return "non_critical";
    case Criticality::Blocking: return "blocking";
    case Criticality::Fork: return "fork";
  }
  return "?";
}

std::string_view to_string(Protection p) {
  switch (p) {
    case Protection::Public: return "public";
    case Protection::Protected: return "protected";
    case Protection::Private: return "private";
  }
  return "?";
}

std::optional<Criticality> parse_criticality(std::string_view s) {
  if (s == "non_critical") return Criticality::NonCritical;
  if (s == "blocking") return Criticality::Blocking;
  if (s == "fork") return Criticality::Fork;
  return std::nullopt;
}

std::optional<Protection> parse_protection(std::string_view s) {
  if (s == "public") return Protection::Public;
  if (s == "protected") return Protection::Protected;
  if (s == "private") return Protection::Private;
  return std::nullopt;
}

std::string_view to_string(Violation::Kind k) {
  switch (k) {
    case Violation::Kind::Cycle: return "cycle";
    case Violation::Kind::StageGap: return "stage-gap";
    case Violation::Kind::Orphan: return "orphan";
    case Violation::Kind::RootWithParent: return "root-with-parent";
    case Violation::Kind::BadProbability: return "bad-probability";
    case Violation::Kind::DummyInvariant: return "dummy-invariant";
    case Violation::Kind::NonPositiveWork: return "non-positive-work";
  }
  return "?";
}

Workflow::Workflow(std::string wf_id, std::vector<Task> tasks, std::vector<Edge> edges, double deadline,
                   double p_fail, double arrival_time)
    : wf_id_(std::move(wf_id)),
      tasks_(std::move(tasks)),
      edges_(std::move(edges)),
      deadline_(deadline),
      p_fail_(p_fail),
      arrival_time_(arrival_time) {
  build_index();
}

void Workflow::build_index() {
  id_index_.clear();
  id_index_.reserve(tasks_.size());
  for (std::size_t i = 0; i < tasks_.size(); ++i) {
    id_index_.emplace_back(tasks_[i].id, i);
  }
  std::sort(id_index_.begin(), id_index_.end());
  for (std::size_t i = 1; i < id_index_.size(); ++i) {
    if (id_index_[i].first == id_index_[i - 1].first) {
      throw std::invalid_argument("workflow " + wf_id_ + ": duplicate task id " +
                                  std::to_string(id_index_[i].first.value));
    }
  }

  parents_.assign(tasks_.size(), {});
  children_.assign(tasks_.size(), {});
  for (const Edge& e : edges_) {
    if (!contains(e.parent) || !contains(e.child)) {
      throw std::invalid_argument("workflow " + wf_id_ + ": edge references unknown task");
    }
    const std::size_t p = index_of(e.parent);
    const std::size_t c = index_of(e.child);
    if (std::find(children_[p].begin(), children_[p].end(), c) != children_[p].end()) {
      throw std::invalid_argument("workflow " + wf_id_ + ": duplicate edge");
    }
    children_[p].push_back(c);
    parents_[c].push_back(p);
  }
  for (std::size_t i = 0; i < tasks_.size(); ++i) {
    tasks_[i].input_sizes.clear();
    for (std::size_t p : parents_[i]) {
      tasks_[i].input_sizes.push_back(tasks_[p].output_size);
    }
  }
}

bool Workflow::contains(TaskId id) const {
  auto it = std::lower_bound(id_index_.begin(), id_index_.end(), std::make_pair(id, std::size_t{0}));
  return it != id_index_.end() && it->first == id;
}

std::size_t Workflow::index_of(TaskId id) const {
  auto it = std::lower_bound(id_index_.begin(), id_index_.end(), std::make_pair(id, std::size_t{0}));
  if (it == id_index_.end() || it->first != id) {
    throw std::out_of_range("workflow " + wf_id_ + ": no task " + std::to_string(id.value));
  }
  return it->second;
}

std::vector<std::size_t> Workflow::real_parents(std::size_t index) const {
  std::vector<std::size_t> out;
  std::vector<std::size_t> stack(parents_[index].begin(), parents_[index].end());
  std::vector<bool> seen(tasks_.size(), false);
  while (!stack.empty()) {
    const std::size_t p = stack.back();
    stack.pop_back();
    if (seen[p]) continue;
    seen[p] = true;
    if (tasks_[p].is_dummy) {
      stack.insert(stack.end(), parents_[p].begin(), parents_[p].end());
    } else {
      out.push_back(p);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::optional<std::vector<std::size_t>> Workflow::topological_order() const {
  using Key = std::tuple<int, std::uint64_t, std::size_t>;
  std::priority_queue<Key, std::vector<Key>, std::greater<>> ready;
  std::vector<std::size_t> pending(tasks_.size());
  for (std::size_t i = 0; i < tasks_.size(); ++i) {
    pending[i] = parents_[i].size();
    if (pending[i] == 0) ready.emplace(tasks_[i].stage, tasks_[i].id.value, i);
  }
  std::vector<std::size_t> order;
  order.reserve(tasks_.size());
  while (!ready.empty()) {
    const std::size_t i = std::get<2>(ready.top());
    ready.pop();
    order.push_back(i);
    for (std::size_t c : children_[i]) {
      if (--pending[c] == 0) ready.emplace(tasks_[c].stage, tasks_[c].id.value, c);
    }
  }
  if (order.size() != tasks_.size()) return std::nullopt;
  return order;
}

int Workflow::stage_count() const {
  int max_stage = -1;
  for (const Task& t : tasks_) max_stage = std::max(max_stage, t.stage);
  return max_stage + 1;
}

std::size_t Workflow::real_task_count() const {
  return static_cast<std::size_t>(std::count_if(tasks_.begin(), tasks_.end(), [](const Task& t) { return !t.is_dummy; }));
}

double Workflow::total_work() const {
  double sum = 0.0;
  for (const Task& t : tasks_) sum += t.work();
  return sum;
}

TaskId Workflow::max_task_id() const {
  return id_index_.empty() ? TaskId{0} : id_index_.back().first;
}

Workflow Workflow::rescheduled(std::string wf_id, double arrival_time, double deadline, double p_fail) const {
  Workflow copy = *this;
  copy.wf_id_ = std::move(wf_id);
  copy.arrival_time_ = arrival_time;
  copy.deadline_ = deadline;
  copy.p_fail_ = p_fail;
  return copy;
}

Workflow Workflow::with_id_offset(std::uint64_t offset) const {
  std::vector<Task> tasks = tasks_;
  for (Task& t : tasks) t.id.value += offset;
  std::vector<Edge> edges = edges_;
  for (Edge& e : edges) {
    e.parent.value += offset;
    e.child.value += offset;
  }
  return Workflow(wf_id_, std::move(tasks), std::move(edges), deadline_, p_fail_, arrival_time_);
}

bool ValidationReport::has(Violation::Kind k) const {
  return std::any_of(violations.begin(), violations.end(), [k](const Violation& v) { return v.kind == k; });
}

ValidationReport validate(const Workflow& workflow) {
  ValidationReport report;
  auto add = [&](Violation::Kind kind, std::string detail) { report.violations.push_back({kind, std::move(detail)}); };

  if (!(workflow.p_fail() >= 0.0 && workflow.p_fail() < 1.0)) {
    add(Violation::Kind::BadProbability, "p_fail must lie in [0, 1)");
  }
  if (!workflow.topological_order()) {
    add(Violation::Kind::Cycle, "dependency graph of " + workflow.id() + " has a cycle");
  }

  const auto& tasks = workflow.tasks();
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    const Task& t = tasks[i];
    const std::string name = "task " + std::to_string(t.id.value);
    const auto parents = workflow.parents(i);
    if (t.stage == 0 && !parents.empty()) {
      add(Violation::Kind::RootWithParent, name + " is at stage 0 but has parents");
    }
    if (t.stage > 0 && parents.empty()) {
      add(Violation::Kind::Orphan, name + " at stage " + std::to_string(t.stage) + " has no parent");
    }
    if (t.stage < 0) {
      add(Violation::Kind::StageGap, name + " has a negative stage");
    }
    for (std::size_t p : parents) {
      if (tasks[p].stage != t.stage - 1) {
        add(Violation::Kind::StageGap, "edge " + std::to_string(tasks[p].id.value) + "->" + std::to_string(t.id.value) +
                                           " joins stages " + std::to_string(tasks[p].stage) + " and " +
                                           std::to_string(t.stage));
      }
    }
    if (t.is_dummy) {
      if (t.kind.mean_work != 0.0 || parents.size() != 1 || t.output_size != tasks[parents[0]].output_size) {
        add(Violation::Kind::DummyInvariant, name + " is a dummy without a single pass-through input");
      }
    } else if (!(t.kind.mean_work > 0.0)) {
      add(Violation::Kind::NonPositiveWork, name + " has non-positive work");
    }
  }
  return report;
}

Workflow insert_dummies(const Workflow& workflow, std::optional<TaskId> first_free) {
  if (!workflow.topological_order()) {
    throw CycleError("insert_dummies: workflow " + workflow.id() + " is not acyclic");
  }
  std::uint64_t next_id = first_free ? first_free->value : workflow.max_task_id().value + 1;
  if (workflow.size() == 0) next_id = first_free ? first_free->value : 0;

  std::vector<Task> tasks = workflow.tasks();
  std::vector<Edge> edges;
  edges.reserve(workflow.edges().size());
  for (const Edge& e : workflow.edges()) {
    const Task& parent = workflow.task(e.parent);
    const Task& child = workflow.task(e.child);
    const int gap = child.stage - parent.stage;
    if (gap <= 0) {
      throw std::invalid_argument("insert_dummies: edge " + std::to_string(e.parent.value) + "->" +
                                  std::to_string(e.child.value) + " does not advance the stage");
    }
    if (gap == 1) {
      edges.push_back(e);
      continue;
    }
    TaskId prev = e.parent;
    for (int s = parent.stage + 1; s < child.stage; ++s) {
      Task dummy;
      dummy.id = TaskId{next_id++};
      dummy.kind = TaskKind{std::string(kDummyKind), 0.0};
      dummy.stage = s;
      dummy.output_size = parent.output_size;
      dummy.criticality = Criticality::NonCritical;
      dummy.protection = parent.protection;
      dummy.is_dummy = true;
      tasks.push_back(dummy);
      edges.push_back({prev, dummy.id});
      prev = dummy.id;
    }
    edges.push_back({prev, e.child});
  }
  return Workflow(workflow.id(), std::move(tasks), std::move(edges), workflow.deadline(), workflow.p_fail(),
                  workflow.arrival_time());
}

}  // namespace maestro
