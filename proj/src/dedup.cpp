#include "maestro/dedup.hpp"

#include <algorithm>
#include <numeric>
#include <queue>
#include <stdexcept>
#include <tuple>

#include "maestro/errors.hpp"

namespace maestro {

std::set<std::string> MergedWorkflowSet::served_workflows(TaskId survivor) const {
  std::set<std::string> out;
  auto it = provenance.find(survivor);
  if (it != provenance.end()) {
    for (const TaskRef& r : it->second) out.insert(r.wf_id);
  }
  return out;
}

namespace {

std::vector<double> sorted_inputs(const Workflow& w, const std::vector<std::size_t>& real_parents) {
  std::vector<double> sizes;
  sizes.reserve(real_parents.size());
  for (std::size_t p : real_parents) sizes.push_back(w.tasks()[p].output_size);
  std::sort(sizes.begin(), sizes.end());
  return sizes;
}

class SimilarityMatcher {
 public:
  SimilarityMatcher(const Workflow& wk, const Workflow& wl, SimilarityTrace* trace)
      : wk_(wk), wl_(wl), trace_(trace), memo_(wk.size() * wl.size(), -1) {}

  bool similar(std::size_t k, std::size_t l) {
    signed char& slot = memo_[k * wl_.size() + l];
    if (slot >= 0) return slot != 0;
    if (trace_) ++trace_->comparisons;
    const bool result = evaluate(k, l);
    slot = result ? 1 : 0;
    if (result && trace_) {
      trace_->visited_k.insert(wk_.tasks()[k].id);
      trace_->visited_l.insert(wl_.tasks()[l].id);
    }
    return result;
  }

 private:
  bool evaluate(std::size_t k, std::size_t l) {
    const Task& tk = wk_.tasks()[k];
    const Task& tl = wl_.tasks()[l];
    if (tk.kind.name != tl.kind.name || tk.output_size != tl.output_size) return false;
    std::vector<std::size_t> pk = wk_.real_parents(k);
    std::vector<std::size_t> pl = wl_.real_parents(l);
    if (pk.size() != pl.size()) return false;
    if (sorted_inputs(wk_, pk) != sorted_inputs(wl_, pl)) return false;
    auto by_kind = [](const Workflow& w) {
      return [&w](std::size_t a, std::size_t b) {
        return std::tie(w.tasks()[a].kind.name, w.tasks()[a].id) < std::tie(w.tasks()[b].kind.name, w.tasks()[b].id);
      };
    };
    std::sort(pk.begin(), pk.end(), by_kind(wk_));
    std::sort(pl.begin(), pl.end(), by_kind(wl_));
    std::vector<bool> used(pl.size(), false);
    return match_parents(pk, pl, used, 0);
  }

  // Backtracking perfect matching; candidates are tried in sorted kind order.
  bool match_parents(const std::vector<std::size_t>& pk, const std::vector<std::size_t>& pl, std::vector<bool>& used,
                     std::size_t i) {
    if (i == pk.size()) return true;
    for (std::size_t j = 0; j < pl.size(); ++j) {
      if (used[j]) continue;
      if (wk_.tasks()[pk[i]].kind.name != wl_.tasks()[pl[j]].kind.name) continue;
      if (!similar(pk[i], pl[j])) continue;
      used[j] = true;
      if (match_parents(pk, pl, used, i + 1)) return true;
      used[j] = false;
    }
    return false;
  }

  const Workflow& wk_;
  const Workflow& wl_;
  SimilarityTrace* trace_;
  std::vector<signed char> memo_;
};

constexpr std::size_t kNone = static_cast<std::size_t>(-1);

struct Survivor {
  TaskId id;
  std::string kind;
  double mean_work = 0.0;
  double output_size = 0.0;
  std::vector<double> inputs;          // sorted
  std::vector<std::size_t> parents;    // survivor indices, sorted
  std::vector<std::size_t> children;
  std::size_t rank = 0;
  std::size_t round = 0;               // batch position that created it
  std::vector<TaskRef> members;
  std::vector<const Task*> member_tasks;
};

using GroupKey = std::tuple<std::string, double, std::vector<std::size_t>>;

class Consolidator {
 public:
  std::size_t comparisons = 0;
  std::vector<Survivor> survivors;

  void fold(const Workflow& w, std::size_t round) {
    const auto& tasks = w.tasks();
    std::vector<std::vector<std::size_t>> real_parents(tasks.size());
    std::vector<std::vector<std::size_t>> real_children(tasks.size());
    for (std::size_t i = 0; i < tasks.size(); ++i) {
      if (tasks[i].is_dummy) continue;
      real_parents[i] = w.real_parents(i);
      for (std::size_t p : real_parents[i]) real_children[p].push_back(i);
    }

    std::vector<std::size_t> image(tasks.size(), kNone);
    std::vector<bool> visited(survivors.size(), false);

    for (std::size_t l : real_order(w, real_parents, real_children)) {
      const Task& tl = tasks[l];
      std::vector<std::size_t> parent_image;
      bool parents_old = true;
      for (std::size_t p : real_parents[l]) {
        parent_image.push_back(image[p]);
        if (survivors[image[p]].round == round) parents_old = false;
      }
      std::sort(parent_image.begin(), parent_image.end());
      std::vector<double> inputs = sorted_inputs(w, real_parents[l]);

      std::size_t match = kNone;
      if (parents_old) {
        std::vector<std::size_t> candidates;
        const auto& pool = parent_image.empty() ? roots_ : survivors[parent_image.front()].children;
        for (std::size_t k : pool) {
          if (k < visited.size() && !visited[k]) candidates.push_back(k);
        }
        std::sort(candidates.begin(), candidates.end(), [&](std::size_t a, std::size_t b) {
          const Survivor& sa = survivors[a];
          const Survivor& sb = survivors[b];
          return std::tie(sa.kind, sa.rank, sa.id) < std::tie(sb.kind, sb.rank, sb.id);
        });
        for (std::size_t k : candidates) {
          ++comparisons;
          const Survivor& s = survivors[k];
          if (s.kind == tl.kind.name && s.output_size == tl.output_size && s.parents == parent_image &&
              s.inputs == inputs) {
            match = k;
            break;
          }
        }
      }

      if (match != kNone) {
        visited[match] = true;
        survivors[match].members.push_back({w.id(), tl.id});
        survivors[match].member_tasks.push_back(&tl);
        image[l] = match;
        continue;
      }

      Survivor s;
      s.id = tl.id;
      s.kind = tl.kind.name;
      s.mean_work = tl.kind.mean_work;
      s.output_size = tl.output_size;
      s.inputs = std::move(inputs);
      s.parents = parent_image;
      s.round = round;
      s.members.push_back({w.id(), tl.id});
      s.member_tasks.push_back(&tl);
      s.rank = group_count_[GroupKey{s.kind, s.output_size, s.parents}]++;
      const std::size_t idx = survivors.size();
      for (std::size_t p : s.parents) survivors[p].children.push_back(idx);
      if (s.parents.empty()) roots_.push_back(idx);
      survivors.push_back(std::move(s));
      image[l] = idx;
    }
  }

 private:
  // Topological order of the non-dummy tasks over real dependencies, ties by (stage, kind, id).
  static std::vector<std::size_t> real_order(const Workflow& w, const std::vector<std::vector<std::size_t>>& parents,
                                             const std::vector<std::vector<std::size_t>>& children) {
    const auto& tasks = w.tasks();
    using Key = std::tuple<int, std::string, std::uint64_t, std::size_t>;
    std::priority_queue<Key, std::vector<Key>, std::greater<>> ready;
    std::vector<std::size_t> pending(tasks.size(), 0);
    for (std::size_t i = 0; i < tasks.size(); ++i) {
      if (tasks[i].is_dummy) continue;
      pending[i] = parents[i].size();
      if (pending[i] == 0) ready.emplace(tasks[i].stage, tasks[i].kind.name, tasks[i].id.value, i);
    }
    std::vector<std::size_t> order;
    while (!ready.empty()) {
      const std::size_t i = std::get<3>(ready.top());
      ready.pop();
      order.push_back(i);
      for (std::size_t c : children[i]) {
        if (--pending[c] == 0) ready.emplace(tasks[c].stage, tasks[c].kind.name, tasks[c].id.value, c);
      }
    }
    return order;
  }

  std::vector<std::size_t> roots_;
  std::map<GroupKey, std::size_t> group_count_;
};

struct DisjointSets {
  std::vector<std::size_t> parent;
  explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), std::size_t{0}); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) { parent[find(a)] = find(b); }
};

}  // namespace

bool check_similarity(const Workflow& wk, TaskId k, const Workflow& wl, TaskId l, SimilarityTrace* trace) {
  SimilarityMatcher matcher(wk, wl, trace);
  return matcher.similar(wk.index_of(k), wl.index_of(l));
}

MergedWorkflowSet dedup(const DedupBatch& batch) {
  if (batch.window < 0.0) throw std::invalid_argument("dedup: negative window");

  std::set<TaskId> seen_ids;
  std::uint64_t next_free = 0;
  std::map<std::string, const Workflow*> by_id;
  MergedWorkflowSet out;
  for (const Workflow& w : batch.workflows) {
    if (!by_id.emplace(w.id(), &w).second) throw std::invalid_argument("dedup: duplicate wf_id " + w.id());
    if (!w.topological_order()) throw CycleError("dedup: workflow " + w.id() + " is cyclic");
    for (const Task& t : w.tasks()) {
      if (!seen_ids.insert(t.id).second) {
        throw std::invalid_argument("dedup: task id " + std::to_string(t.id.value) + " is not unique in the batch");
      }
      next_free = std::max(next_free, t.id.value + 1);
      if (!t.is_dummy) ++out.original_tasks;
    }
  }

  Consolidator merger;
  for (std::size_t round = 0; round < batch.workflows.size(); ++round) {
    merger.fold(batch.workflows[round], round);
  }
  out.comparisons = merger.comparisons;
  auto& survivors = merger.survivors;

  // Consolidated attributes; survivors were created parents-first.
  std::vector<int> stage(survivors.size(), 0);
  std::vector<Task> merged(survivors.size());
  for (std::size_t i = 0; i < survivors.size(); ++i) {
    const Survivor& s = survivors[i];
    int st = 0;
    Protection prot = Protection::Public;
    bool all_non_critical = true;
    std::set<std::string> wfs;
    for (std::size_t m = 0; m < s.members.size(); ++m) {
      const Task* t = s.member_tasks[m];
      st = std::max(st, t->stage);
      prot = std::max(prot, t->protection);
      if (t->criticality != Criticality::NonCritical) all_non_critical = false;
      wfs.insert(s.members[m].wf_id);
    }
    for (std::size_t p : s.parents) st = std::max(st, stage[p] + 1);
    stage[i] = st;

    Task t;
    t.id = s.id;
    t.kind = TaskKind{s.kind, s.mean_work};
    t.stage = st;
    t.output_size = s.output_size;
    t.protection = prot;
    if (wfs.size() > 1) out.fork_tasks.insert(s.id);
    if (all_non_critical) {
      t.criticality = Criticality::NonCritical;
    } else if (wfs.size() > 1) {
      t.criticality = Criticality::Fork;
    } else {
      t.criticality = s.member_tasks.front()->criticality;
    }
    merged[i] = std::move(t);

    out.provenance[s.id] = s.members;
    for (const TaskRef& r : s.members) out.survivor_of[r] = s.id;
  }

  DisjointSets components(survivors.size());
  for (std::size_t i = 0; i < survivors.size(); ++i) {
    for (std::size_t p : survivors[i].parents) components.unite(p, i);
  }
  std::map<std::size_t, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < survivors.size(); ++i) groups[components.find(i)].push_back(i);

  for (const auto& [root, members] : groups) {
    std::set<std::string> wfs;
    for (std::size_t i : members) {
      for (const TaskRef& r : survivors[i].members) wfs.insert(r.wf_id);
    }
    std::string name;
    double deadline = 0.0, p_fail = 0.0, arrival = 0.0;
    bool first = true;
    for (const std::string& id : wfs) {
      const Workflow& w = *by_id.at(id);
      name += (first ? "" : "+") + id;
      deadline = first ? w.deadline() : std::min(deadline, w.deadline());
      p_fail = first ? w.p_fail() : std::min(p_fail, w.p_fail());
      arrival = first ? w.arrival_time() : std::min(arrival, w.arrival_time());
      first = false;
    }
    std::vector<Task> tasks;
    std::vector<Edge> edges;
    for (std::size_t i : members) {
      tasks.push_back(merged[i]);
      for (std::size_t p : survivors[i].parents) edges.push_back({survivors[p].id, survivors[i].id});
    }
    Workflow component(name, std::move(tasks), std::move(edges), deadline, p_fail, arrival);
    Workflow staged = insert_dummies(component, TaskId{next_free});
    next_free = std::max(next_free, staged.max_task_id().value + 1);
    out.workflows.push_back(std::move(staged));
  }
  std::sort(out.workflows.begin(), out.workflows.end(),
            [](const Workflow& a, const Workflow& b) { return a.id() < b.id(); });
  return out;
}

std::size_t pair_comparison_count(const DedupBatch& batch) { return dedup(batch).comparisons; }

}  // namespace maestro
