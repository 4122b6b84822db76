// Exhaustive reference for batch deduplication on small DAGs.
//
// A merge of a batch is a partition of all non-dummy tasks into classes such
// that a class holds at most one task per workflow, all members share kind and
// output size, and all members' (dummy-transparent) parents fall into the same
// set of classes. The oracle enumerates every such partition and keeps the
// ones that are
//   * maximal: no two classes could be united without breaking the rules, and
//   * rank-consistent: within one workflow, tasks with identical kind, size and
//     parents are ordered by (stage, id); members of a class share that rank.
// Exactly one partition survives both filters. This file does not use any of
// the library's dedup code.
#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "maestro/dedup.hpp"
#include "maestro/workflow.hpp"

namespace maestro::testing {

using Partition = std::set<std::set<TaskRef>>;

inline Partition partition_of(const MergedWorkflowSet& merged) {
  Partition p;
  for (const auto& [survivor, refs] : merged.provenance) p.insert(std::set<TaskRef>(refs.begin(), refs.end()));
  return p;
}

/// Order-free summary: sorted (kind, stage, provenance size) of every survivor.
inline std::vector<std::tuple<std::string, int, std::size_t>> fingerprint(const MergedWorkflowSet& merged) {
  std::map<TaskId, const Task*> tasks;
  for (const Workflow& w : merged.workflows) {
    for (const Task& t : w.tasks()) tasks[t.id] = &t;
  }
  std::vector<std::tuple<std::string, int, std::size_t>> out;
  for (const auto& [survivor, refs] : merged.provenance) {
    const Task* t = tasks.at(survivor);
    out.emplace_back(t->kind.name, t->stage, refs.size());
  }
  std::sort(out.begin(), out.end());
  return out;
}

class DedupOracle {
 public:
  explicit DedupOracle(const std::vector<Workflow>& workflows) {
    for (std::size_t w = 0; w < workflows.size(); ++w) {
      const Workflow& wf = workflows[w];
      std::map<std::size_t, std::size_t> local_to_node;
      std::vector<std::size_t> locals;
      for (std::size_t i = 0; i < wf.size(); ++i) {
        if (wf.tasks()[i].kind.name == kDummyKind) continue;
        local_to_node[i] = nodes_.size() + locals.size();
        locals.push_back(i);
      }
      for (std::size_t i : locals) {
        const Task& t = wf.tasks()[i];
        Node n;
        n.wf = w;
        n.ref = TaskRef{wf.id(), t.id};
        n.kind = t.kind.name;
        n.output = t.output_size;
        n.stage = t.stage;
        for (std::size_t p : look_through(wf, i)) n.parents.push_back(local_to_node.at(p));
        std::sort(n.parents.begin(), n.parents.end());
        nodes_.push_back(std::move(n));
      }
    }
    compute_ranks();
    order_ = topological();
  }

  std::vector<Partition> canonical_merges() {
    results_.clear();
    class_of_.assign(nodes_.size(), -1);
    classes_.clear();
    enumerate(0);
    return results_;
  }

  std::size_t valid_merges() const { return valid_; }

 private:
  struct Node {
    std::size_t wf = 0;
    TaskRef ref;
    std::string kind;
    double output = 0.0;
    int stage = 0;
    std::vector<std::size_t> parents;  // node indices
    std::size_t rank = 0;
  };
  struct Class {
    std::string kind;
    double output;
    std::vector<int> parent_classes;
    std::vector<std::size_t> members;
    std::uint32_t wf_mask;
  };

  static std::vector<std::size_t> look_through(const Workflow& wf, std::size_t i) {
    std::set<std::size_t> out;
    std::vector<std::size_t> stack;
    for (const Edge& e : wf.edges()) {
      if (e.child == wf.tasks()[i].id) stack.push_back(wf.index_of(e.parent));
    }
    while (!stack.empty()) {
      const std::size_t p = stack.back();
      stack.pop_back();
      if (wf.tasks()[p].kind.name != kDummyKind) {
        out.insert(p);
        continue;
      }
      for (const Edge& e : wf.edges()) {
        if (e.child == wf.tasks()[p].id) stack.push_back(wf.index_of(e.parent));
      }
    }
    return {out.begin(), out.end()};
  }

  void compute_ranks() {
    for (std::size_t a = 0; a < nodes_.size(); ++a) {
      std::size_t rank = 0;
      for (std::size_t b = 0; b < nodes_.size(); ++b) {
        const Node& x = nodes_[a];
        const Node& y = nodes_[b];
        if (a == b || x.wf != y.wf || x.kind != y.kind || x.output != y.output || x.parents != y.parents) continue;
        if (std::tie(y.stage, y.ref.task) < std::tie(x.stage, x.ref.task)) ++rank;
      }
      nodes_[a].rank = rank;
    }
  }

  std::vector<std::size_t> topological() const {
    std::vector<std::size_t> order;
    std::vector<bool> placed(nodes_.size(), false);
    while (order.size() < nodes_.size()) {
      bool progress = false;
      for (std::size_t i = 0; i < nodes_.size(); ++i) {
        if (placed[i]) continue;
        if (std::all_of(nodes_[i].parents.begin(), nodes_[i].parents.end(), [&](std::size_t p) { return placed[p]; })) {
          placed[i] = true;
          order.push_back(i);
          progress = true;
        }
      }
      if (!progress) throw std::logic_error("oracle: cyclic input");
    }
    // Workflows in batch order so that every class is opened by its earliest member.
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return nodes_[a].wf < nodes_[b].wf; });
    return order;
  }

  std::vector<int> parent_classes(std::size_t node) const {
    std::vector<int> pcs;
    for (std::size_t p : nodes_[node].parents) pcs.push_back(class_of_[p]);
    std::sort(pcs.begin(), pcs.end());
    return pcs;
  }

  void enumerate(std::size_t pos) {
    if (pos == order_.size()) {
      ++valid_;
      if (maximal() && rank_consistent()) results_.push_back(current());
      return;
    }
    const std::size_t node = order_[pos];
    const Node& n = nodes_[node];
    const std::vector<int> pcs = parent_classes(node);
    const std::uint32_t bit = 1u << n.wf;
    for (std::size_t c = 0; c < classes_.size(); ++c) {
      Class& cls = classes_[c];
      if ((cls.wf_mask & bit) != 0 || cls.kind != n.kind || cls.output != n.output || cls.parent_classes != pcs) continue;
      cls.members.push_back(node);
      cls.wf_mask |= bit;
      class_of_[node] = static_cast<int>(c);
      enumerate(pos + 1);
      classes_[c].members.pop_back();
      classes_[c].wf_mask &= ~bit;
    }
    classes_.push_back(Class{n.kind, n.output, pcs, {node}, bit});
    class_of_[node] = static_cast<int>(classes_.size() - 1);
    enumerate(pos + 1);
    classes_.pop_back();
    class_of_[node] = -1;
  }

  bool maximal() const {
    for (std::size_t a = 0; a < classes_.size(); ++a) {
      for (std::size_t b = a + 1; b < classes_.size(); ++b) {
        const Class& x = classes_[a];
        const Class& y = classes_[b];
        if ((x.wf_mask & y.wf_mask) == 0 && x.kind == y.kind && x.output == y.output &&
            x.parent_classes == y.parent_classes) {
          return false;
        }
      }
    }
    return true;
  }

  bool rank_consistent() const {
    for (const Class& c : classes_) {
      for (std::size_t m : c.members) {
        if (nodes_[m].rank != nodes_[c.members.front()].rank) return false;
      }
    }
    return true;
  }

  Partition current() const {
    Partition p;
    for (const Class& c : classes_) {
      std::set<TaskRef> s;
      for (std::size_t m : c.members) s.insert(nodes_[m].ref);
      p.insert(std::move(s));
    }
    return p;
  }

  std::vector<Node> nodes_;
  std::vector<std::size_t> order_;
  std::vector<int> class_of_;
  std::vector<Class> classes_;
  std::vector<Partition> results_;
  std::size_t valid_ = 0;
};

}  // namespace maestro::testing
