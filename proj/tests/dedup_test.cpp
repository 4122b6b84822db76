#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "dedup_oracle.hpp"
#include "maestro/dedup.hpp"
#include "maestro/errors.hpp"
#include "maestro/fixtures.hpp"
#include "test_support.hpp"

using namespace maestro;
using maestro::testing::DedupOracle;
using maestro::testing::make_workflow;
using maestro::testing::partition_of;
using maestro::testing::random_dag;

namespace {

Workflow five_task(const std::string& name, std::uint64_t base, double deadline = 50.0) {
  return make_workflow(name,
                       {{base + 1, "sense", 0, 2.0, 1.0},
                        {base + 2, "filter", 1, 1.0, 2.0},
                        {base + 3, "features", 1, 1.5, 2.0},
                        {base + 4, "classify", 2, 0.5, 3.0},
                        {base + 5, "report", 3, 0.1, 1.0}},
                       {{base + 1, base + 2}, {base + 1, base + 3}, {base + 2, base + 4}, {base + 3, base + 4},
                        {base + 4, base + 5}},
                       deadline);
}

std::vector<Workflow> random_batch(std::mt19937_64& rng, int count, int max_tasks) {
  std::vector<Workflow> out;
  for (int i = 0; i < count; ++i) {
    out.push_back(random_dag(rng, "w" + std::to_string(i), static_cast<std::uint64_t>(i) * 100, max_tasks));
  }
  return out;
}

void check_invariants(const DedupBatch& batch, const MergedWorkflowSet& merged) {
  // Conservation: every original task is a survivor or maps to exactly one.
  std::size_t originals = 0;
  for (const Workflow& w : batch.workflows) {
    for (const Task& t : w.tasks()) {
      if (t.is_dummy) continue;
      ++originals;
      REQUIRE(merged.survivor_of.count(TaskRef{w.id(), t.id}) == 1);
    }
  }
  CHECK(merged.survivor_of.size() == originals);
  std::size_t members = 0;
  for (const auto& [id, refs] : merged.provenance) members += refs.size();
  CHECK(members == originals);
  CHECK(merged.surviving_tasks() + merged.discarded_tasks() == originals);

  std::map<std::string, const Workflow*> by_id;
  for (const Workflow& w : batch.workflows) by_id[w.id()] = &w;
  std::map<TaskId, const Task*> merged_tasks;
  std::size_t real = 0;
  for (const Workflow& w : merged.workflows) {
    CHECK_MESSAGE(validate(w).ok(), w.id());
    real += w.real_task_count();
    for (const Task& t : w.tasks()) merged_tasks[t.id] = &t;
  }
  CHECK(real == merged.surviving_tasks());

  for (const auto& [survivor, refs] : merged.provenance) {
    REQUIRE(!refs.empty());
    const Workflow& rep_wf = *by_id.at(refs.front().wf_id);
    const Task& rep = rep_wf.task(refs.front().task);
    std::set<std::string> wfs;
    for (const TaskRef& r : refs) {
      const Workflow& wf = *by_id.at(r.wf_id);
      const Task& t = wf.task(r.task);
      // No false merges, and soundness against the standalone similarity test.
      CHECK(t.kind.name == rep.kind.name);
      CHECK(t.output_size == rep.output_size);
      CHECK(check_similarity(rep_wf, rep.id, wf, t.id));
      CHECK(wfs.insert(r.wf_id).second);
    }
    CHECK((merged.fork_tasks.count(survivor) == 1) == (wfs.size() > 1));
    const Task& out = *merged_tasks.at(survivor);
    if (wfs.size() > 1 && out.criticality != Criticality::NonCritical) CHECK(out.criticality == Criticality::Fork);
  }
}

}  // namespace

TEST_CASE("check_similarity on single tasks and small pairs") {
  Workflow a = make_workflow("a", {{1, "A", 0, 1.0}}, {});
  Workflow b = make_workflow("b", {{2, "A", 0, 1.0}}, {});
  Workflow c = make_workflow("c", {{3, "A", 0, 2.0}}, {});
  CHECK(check_similarity(a, TaskId{1}, b, TaskId{2}));
  CHECK_FALSE(check_similarity(a, TaskId{1}, c, TaskId{3}));

  Workflow x = make_workflow("x", {{1, "A", 0}, {2, "B", 0}, {3, "C", 1}}, {{1, 3}, {2, 3}});
  Workflow y = make_workflow("y", {{4, "A", 0}, {5, "D", 0}, {6, "C", 1}}, {{4, 6}, {5, 6}});
  Workflow z = make_workflow("z", {{7, "B", 0}, {8, "A", 0}, {9, "C", 1}}, {{7, 9}, {8, 9}});
  CHECK_FALSE(check_similarity(x, TaskId{3}, y, TaskId{6}));
  SimilarityTrace trace;
  CHECK(check_similarity(x, TaskId{3}, z, TaskId{9}, &trace));
  CHECK(trace.visited_k == std::set<TaskId>{TaskId{1}, TaskId{2}, TaskId{3}});
  CHECK(trace.visited_l == std::set<TaskId>{TaskId{7}, TaskId{8}, TaskId{9}});
  CHECK(trace.comparisons == 3);
}

TEST_CASE("check_similarity looks through pass-through tasks") {
  Workflow direct = make_workflow("d", {{1, "A", 0}, {2, "B", 1}, {3, "C", 2}}, {{1, 2}, {2, 3}, {1, 3}});
  Workflow bridged = insert_dummies(
      make_workflow("b", {{11, "A", 0}, {12, "B", 1}, {13, "C", 2}}, {{11, 12}, {12, 13}, {11, 13}}));
  Workflow skipping = insert_dummies(
      make_workflow("s", {{21, "A", 0}, {22, "B", 1}, {23, "C", 3}}, {{21, 22}, {22, 23}, {21, 23}}));
  CHECK(check_similarity(direct, TaskId{3}, bridged, TaskId{13}));
  CHECK(check_similarity(direct, TaskId{3}, skipping, TaskId{23}));
}

TEST_CASE("two identical five-task workflows collapse onto one") {
  DedupBatch batch{{five_task("left", 0, 40.0), five_task("right", 100, 70.0)}, 2.0};
  MergedWorkflowSet merged = dedup(batch);
  CHECK(merged.original_tasks == 10);
  CHECK(merged.surviving_tasks() == 5);
  CHECK(merged.discarded_tasks() == 5);
  REQUIRE(merged.workflows.size() == 1);
  const Workflow& w = merged.workflows.front();
  CHECK(w.id() == "left+right");
  CHECK(w.deadline() == 40.0);
  CHECK(merged.fork_tasks.size() == 5);
  for (const Task& t : w.tasks()) {
    CHECK(t.criticality == Criticality::Fork);
    CHECK(merged.served_workflows(t.id) == std::set<std::string>{"left", "right"});
  }
  check_invariants(batch, merged);
}

TEST_CASE("workflows with no common kinds pass through untouched") {
  Workflow a = make_workflow("a", {{1, "A", 0}, {2, "B", 1}, {3, "C", 1}}, {{1, 2}, {1, 3}});
  Workflow b = make_workflow("b", {{11, "D", 0}, {12, "E", 1}, {13, "F", 2}}, {{11, 12}, {12, 13}});
  DedupBatch batch{{a, b}, 1.0};
  MergedWorkflowSet merged = dedup(batch);
  CHECK(merged.surviving_tasks() == 6);
  CHECK(merged.fork_tasks.empty());
  CHECK(merged.workflows.size() == 2);
  CHECK(merged.comparisons <= a.size() * b.size());
}

TEST_CASE("stress and hypoxia detection share their ECG and motion front end") {
  Workflow stress = fixtures::stress_detection();
  Workflow hypoxia = fixtures::hypoxia_detection();
  DedupBatch batch{{stress, hypoxia}, 5.0};
  MergedWorkflowSet merged = dedup(batch);
  CHECK(merged.original_tasks == 16);
  CHECK(merged.surviving_tasks() == 12);
  REQUIRE(merged.workflows.size() == 1);
  std::set<std::string> shared;
  for (TaskId id : merged.fork_tasks) shared.insert(merged.workflows.front().task(id).kind.name);
  CHECK(shared == std::set<std::string>{"ecg-sensing", "accelerometer-sensing", "peak-detection", "motion-features"});
  check_invariants(batch, merged);
}

TEST_CASE("comparison count of three small chains matches a hand trace") {
  // First chain: nothing to compare. Second: a vs a, b vs b, d vs c (3).
  // Third: a vs a, x vs b, y has a fresh parent (2).
  Workflow w1 = make_workflow("w1", {{1, "A", 0}, {2, "B", 1}, {3, "C", 2}}, {{1, 2}, {2, 3}});
  Workflow w2 = make_workflow("w2", {{11, "A", 0}, {12, "B", 1}, {13, "D", 2}}, {{11, 12}, {12, 13}});
  Workflow w3 = make_workflow("w3", {{21, "A", 0}, {22, "X", 1}, {23, "Y", 2}}, {{21, 22}, {22, 23}});
  DedupBatch batch{{w1, w2, w3}, 1.0};
  CHECK(pair_comparison_count(batch) == 5);
  CHECK(dedup(batch).surviving_tasks() == 6);
}

TEST_CASE("comparisons stay within the pairwise bound for identical workflows") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    Workflow a = random_dag(rng, "a", 0, 10);
    Workflow b = a.with_id_offset(1000).rescheduled("b", 0.0, a.deadline(), a.p_fail());
    DedupBatch batch{{a, b}, 1.0};
    MergedWorkflowSet merged = dedup(batch);
    CHECK(merged.comparisons <= a.real_task_count() * b.real_task_count());
    CHECK(merged.surviving_tasks() == a.real_task_count());
    for (const auto& [id, refs] : merged.provenance) CHECK(refs.size() == 2);
  }
}

TEST_CASE("dedup rejects duplicate task ids, cycles and negative windows") {
  Workflow a = make_workflow("a", {{1, "A", 0}}, {});
  Workflow b = make_workflow("b", {{1, "A", 0}}, {});
  CHECK_THROWS_AS(dedup(DedupBatch{{a, b}, 1.0}), std::invalid_argument);
  Workflow cyc = make_workflow("c", {{5, "A", 0}, {6, "B", 1}}, {{5, 6}, {6, 5}});
  CHECK_THROWS_AS(dedup(DedupBatch{{cyc}, 1.0}), CycleError);
  CHECK_THROWS_AS(dedup(DedupBatch{{a}, -1.0}), std::invalid_argument);
  CHECK(dedup(DedupBatch{{}, 0.0}).workflows.empty());
}

TEST_CASE("merged attributes take the strictest member values") {
  Workflow a = make_workflow("a", {{1, "A", 0, 1, 1, Criticality::NonCritical, Protection::Public}}, {}, 80.0, 0.2, 3.0);
  Workflow b = make_workflow("b", {{2, "A", 0, 1, 1, Criticality::NonCritical, Protection::Private}}, {}, 30.0, 0.05, 1.0);
  MergedWorkflowSet merged = dedup(DedupBatch{{a, b}, 1.0});
  REQUIRE(merged.workflows.size() == 1);
  const Workflow& w = merged.workflows.front();
  CHECK(w.deadline() == 30.0);
  CHECK(w.p_fail() == 0.05);
  CHECK(w.arrival_time() == 1.0);
  CHECK(w.tasks()[0].protection == Protection::Private);
  CHECK(w.tasks()[0].criticality == Criticality::NonCritical);
  CHECK(merged.fork_tasks.size() == 1);
}

TEST_CASE("dedup matches the exhaustive reference on small random batches") {
  std::mt19937_64 rng(2024);
  std::size_t nontrivial = 0;
  for (int trial = 0; trial < 400; ++trial) {
    const int count = 2 + trial % 2;
    DedupBatch batch{random_batch(rng, count, count == 2 ? 6 : 4), 1.0};
    DedupOracle oracle(batch.workflows);
    const auto canonical = oracle.canonical_merges();
    REQUIRE_MESSAGE(canonical.size() == 1, "trial ", trial);
    const MergedWorkflowSet merged = dedup(batch);
    CHECK_MESSAGE(partition_of(merged) == canonical.front(), "trial ", trial);
    if (merged.discarded_tasks() > 0) ++nontrivial;
    check_invariants(batch, merged);
  }
  CHECK(nontrivial > 100);
}

TEST_CASE("dedup is invariant under batch order") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 150; ++trial) {
    DedupBatch batch{random_batch(rng, 4, 7), 1.0};
    const MergedWorkflowSet ref = dedup(batch);
    const auto ref_partition = partition_of(ref);
    const auto ref_print = maestro::testing::fingerprint(ref);
    std::vector<std::size_t> perm(batch.workflows.size());
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    while (std::next_permutation(perm.begin(), perm.end())) {
      DedupBatch shuffled{{}, 1.0};
      for (std::size_t i : perm) shuffled.workflows.push_back(batch.workflows[i]);
      const MergedWorkflowSet other = dedup(shuffled);
      CHECK(partition_of(other) == ref_partition);
      CHECK(maestro::testing::fingerprint(other) == ref_print);
    }
  }
}

TEST_CASE("adding a workflow never reduces the number of discarded tasks") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<Workflow> all = random_batch(rng, 5, 8);
    std::size_t previous = 0;
    for (std::size_t n = 1; n <= all.size(); ++n) {
      DedupBatch batch{std::vector<Workflow>(all.begin(), all.begin() + static_cast<long>(n)), 1.0};
      const MergedWorkflowSet merged = dedup(batch);
      CHECK(merged.discarded_tasks() >= previous);
      previous = merged.discarded_tasks();
      check_invariants(batch, merged);
    }
  }
}
