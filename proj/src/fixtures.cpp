#include "maestro/fixtures.hpp"

#include <string>
#include <utility>

namespace maestro::fixtures {
namespace {

struct Row {
  std::uint64_t id;
  const char* kind;
  double work;
  int stage;
  double output;
  Protection protection;
};

Workflow build(const std::string& name, std::uint64_t base, const std::vector<Row>& rows,
               const std::vector<std::pair<std::uint64_t, std::uint64_t>>& edges, double deadline, double p_fail) {
  std::vector<Task> tasks;
  for (const Row& r : rows) {
    Task t;
    t.id = TaskId{base + r.id};
    t.kind = TaskKind{r.kind, r.work};
    t.stage = r.stage;
    t.output_size = r.output;
    t.protection = r.protection;
    tasks.push_back(std::move(t));
  }
  std::vector<Edge> es;
  for (auto [p, c] : edges) es.push_back({TaskId{base + p}, TaskId{base + c}});
  return Workflow(name, std::move(tasks), std::move(es), deadline, p_fail);
}

}  // namespace

Workflow stress_detection(std::uint64_t id_base, double deadline, double p_fail) {
  return build("stress", id_base,
               {{0, "ecg-sensing", 2.0, 0, 4.0, Protection::Private},
                {1, "accelerometer-sensing", 2.0, 0, 3.0, Protection::Private},
                {2, "skin-conductance-sensing", 2.0, 0, 1.0, Protection::Private},
                {3, "peak-detection", 6.0, 1, 0.5, Protection::Protected},
                {4, "motion-features", 5.0, 1, 0.5, Protection::Public},
                {5, "arousal-features", 4.0, 1, 0.2, Protection::Protected},
                {6, "exertion-detection", 8.0, 2, 0.1, Protection::Public},
                {7, "stress-decision", 3.0, 3, 0.05, Protection::Protected}},
               {{0, 3}, {1, 4}, {2, 5}, {3, 6}, {4, 6}, {6, 7}, {5, 7}}, deadline, p_fail);
}

Workflow hypoxia_detection(std::uint64_t id_base, double deadline, double p_fail) {
  return build("hypoxia", id_base,
               {{0, "ecg-sensing", 2.0, 0, 4.0, Protection::Private},
                {1, "accelerometer-sensing", 2.0, 0, 3.0, Protection::Private},
                {2, "spo2-sensing", 2.0, 0, 1.0, Protection::Private},
                {3, "peak-detection", 6.0, 1, 0.5, Protection::Protected},
                {4, "motion-features", 5.0, 1, 0.5, Protection::Public},
                {5, "saturation-trend", 4.0, 1, 0.2, Protection::Protected},
                {6, "activity-context", 7.0, 2, 0.1, Protection::Public},
                {7, "hypoxia-decision", 3.0, 3, 0.05, Protection::Protected}},
               {{0, 3}, {1, 4}, {2, 5}, {3, 6}, {4, 6}, {6, 7}, {5, 7}}, deadline, p_fail);
}

TaskKind location_determination() { return TaskKind{"location-determination", 28.6}; }

std::vector<SpProfile> testbed_sps() {
  const double work = location_determination().mean_work;
  std::vector<SpProfile> sps(3);
  sps[0].sp_id = 1;  // Galaxy Tab
  sps[0].speed = work / 143.0;
  sps[0].trust = Trust::Personal;
  sps[1].sp_id = 2;  // Raspberry Pi
  sps[1].speed = work / 1100.0;
  sps[1].trust = Trust::Trusted;
  sps[2].sp_id = 3;  // laptop
  sps[2].speed = 1.0;
  sps[2].trust = Trust::Volunteered;
  return sps;
}

}  // namespace maestro::fixtures
