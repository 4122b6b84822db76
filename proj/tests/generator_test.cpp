#include <doctest.h>

#include <set>

#include "maestro/errors.hpp"
#include "maestro/generator.hpp"
#include "maestro/workflow_io.hpp"

using namespace maestro;

namespace {

GeneratorSpec basic_spec() {
  GeneratorSpec spec;
  spec.kind_pools = {make_kind_pool("k", 5, {1.0, 4.0}, {1.0, 3.0}, 3)};
  return spec;
}

}  // namespace

TEST_CASE("a degenerate spec yields a two-task chain") {
  GeneratorSpec spec = basic_spec();
  spec.stages = {2, 2};
  spec.tasks_per_stage = {1, 1};
  Workflow w = generate_workflow(spec, 7);
  REQUIRE(w.size() == 2);
  REQUIRE(w.edges().size() == 1);
  CHECK(w.edges()[0].parent == w.tasks()[0].id);
  CHECK(w.edges()[0].child == w.tasks()[1].id);
  CHECK(validate(w).ok());
}

TEST_CASE("generation is deterministic per seed") {
  GeneratorSpec spec = basic_spec();
  CHECK(to_json(generate_workflow(spec, 99)) == to_json(generate_workflow(spec, 99)));
  int differing = 0;
  for (std::uint64_t s = 0; s < 20; ++s) {
    if (to_json(generate_workflow(spec, s)) != to_json(generate_workflow(spec, s + 1000))) ++differing;
  }
  CHECK(differing >= 18);
}

TEST_CASE("every generated workflow validates") {
  GeneratorSpec spec = basic_spec();
  spec.stages = {1, 6};
  spec.tasks_per_stage = {1, 4};
  spec.parents_per_task = {1, 3};
  spec.protection = {0.2, 0.3, 0.5};
  spec.non_critical_fraction = 0.3;
  for (std::uint64_t s = 0; s < 500; ++s) {
    const ValidationReport r = validate(generate_workflow(spec, s));
    CHECK_MESSAGE(r.ok(), "seed ", s);
  }
}

TEST_CASE("empty ranges raise SpecError") {
  GeneratorSpec spec = basic_spec();
  spec.stages = {3, 2};
  CHECK_THROWS_AS(generate_workflow(spec, 1), SpecError);
  spec = basic_spec();
  spec.tasks_per_stage = {0, 0};
  CHECK_THROWS_AS(generate_workflow(spec, 1), SpecError);
  spec = basic_spec();
  spec.kind_pools = {{}};
  CHECK_THROWS_AS(generate_workflow(spec, 1), SpecError);
  spec = basic_spec();
  spec.protection = {0.5, 0.5, 0.5};
  CHECK_THROWS_AS(generate_workflow(spec, 1), SpecError);
  CHECK_THROWS_AS(make_kind_pool("x", 0, {1, 2}, {1, 2}, 1), SpecError);
}

TEST_CASE("kind collisions follow the birthday estimate") {
  // Three single-task workflows drawing from five kinds share a kind with
  // probability 1 - (5*4*3)/5^3 = 0.52.
  GeneratorSpec spec = basic_spec();
  spec.stages = {1, 1};
  spec.tasks_per_stage = {1, 1};
  const double analytic = 1.0 - (5.0 * 4.0 * 3.0) / (5.0 * 5.0 * 5.0);
  const int samples = 10000;
  int collisions = 0;
  std::uint64_t seed = 0;
  for (int s = 0; s < samples; ++s) {
    std::set<std::string> kinds;
    for (int j = 0; j < 3; ++j) kinds.insert(generate_workflow(spec, seed++).tasks()[0].kind.name);
    if (kinds.size() < 3) ++collisions;
  }
  const double measured = static_cast<double>(collisions) / samples;
  CHECK(std::abs(measured - analytic) <= 0.05);
}

TEST_CASE("protection mixes couple through a shared uniform draw") {
  GeneratorSpec strict = basic_spec();
  strict.protection = {0.3, 0.3, 0.4};
  GeneratorSpec loose = basic_spec();
  loose.protection = {0.1, 0.2, 0.7};
  for (std::uint64_t s = 0; s < 100; ++s) {
    Workflow a = generate_workflow(strict, s);
    Workflow b = generate_workflow(loose, s);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(a.tasks()[i].kind == b.tasks()[i].kind);
      CHECK(b.tasks()[i].protection <= a.tasks()[i].protection);
    }
  }
}
