#include <doctest.h>

#include <cmath>

#include "maestro/churn.hpp"
#include "maestro/errors.hpp"
#include "maestro/sim.hpp"

using namespace maestro;

TEST_CASE("Little's law relates population, arrivals and availability") {
  const ChurnConfig c = ChurnConfig::from_population(30.0, 60.0);
  CHECK(c.mean_interarrival == doctest::Approx(2.0));
  CHECK(c.initial_population == 30);
  CHECK(c.target_population() == doctest::Approx(30.0));
  CHECK(ChurnConfig::static_pool(7).target_population() == 7.0);
}

TEST_CASE("invalid churn means are rejected") {
  ChurnConfig c;
  c.mean_interarrival = 0.0;
  CHECK_THROWS_AS(c.check(), ConfigError);
  c = ChurnConfig{};
  c.mean_availability = -1.0;
  CHECK_THROWS_AS(c.check(), ConfigError);
}

TEST_CASE("without departures the population is the cumulative arrival count") {
  ChurnConfig c;
  c.mean_interarrival = 5.0;
  Rng rng(1);
  const auto lives = spawn_churn(c, 1000.0, rng);
  CHECK(lives.size() > 150);
  for (const SpLifetime& l : lives) CHECK(std::isinf(l.leave));
  // Each arrival stays: the integral is the sum of residence times.
  double area = 0.0;
  for (const SpLifetime& l : lives) area += 1000.0 - l.join;
  CHECK(mean_population(lives, 1000.0) == doctest::Approx(area / 1000.0));
}

TEST_CASE("long-run mean population matches the Little's law target") {
  ChurnConfig c;
  c.mean_interarrival = 2.0;
  c.mean_availability = 60.0;
  c.initial_population = 30;
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    Rng rng(seed, Stream::Churn);
    const auto lives = spawn_churn(c, 1e5, rng);
    CHECK(std::abs(mean_population(lives, 1e5) - 30.0) <= 0.05 * 30.0);
  }
}

TEST_CASE("churn rate grows as availability shrinks at fixed population") {
  double previous = 0.0;
  for (double t : {1000.0, 250.0, 60.0, 15.0}) {
    Rng rng(9, Stream::Churn);
    const auto lives = spawn_churn(ChurnConfig::from_population(30.0, t), 5000.0, rng);
    std::size_t leaves = 0;
    for (const SpLifetime& l : lives) leaves += l.leave < 5000.0 ? 1 : 0;
    const double rate = static_cast<double>(leaves) / 5000.0;
    CHECK(rate > previous);
    previous = rate;
  }
}

TEST_CASE("execution boundaries around the SP leave time") {
  const Allocation a{TaskId{1}, 0, 10.0, 20.0};
  const double eps = 1e-9;
  const ExecutionOutcome early = execute(a, 20.0 - eps);
  CHECK_FALSE(early.success);
  CHECK(early.time == doctest::Approx(20.0 - eps));
  const ExecutionOutcome late = execute(a, 20.0 + eps);
  CHECK(late.success);
  CHECK(late.time == 20.0);
}

TEST_CASE("empirical success matches the exponential closed form") {
  for (double mean : {10.0, 40.0, 160.0}) {
    Rng rng(static_cast<std::uint64_t>(mean), Stream::Churn);
    SpProfile sp;
    const AvailabilityModel model{AvailabilityModel::Family::Exponential, mean};
    double predicted = 0.0;
    int successes = 0;
    const int trials = 10000;
    for (int i = 0; i < trials; ++i) {
      // An SP of age `now` that is still present.
      const double now = rng.uniform(0.0, mean);
      double lifetime = rng.exponential(mean);
      while (lifetime <= now) lifetime = rng.exponential(mean);
      const double duration = rng.uniform(0.0, 2.0 * mean);
      const Allocation a{TaskId{1}, 0, now, now + duration};
      predicted += task_success_probability(a, sp, model, now);
      successes += execute(a, lifetime).success ? 1 : 0;
    }
    CHECK(std::abs(static_cast<double>(successes) / trials - predicted / trials) <= 0.01);
  }
}
