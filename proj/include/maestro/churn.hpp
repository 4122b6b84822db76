#pragma once

#include <cstddef>
#include <limits>
#include <vector>

#include "maestro/rng.hpp"
#include "maestro/scheduler.hpp"

namespace maestro {

/// SP arrival and departure statistics. Mean population, arrival rate and
/// mean availability obey Little's law N = W * T.
struct ChurnConfig {
  double mean_interarrival = std::numeric_limits<double>::infinity();  // 1/W, s
  double mean_availability = std::numeric_limits<double>::infinity();  // T, s
  std::size_t initial_population = 0;

  /// Population N held on average by arrivals every T/N seconds.
  static ChurnConfig from_population(double population, double mean_availability);
  /// `n` SPs that never leave.
  static ChurnConfig static_pool(std::size_t n);

  double target_population() const;
  /// Throws ConfigError on non-positive means.
  void check() const;
};

struct SpLifetime {
  SpId id = 0;
  double join = 0.0;
  double leave = std::numeric_limits<double>::infinity();
};

/// Initial SPs join at t=0; later SPs arrive as a Poisson stream until
/// `horizon`. Lifetimes are exponential with the configured mean. Sorted
/// by join time, ids in join order.
std::vector<SpLifetime> spawn_churn(const ChurnConfig& config, double horizon, Rng& rng);

/// Time-averaged number of SPs present over [0, horizon].
double mean_population(const std::vector<SpLifetime>& lives, double horizon);

}  // namespace maestro
