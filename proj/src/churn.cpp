#include "maestro/churn.hpp"

#include <algorithm>
#include <cmath>

#include "maestro/errors.hpp"

namespace maestro {

ChurnConfig ChurnConfig::from_population(double population, double mean_availability) {
  ChurnConfig c;
  c.mean_availability = mean_availability;
  c.mean_interarrival = std::isinf(mean_availability) ? mean_availability : mean_availability / population;
  c.initial_population = static_cast<std::size_t>(std::llround(population));
  return c;
}

ChurnConfig ChurnConfig::static_pool(std::size_t n) {
  ChurnConfig c;
  c.initial_population = n;
  return c;
}

double ChurnConfig::target_population() const {
  if (std::isinf(mean_availability) || std::isinf(mean_interarrival)) return static_cast<double>(initial_population);
  return mean_availability / mean_interarrival;
}

void ChurnConfig::check() const {
  if (!(mean_interarrival > 0.0)) throw ConfigError("churn: mean_interarrival must be positive");
  if (!(mean_availability > 0.0)) throw ConfigError("churn: mean_availability must be positive");
}

std::vector<SpLifetime> spawn_churn(const ChurnConfig& config, double horizon, Rng& rng) {
  config.check();
  std::vector<SpLifetime> lives;
  for (std::size_t i = 0; i < config.initial_population; ++i) {
    lives.push_back({0, 0.0, rng.exponential(config.mean_availability)});
  }
  if (std::isfinite(config.mean_interarrival)) {
    for (double t = rng.exponential(config.mean_interarrival); t < horizon; t += rng.exponential(config.mean_interarrival)) {
      lives.push_back({0, t, t + rng.exponential(config.mean_availability)});
    }
  }
  for (std::size_t i = 0; i < lives.size(); ++i) lives[i].id = i;
  return lives;
}

double mean_population(const std::vector<SpLifetime>& lives, double horizon) {
  if (!(horizon > 0.0)) return 0.0;
  double area = 0.0;
  for (const SpLifetime& l : lives) {
    const double from = std::clamp(l.join, 0.0, horizon);
    const double to = std::clamp(l.leave, 0.0, horizon);
    area += std::max(0.0, to - from);
  }
  return area / horizon;
}

}  // namespace maestro
