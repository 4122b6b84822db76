#pragma once

#include <cstdint>
#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include "maestro/generator.hpp"
#include "maestro/metrics.hpp"
#include "maestro/sim.hpp"
#include "maestro/trace.hpp"

namespace maestro {

struct ExperimentPoint {
  std::string x;
  std::string series;
  Summary stats;
};

struct ExperimentTable {
  std::string name;
  std::string x_label;
  std::vector<ExperimentPoint> points;

  /// Mean of (x, series); throws std::out_of_range when absent.
  double mean(const std::string& x, const std::string& series) const;
  const ExperimentPoint& at(const std::string& x, const std::string& series) const;
};

/// Columns x,series,mean,stddev,n with the x label as the first header.
void write_csv(const ExperimentTable& table, std::ostream& out);

/// Formats a sweep value the way tables key their rows.
std::string format_x(double x);

/// Runs body(0..n-1) on up to `jobs` threads. The first exception is
/// rethrown after all workers stop.
void parallel_for(std::size_t n, unsigned jobs, const std::function<void(std::size_t)>& body);

/// Task-reduction sweep over several arrival rates on a static pool.
struct DedupReductionSetup {
  std::vector<double> mus{10.0, 20.0, 30.0};
  std::vector<double> ratios{0.0, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0, 4.5, 5.0};  // window / mu
  std::vector<double> windows{0, 20, 40, 60, 80, 100, 120, 140, 160, 180, 200};      // absolute, s
  std::size_t n_requests = 100;
  std::size_t pool_size = 40;
  RealRange deadline{40.0, 80.0};
  double p_fail = 0.1;
  GeneratorSpec generator;
  SimConfig sim;
  std::size_t seeds = 10;

  DedupReductionSetup();
};

/// x is the window/mu ratio when `adapted`, otherwise the absolute window.
/// Series are named mu=<mu>; values are percentages of tasks executed.
ExperimentTable dedup_reduction(const DedupReductionSetup& setup, bool adapted, std::uint64_t seed, unsigned jobs);

/// Success sweep on an overloaded static pool. Series: dedup (least slack),
/// fcfs (same window, first come first served) and no-dedup (zero window).
struct DedupSuccessSetup {
  std::vector<double> ratios{0.0, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0, 4.5, 5.0};
  TraceSpec trace;
  GeneratorSpec generator;
  SimConfig sim;
  std::size_t seeds = 10;

  DedupSuccessSetup();
};

ExperimentTable dedup_success(const DedupSuccessSetup& setup, std::uint64_t seed, unsigned jobs);

struct Scenario {
  std::string name;
  double mean_availability = 0.0;  // s
};

/// Success of each policy as SP churn grows from A (stable) to E (volatile)
/// at a fixed mean population.
struct ScenarioSetup {
  double population = 30.0;
  std::vector<Scenario> scenarios;
  std::vector<Policy> policies{Policy::Baseline, Policy::HealingOnly, Policy::HealingPlusProtection};
  MixedTraceSpec trace;
  GeneratorSpec small;
  GeneratorSpec large;
  SimConfig sim;
  std::size_t seeds = 10;

  ScenarioSetup();
};

ExperimentTable scenarios(const ScenarioSetup& setup, std::uint64_t seed, unsigned jobs);

struct Scheme {
  std::string name;
  ProtectionMix mix;
};

/// Success as the share of public tasks grows, with the SP trust mix fixed.
struct ProtectionPriceSetup {
  std::vector<Scheme> schemes;
  TraceSpec trace;
  GeneratorSpec generator;
  SimConfig sim;
  std::size_t seeds = 10;

  ProtectionPriceSetup();
};

ExperimentTable protection_price(const ProtectionPriceSetup& setup, std::uint64_t seed, unsigned jobs);

}  // namespace maestro
