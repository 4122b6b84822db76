#pragma once

#include <cstdint>
#include <random>
#include <span>

namespace maestro {

/// Independent random streams derived from one master seed. Adding draws to
/// one stream never perturbs another.
enum class Stream : std::uint64_t {
  Churn = 1,
  SpAttributes = 2,
  Structure = 3,
  Protection = 4,
  Criticality = 5,
  Trace = 6,
  Pool = 7,
};

std::uint64_t splitmix64(std::uint64_t& state);

/// Counter-based split: a pure function of (master, stream, index).
std::uint64_t derive_seed(std::uint64_t master, Stream stream, std::uint64_t index = 0);

/// Thin portable wrapper over mt19937_64. The distributions are written out
/// by hand so sequences are identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  Rng(std::uint64_t master, Stream stream, std::uint64_t index = 0)
      : engine_(derive_seed(master, stream, index)) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform on [0, 1) with 53 bits of resolution.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer on the closed range [lo, hi].
  int uniform_int(int lo, int hi);

  /// Exponential with the given mean; an infinite mean yields infinity.
  double exponential(double mean);

  bool bernoulli(double p) { return uniform() < p; }

  template <class T>
  const T& pick(std::span<const T> items) {
    return items[static_cast<std::size_t>(uniform_int(0, static_cast<int>(items.size()) - 1))];
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace maestro
