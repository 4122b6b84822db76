#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "maestro/generator.hpp"
#include "maestro/sim.hpp"
#include "maestro/trace.hpp"

namespace maestro {

/// Everything a single simulation or trace generation needs. Experiments
/// take only `seed` and `replications` from here and keep their own setups.
struct Config {
  std::uint64_t seed = 1;
  SimConfig sim;
  GeneratorSpec generator;
  TraceSpec trace;
  std::size_t replications = 10;
};

/// Defaults used when a section or key is absent.
Config default_config();

/// Parses a JSON document with optional sections `sim`, `churn`,
/// `generator`, `trace` and `experiment`. Unknown keys, wrong types and
/// inconsistent values raise FormatError or ConfigError.
Config parse_config(std::string_view text);
Config load_config(const std::filesystem::path& path);

/// Canonical JSON of the effective configuration. Parsing it back yields an
/// equal configuration.
std::string dump_config(const Config& config);

/// FNV-1a 64 of `text`, as 16 hex digits.
std::string content_hash(std::string_view text);

}  // namespace maestro
