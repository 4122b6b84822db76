#pragma once

#include <stdexcept>
#include <string>

namespace maestro {

/// The dependency graph contains a cycle.
class CycleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A generator or trace specification has an empty or inconsistent range.
class SpecError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Authorization filtered out every service provider for a task.
class NoEligibleSp : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A simulation or experiment configuration is unusable.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A document does not follow the workflow/trace/config schema.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace maestro
