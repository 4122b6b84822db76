#pragma once

#include <cstdint>
#include <vector>

#include "maestro/scheduler.hpp"
#include "maestro/workflow.hpp"

namespace maestro::fixtures {

/// Stress detection: ECG, accelerometer and skin-conductance sensing feeding
/// peak detection, motion features, exertion detection and a stress decision.
/// Ids start at `id_base`.
Workflow stress_detection(std::uint64_t id_base = 0, double deadline = 60.0, double p_fail = 0.1);

/// Hypoxia detection: shares the ECG and accelerometer front end with stress
/// detection, then adds SpO2 sensing and its own context and decision tasks.
Workflow hypoxia_detection(std::uint64_t id_base = 100, double deadline = 60.0, double p_fail = 0.1);

/// Location determination from the robotic workflow, in laptop-seconds.
TaskKind location_determination();

/// Galaxy Tab, Raspberry Pi and laptop, idle, with speeds calibrated so the
/// location-determination task takes 143 s, 1100 s and 28.6 s.
std::vector<SpProfile> testbed_sps();

}  // namespace maestro::fixtures
