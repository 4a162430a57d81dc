#pragma once

#include "moldmpc/plant/thermal_plant.hpp"

#include <cstdint>

namespace moldmpc
{

/// Staircase-plus-PRBS identification input. Each heater switches between
/// off and an on-level drawn from [0, 100%] of its limit; the on-level is a
/// staircase that changes every `stair_period` seconds and the on/off bit is
/// a pseudo-random binary sequence clocked at `bit_period`.
struct ExcitationSpec
{
    double stair_period = 4000.0; // s
    double bit_period = 200.0;    // s
    double on_probability = 0.15;
    std::uint64_t seed = 1;
};

/// Piecewise-constant schedule, deterministic in `spec.seed`.
PowerSchedule excitation_schedule(const Vector& max_powers, const ExcitationSpec& spec, double duration);

} // namespace moldmpc
