#pragma once

#include "moldmpc/observer/kalman.hpp"
#include "moldmpc/plant/thermal_plant.hpp"
#include "moldmpc/sysid/arx.hpp"

#include <optional>

namespace moldmpc
{

struct RomErrorStats
{
    Vector rms_per_sensor;         // C
    Vector max_percent_per_sensor; // % of the reference temperature span
    double rms = 0.0;              // C, over all sensors and samples
    double max_percent = 0.0;
};

struct RomValidationReport
{
    double reference_span = 0.0; // C, max - min of the plant outputs
    RomErrorStats open_loop;
    std::optional<RomErrorStats> with_observer;
    IoDataset plant_data;
    Matrix rom_open_loop;   // rows aligned with plant_data
    Matrix rom_with_observer;
};

/// Open-loop schedule the ROM is checked against. When `observer` is set, a
/// perturbation observer (one perturbation per output) is run alongside and
/// its one-step-ahead prior prediction is scored as well.
struct RomScenario
{
    PowerSchedule schedule;
    double duration = 40000.0;
    double sample_period = 200.0;
    std::optional<KalmanConfig> observer;
};

/// Runs the plant over the scenario and scores the ROM prediction against it.
/// Plant outputs are matched to the ROM output count (control sensors first,
/// then auxiliary).
RomValidationReport validate_rom(const ArxModel& rom, ThermalPlant& plant, const RomScenario& scenario);

} // namespace moldmpc
