#include "moldmpc/sysid/rom_validation.hpp"

#include "moldmpc/sysid/state_space.hpp"

namespace moldmpc
{

namespace
{

RomErrorStats score(const Matrix& truth, const Matrix& predicted, Eigen::Index first_row, double span)
{
    const Eigen::Index rows = truth.rows() - first_row;
    const Matrix err = truth.bottomRows(rows) - predicted.bottomRows(rows);
    RomErrorStats s;
    s.rms_per_sensor = (err.colwise().squaredNorm() / static_cast<double>(rows)).cwiseSqrt().transpose();
    s.max_percent_per_sensor = 100.0 * err.cwiseAbs().colwise().maxCoeff().transpose() / span;
    s.rms = std::sqrt(err.squaredNorm() / static_cast<double>(err.size()));
    s.max_percent = s.max_percent_per_sensor.maxCoeff();
    return s;
}

} // namespace

RomValidationReport validate_rom(const ArxModel& rom, ThermalPlant& plant, const RomScenario& scenario)
{
    rom.validate();
    const auto control = static_cast<int>(plant.control_sensor_cells().size());
    const bool aux = rom.m > control;
    if (rom.m != control && rom.m != control + static_cast<int>(plant.auxiliary_sensor_cells().size()))
        throw InputError("validate_rom: ROM output count matches neither sensor set");
    if (rom.nu != plant.heater_count())
        throw InputError("validate_rom: ROM input count does not match the heaters");

    RomValidationReport report;
    report.plant_data = plant.run_open_loop(scenario.schedule, scenario.sample_period, scenario.duration, aux);
    const IoDataset& data = report.plant_data;
    report.reference_span = data.Y.maxCoeff() - data.Y.minCoeff();
    if (!(report.reference_span > 0.0))
        throw InputError("validate_rom: scenario produces no temperature change");

    // Open loop: ROM started from the plant's initial (baseline) history.
    const Matrix initial_y = data.Y.row(0).replicate(rom.r, 1);
    const Matrix initial_u = rom.baseline.u.transpose().replicate(std::max(rom.s, 1), 1);
    report.rom_open_loop = simulate_arx(rom, initial_y, initial_u, data.U);
    report.open_loop = score(data.Y, report.rom_open_loop, 1, report.reference_span);

    if (scenario.observer)
    {
        const AugmentedModel aug = augment_with_perturbations(arx_to_statespace(rom), rom.m);
        PerturbationObserver obs(aug, *scenario.observer);
        report.rom_with_observer = Matrix(data.rows(), rom.m);
        report.rom_with_observer.row(0) = data.Y.row(0);
        for (Eigen::Index t = 0; t + 1 < data.rows(); ++t)
        {
            const Vector u = data.U.row(t).transpose();
            report.rom_with_observer.row(t + 1) = obs.predict_next_output(u).transpose();
            obs.step(u, data.Y.row(t + 1).transpose());
        }
        report.with_observer = score(data.Y, report.rom_with_observer, 1, report.reference_span);
    }
    return report;
}

} // namespace moldmpc
