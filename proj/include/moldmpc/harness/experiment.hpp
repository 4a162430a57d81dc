#pragma once

#include "moldmpc/harness/indicators.hpp"
#include "moldmpc/harness/reference_profile.hpp"
#include "moldmpc/mpc/controller.hpp"
#include "moldmpc/plant/thermal_plant.hpp"
#include "moldmpc/sysid/arx.hpp"
#include "moldmpc/sysid/excitation.hpp"
#include "moldmpc/sysid/rom_validation.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace moldmpc
{

struct IdentificationSettings
{
    ArxOrders orders;
    ExcitationSpec excitation;
    double duration = 400000.0; // s
    double constant_h = 15.0;   // W/(m^2 K), exterior coefficient of the identification plant
};

struct ObserverSettings
{
    double state_noise = 1e-6;
    double perturbation_noise = 1e-2;
    double measurement_std = 0.1; // C
    double initial_variance = 1.0;
};

struct ControllerSettings
{
    int horizon = 6;
    double q = 1.0;
    double r = 0.01;
    std::optional<double> virtual_weight;
    std::vector<std::pair<int, int>> symmetry_pairs = default_symmetry_pairs(); // 1-based heater ids
    HildrethOptions solver;
};

struct ProfileSettings
{
    double empty_t_i = 10000.0;
    double injection_time = 6000.0; // end of the 120 C hold
    double cure_hold = 7200.0;
    double molding_t_i = 6000.0;
};

struct ExperimentConfig
{
    PlantConfig plant;
    IdentificationSettings identification;
    ObserverSettings observer;
    ControllerSettings controller;
    ProfileSettings profiles;
    double sample_period = 200.0; // s
    std::uint64_t seed = 1;

    void validate() const;
};

/// Built-in defaults: the reference mold with 0.1 C sensor noise.
ExperimentConfig default_experiment_config();

enum class Variant
{
    Standard,  // 6-output ROM, control sensors in the cost
    Extended,  // 14-output ROM, virtual nodes in the cost
    Symmetric, // extended plus mirrored heaters forced equal
};

const char* to_string(Variant v);
Variant parse_variant(const std::string& name);

struct IdentifiedModels
{
    ArxModel control;  // control sensors only
    ArxModel extended; // control sensors followed by the auxiliary points
};

/// Open-loop identification run on the constant-h plant (control and
/// auxiliary sensors, noise-free).
IoDataset identification_dataset(const ExperimentConfig& config);

/// Fits both ROMs on the identification dataset.
IdentifiedModels identify_models(const ExperimentConfig& config);
IdentifiedModels identify_models(const ExperimentConfig& config, const IoDataset& data);

/// Control ROM against the nonlinear plant on an excitation it was not fitted
/// on, open loop and with the perturbation observer.
RomValidationReport validate_models(const ExperimentConfig& config, const IdentifiedModels& models,
                                    double duration = 40000.0);

/// Augmented model a variant runs on, one perturbation per output.
AugmentedModel variant_model(const IdentifiedModels& models, Variant variant);
MpcConfig variant_mpc_config(const ExperimentConfig& config, const ThermalPlant& plant, Variant variant);

/// One row per controller period at t = Ts, 2 Ts, ... Temperatures are the
/// true plant values in C; powers are the commands issued at that time.
struct RunRecord
{
    Variant variant = Variant::Standard;
    Vector time;
    Vector reference;
    Matrix control;       // N x 6
    Matrix auxiliary;     // N x 8
    Matrix virtual_nodes; // N x 8, NaN when not estimated
    Matrix power;         // N x 20
    Matrix perturbations; // N x 6, estimates on the control sensors
    Vector cost;
    Vector min_cure;      // NaN without curing
    std::vector<int> iterations;
    std::vector<QpStatus> status;

    Eigen::Index rows() const { return time.size(); }
    /// Control and auxiliary temperatures side by side.
    Matrix all_sensors() const;
};

struct RunOptions
{
    bool curing = false;
    std::uint64_t seed = 1;
};

/// Closed loop: each period measures the plant, steps the observer, solves
/// the controller and integrates the plant over the period with the new
/// command held constant. Throws NumericalError naming the row on any
/// non-finite value.
RunRecord run_closed_loop(const ExperimentConfig& config, const IdentifiedModels& models, Variant variant,
                          const ReferenceProfile& profile, const RunOptions& options);

struct ComparisonRow
{
    std::string name;
    IndicatorReport report;
};

struct Comparison
{
    std::vector<ComparisonRow> rows;
    std::vector<RunRecord> runs;
};

/// The three variants on the empty-mold profile (all 14 sensors) plus the
/// symmetric variant on the molding profile (control sensors only).
Comparison compare_controllers(const ExperimentConfig& config, const IdentifiedModels& models);

/// Indicators of an empty-mold run over all sensors.
IndicatorReport empty_mold_indicators(const ExperimentConfig& config, const RunRecord& record);
/// Indicators of a molding run over the control sensors.
IndicatorReport molding_indicators(const ExperimentConfig& config, const RunRecord& record);

} // namespace moldmpc
