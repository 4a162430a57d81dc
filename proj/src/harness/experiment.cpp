#include "moldmpc/harness/experiment.hpp"

#include "moldmpc/observer/kalman.hpp"

#include <cmath>
#include <limits>
#include <numeric>

namespace moldmpc
{

namespace
{

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::vector<int> first_rows(int count)
{
    std::vector<int> rows(static_cast<size_t>(count));
    std::iota(rows.begin(), rows.end(), 0);
    return rows;
}

bool finite(const Vector& v) { return v.allFinite(); }

} // namespace

void ExperimentConfig::validate() const
{
    if (!(sample_period > 0.0))
        throw ConfigError("experiment: sample period must be positive");
    if (!(identification.duration > 0.0) || identification.constant_h < 0.0)
        throw ConfigError("experiment: identification duration and coefficient must be positive");
    if (!(profiles.injection_time > 0.0) || profiles.cure_hold < 0.0)
        throw ConfigError("experiment: molding profile times must be positive");
    if (!(observer.measurement_std > 0.0) || observer.state_noise < 0.0 || observer.perturbation_noise < 0.0 ||
        observer.initial_variance < 0.0)
        throw ConfigError("experiment: observer noise levels must be non-negative (sensor std positive)");
    if (plant.sensors.control.size() != 6 || plant.sensors.auxiliary.size() != 8)
        throw ConfigError("experiment: the controllers expect 6 control and 8 auxiliary sensors");
}

ExperimentConfig default_experiment_config()
{
    ExperimentConfig cfg;
    cfg.plant = default_plant_config();
    cfg.plant.sensor_noise_std = 0.1;
    cfg.plant.curing.injection_time = cfg.profiles.injection_time;
    return cfg;
}

const char* to_string(Variant v)
{
    switch (v)
    {
    case Variant::Standard:
        return "standard";
    case Variant::Extended:
        return "extended";
    case Variant::Symmetric:
        return "symmetric";
    }
    return "unknown";
}

Variant parse_variant(const std::string& name)
{
    for (Variant v : {Variant::Standard, Variant::Extended, Variant::Symmetric})
        if (name == to_string(v))
            return v;
    throw ConfigError("unknown controller variant '" + name + "' (standard, extended, symmetric)");
}

IoDataset identification_dataset(const ExperimentConfig& config)
{
    PlantConfig pc = config.plant;
    pc.convection.constant_h = config.identification.constant_h;
    pc.curing.enabled = false;
    pc.sensor_noise_std = 0.0;
    ThermalPlant plant(pc);
    const auto schedule =
        excitation_schedule(plant.max_powers(), config.identification.excitation, config.identification.duration);
    return plant.run_open_loop(schedule, config.sample_period, config.identification.duration, true);
}

IdentifiedModels identify_models(const ExperimentConfig& config)
{
    return identify_models(config, identification_dataset(config));
}

IdentifiedModels identify_models(const ExperimentConfig& config, const IoDataset& data)
{
    if (!data.has_auxiliary())
        throw InputError("identify: the dataset needs the auxiliary sensors");
    const double ambient_c = to_celsius(config.plant.ambient);
    const Vector u0 = Vector::Zero(data.U.cols());
    IdentifiedModels out;
    out.control = fit_arx(data.control_only(), config.identification.orders,
                          {Vector::Constant(data.control_outputs, ambient_c), u0});
    out.extended = fit_arx(data, config.identification.orders, {Vector::Constant(data.Y.cols(), ambient_c), u0});
    return out;
}

RomValidationReport validate_models(const ExperimentConfig& config, const IdentifiedModels& models,
                                    double duration)
{
    // Fresh excitation on the nonlinear (fitted convection) plant, noise-free.
    PlantConfig pc = config.plant;
    pc.curing.enabled = false;
    pc.sensor_noise_std = 0.0;
    ThermalPlant plant(pc);
    ExcitationSpec excitation = config.identification.excitation;
    excitation.seed += 1000;
    const AugmentedModel model = variant_model(models, Variant::Standard);
    RomScenario scenario{excitation_schedule(plant.max_powers(), excitation, duration), duration,
                         config.sample_period,
                         make_kalman_config(model, model.outputs(), config.observer.state_noise,
                                            config.observer.perturbation_noise, config.observer.measurement_std,
                                            config.observer.initial_variance)};
    return validate_rom(models.control, plant, scenario);
}

AugmentedModel variant_model(const IdentifiedModels& models, Variant variant)
{
    if (variant == Variant::Standard)
        return augment_with_perturbations(arx_to_statespace(models.control), models.control.m);
    return augment_with_perturbations(arx_to_statespace(models.extended), models.extended.m);
}

MpcConfig variant_mpc_config(const ExperimentConfig& config, const ThermalPlant& plant, Variant variant)
{
    const ControllerSettings& c = config.controller;
    MpcConfig m;
    m.horizon = c.horizon;
    m.q = c.q;
    m.r = c.r;
    m.u_min = Vector::Zero(plant.heater_count());
    m.u_max = plant.max_powers();
    m.solver = c.solver;
    m.measured_outputs = static_cast<int>(config.plant.sensors.control.size());
    m.extended_domain = variant != Variant::Standard;
    m.virtual_weight = c.virtual_weight;
    if (variant == Variant::Symmetric)
        for (const auto& [i, j] : c.symmetry_pairs)
            m.symmetry_pairs.emplace_back(i - 1, j - 1);
    return m;
}

Matrix RunRecord::all_sensors() const
{
    Matrix out(control.rows(), control.cols() + auxiliary.cols());
    out << control, auxiliary;
    return out;
}

RunRecord run_closed_loop(const ExperimentConfig& config, const IdentifiedModels& models, Variant variant,
                          const ReferenceProfile& profile, const RunOptions& options)
{
    config.validate();
    PlantConfig pc = config.plant;
    pc.curing.enabled = options.curing;
    if (options.curing)
        pc.curing.injection_time = config.profiles.injection_time;
    ThermalPlant plant(pc);

    const AugmentedModel model = variant_model(models, variant);
    const int measured = static_cast<int>(pc.sensors.control.size());
    const ObserverSettings& os = config.observer;
    PerturbationObserver observer(model,
                                  make_kalman_config(model, measured, os.state_noise, os.perturbation_noise,
                                                     os.measurement_std, os.initial_variance),
                                  first_rows(measured));
    MpcController controller(model, variant_mpc_config(config, plant, variant), Vector::Zero(plant.heater_count()));

    const double ts = config.sample_period;
    const int np = config.controller.horizon;
    const int m = model.outputs();
    const auto steps = static_cast<Eigen::Index>(std::ceil(profile.end_time() / ts - 1e-9));
    const auto reference_horizon = [&](double t) {
        Vector per(np);
        for (int i = 0; i < np; ++i)
            per(i) = profile.at(t + (i + 1) * ts);
        return stack_reference(per, m);
    };

    RunRecord rec;
    rec.variant = variant;
    rec.time.resize(steps);
    rec.reference.resize(steps);
    rec.control.resize(steps, measured);
    rec.auxiliary.resize(steps, static_cast<Eigen::Index>(pc.sensors.auxiliary.size()));
    rec.virtual_nodes = Matrix::Constant(steps, rec.auxiliary.cols(), kNaN);
    rec.power.resize(steps, plant.heater_count());
    rec.perturbations.resize(steps, std::min(model.p, measured));
    rec.cost.resize(steps);
    rec.min_cure = Vector::Constant(steps, kNaN);

    std::mt19937_64 rng(options.seed);
    PlantState state = plant.ambient_state();
    Vector x_prev = observer.state().x_hat;
    ControlCommand cmd = controller.compute_command(observer.state().x_hat, x_prev, reference_horizon(0.0));
    for (Eigen::Index k = 0; k < steps; ++k)
    {
        const double t = static_cast<double>(k + 1) * ts;
        const Vector applied = cmd.u;
        state = plant.advance(state, applied, ts);
        const SensorReadings truth = plant.read_sensors(state);
        const SensorReadings noisy = plant.read_sensors(state, pc.sensor_noise_std, rng);

        x_prev = observer.state().x_hat;
        observer.step(applied, noisy.control.array() - kKelvinOffset);
        cmd = controller.compute_command(observer.state().x_hat, x_prev, reference_horizon(t));

        rec.time(k) = t;
        rec.reference(k) = profile.at(t);
        rec.control.row(k) = (truth.control.array() - kKelvinOffset).transpose();
        rec.auxiliary.row(k) = (truth.auxiliary.array() - kKelvinOffset).transpose();
        if (variant != Variant::Standard)
            rec.virtual_nodes.row(k) = observer.outputs().tail(rec.auxiliary.cols()).transpose();
        rec.power.row(k) = cmd.u.transpose();
        rec.perturbations.row(k) = observer.perturbations().head(rec.perturbations.cols()).transpose();
        rec.cost(k) = cmd.cost_value;
        if (state.cure_degree.size() > 0)
            rec.min_cure(k) = state.cure_degree.minCoeff();
        rec.iterations.push_back(cmd.hildreth_iterations);
        rec.status.push_back(cmd.status);

        if (!finite(state.temperatures) || !finite(observer.state().x_hat) || !finite(cmd.u) ||
            !std::isfinite(cmd.cost_value))
            throw NumericalError("closed loop (" + std::string(to_string(variant)) +
                                 "): non-finite value at row " + std::to_string(k + 1));
    }
    return rec;
}

IndicatorReport empty_mold_indicators(const ExperimentConfig& config, const RunRecord& record)
{
    return compute_indicators(record.time, record.reference, record.all_sensors(), config.profiles.empty_t_i,
                              empty_mold_profile().end_time());
}

IndicatorReport molding_indicators(const ExperimentConfig& config, const RunRecord& record)
{
    const double end = molding_profile(config.profiles.injection_time, config.profiles.cure_hold).end_time();
    return compute_indicators(record.time, record.reference, record.control, config.profiles.molding_t_i, end);
}

Comparison compare_controllers(const ExperimentConfig& config, const IdentifiedModels& models)
{
    Comparison out;
    const ReferenceProfile empty = empty_mold_profile();
    for (Variant v : {Variant::Standard, Variant::Extended, Variant::Symmetric})
    {
        out.runs.push_back(run_closed_loop(config, models, v, empty, {false, config.seed}));
        out.rows.push_back({to_string(v), empty_mold_indicators(config, out.runs.back())});
    }
    const ReferenceProfile molding = molding_profile(config.profiles.injection_time, config.profiles.cure_hold);
    out.runs.push_back(run_closed_loop(config, models, Variant::Symmetric, molding, {true, config.seed}));
    out.rows.push_back({"molding", molding_indicators(config, out.runs.back())});
    return out;
}

} // namespace moldmpc
