#include "moldmpc/harness/config_io.hpp"

#include <json.hpp>

#include <fstream>
#include <set>
#include <sstream>

namespace moldmpc
{

using nlohmann::json;

NLOHMANN_JSON_SERIALIZE_ENUM(FitKind, {{FitKind::PowerLaw, "power_law"},
                                       {FitKind::SaturatingExponential, "saturating_exponential"}})

void to_json(json& j, const CellCoord& c) { j = json::array({c.i, c.j, c.k}); }

void from_json(const json& j, CellCoord& c)
{
    if (!j.is_array() || j.size() != 3)
        throw InputError("config: cell coordinates must be [i, j, k]");
    c.i = j[0].get<int>();
    c.j = j[1].get<int>();
    c.k = j[2].get<int>();
}

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(MaterialProps, density, specific_heat, conductivity,
                                                conductivity_min, conductivity_max)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(GridSpec, nx, ny, nz_per_block, blocks, length_x, length_y,
                                                block_thickness)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(ConvectionFit, kind, a, b, c, dT_min, dT_max)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(InsulationPanel, thickness, conductivity)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(CavitySpec, i_begin, i_end, j_begin, j_end, gap_conductance,
                                                thickness)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(HeaterSpec, id, footprint, max_power)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(SensorLayout, control, auxiliary)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(CureKinetics, pre_exponential_1, activation_energy_1,
                                                pre_exponential_2, activation_energy_2, order_m, order_n)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(CuringParameters, kinetics, heat_of_reaction, resin_density)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(CuringModel, enabled, injection_time, resin_columns, parameters)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(ArxOrders, r, s)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(ExcitationSpec, stair_period, bit_period, on_probability, seed)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(IdentificationSettings, orders, excitation, duration, constant_h)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(ObserverSettings, state_noise, perturbation_noise,
                                                measurement_std, initial_variance)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(HildrethOptions, tolerance, max_iterations, record_dual)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(ProfileSettings, empty_t_i, injection_time, cure_hold,
                                                molding_t_i)

namespace
{

// std::optional is not handled by this json version; null stands for "unset".
json optional_to_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::optional<double> optional_from_json(const json& j, const char* key, std::optional<double> fallback)
{
    if (!j.contains(key))
        return fallback;
    const json& v = j.at(key);
    if (v.is_null())
        return std::nullopt;
    return v.get<double>();
}

} // namespace

void to_json(json& j, const ConvectionSpec& c)
{
    j = {{"upper", c.upper},
         {"lower", c.lower},
         {"lateral", c.lateral},
         {"top_bottom_insulation", c.top_bottom_insulation},
         {"lateral_insulation", c.lateral_insulation},
         {"constant_h", optional_to_json(c.constant_h)}};
}

void from_json(const json& j, ConvectionSpec& c)
{
    const ConvectionSpec d;
    c.upper = j.value("upper", d.upper);
    c.lower = j.value("lower", d.lower);
    c.lateral = j.value("lateral", d.lateral);
    c.top_bottom_insulation = j.value("top_bottom_insulation", d.top_bottom_insulation);
    c.lateral_insulation = j.value("lateral_insulation", d.lateral_insulation);
    c.constant_h = optional_from_json(j, "constant_h", d.constant_h);
}

void to_json(json& j, const PlantConfig& p)
{
    j = {{"grid", p.grid},
         {"material", p.material},
         {"convection", p.convection},
         {"cavity", p.cavity},
         {"heaters", p.heaters},
         {"sensors", p.sensors},
         {"curing", p.curing},
         {"ambient", p.ambient},
         {"sensor_noise_std", p.sensor_noise_std},
         {"max_substep", p.max_substep}};
}

void from_json(const json& j, PlantConfig& p)
{
    // Defaults come from the reference mold, not from an empty plant.
    const PlantConfig d = default_experiment_config().plant;
    p.grid = j.value("grid", d.grid);
    p.material = j.value("material", d.material);
    p.convection = j.value("convection", d.convection);
    p.cavity = j.value("cavity", d.cavity);
    p.heaters = j.value("heaters", d.heaters);
    p.sensors = j.value("sensors", d.sensors);
    p.curing = j.value("curing", d.curing);
    p.ambient = j.value("ambient", d.ambient);
    p.sensor_noise_std = j.value("sensor_noise_std", d.sensor_noise_std);
    p.max_substep = j.value("max_substep", d.max_substep);
}

void to_json(json& j, const ControllerSettings& c)
{
    j = {{"horizon", c.horizon},
         {"q", c.q},
         {"r", c.r},
         {"virtual_weight", optional_to_json(c.virtual_weight)},
         {"symmetry_pairs", c.symmetry_pairs},
         {"solver", c.solver}};
}

void from_json(const json& j, ControllerSettings& c)
{
    const ControllerSettings d;
    c.horizon = j.value("horizon", d.horizon);
    c.q = j.value("q", d.q);
    c.r = j.value("r", d.r);
    c.virtual_weight = optional_from_json(j, "virtual_weight", d.virtual_weight);
    c.symmetry_pairs = j.value("symmetry_pairs", d.symmetry_pairs);
    c.solver = j.value("solver", d.solver);
}

std::string experiment_config_to_json(const ExperimentConfig& config)
{
    json doc = {{"plant", config.plant},
                {"identification", config.identification},
                {"observer", config.observer},
                {"controller", config.controller},
                {"profiles", config.profiles},
                {"sample_period", config.sample_period},
                {"seed", config.seed}};
    return doc.dump(2) + "\n";
}

ExperimentConfig experiment_config_from_json(const std::string& text)
{
    ExperimentConfig config = default_experiment_config();
    try
    {
        const json doc = json::parse(text);
        if (!doc.is_object())
            throw InputError("config: top level must be an object");
        static const std::set<std::string> known{"plant",    "identification", "observer",
                                                 "controller", "profiles",     "sample_period", "seed"};
        for (const auto& item : doc.items())
            if (!known.count(item.key()))
                throw InputError("config: unknown key '" + item.key() + "'");
        config.plant = doc.value("plant", config.plant);
        config.identification = doc.value("identification", config.identification);
        config.observer = doc.value("observer", config.observer);
        config.controller = doc.value("controller", config.controller);
        config.profiles = doc.value("profiles", config.profiles);
        config.sample_period = doc.value("sample_period", config.sample_period);
        config.seed = doc.value("seed", config.seed);
    }
    catch (const json::exception& e)
    {
        throw InputError(std::string("config: ") + e.what());
    }
    config.validate();
    return config;
}

void save_experiment_config(const ExperimentConfig& config, const std::filesystem::path& path)
{
    std::ofstream out(path);
    if (!out)
        throw InputError("cannot open " + path.string() + " for writing");
    out << experiment_config_to_json(config);
    if (!out)
        throw InputError("failed writing " + path.string());
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw InputError("cannot open config " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    return experiment_config_from_json(buffer.str());
}

} // namespace moldmpc
