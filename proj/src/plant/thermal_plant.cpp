#include "moldmpc/plant/thermal_plant.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <tuple>

namespace moldmpc
{

namespace
{

bool inside(const GridSpec& g, const CellCoord& c)
{
    return c.i >= 0 && c.i < g.nx && c.j >= 0 && c.j < g.ny && c.k >= 0 && c.k < g.nz();
}

std::string describe(const CellCoord& c)
{
    std::ostringstream s;
    s << '(' << c.i << ',' << c.j << ',' << c.k << ')';
    return s.str();
}

void validate_config(const PlantConfig& cfg)
{
    const GridSpec& g = cfg.grid;
    if (g.nx < 1 || g.ny < 1 || g.nz_per_block < 1 || g.blocks < 1)
        throw ConfigError("grid: every axis needs at least one cell");
    if (!(g.length_x > 0.0 && g.length_y > 0.0 && g.block_thickness > 0.0))
        throw ConfigError("grid: dimensions must be positive");
    cfg.material.validate();
    for (const auto* fit : {&cfg.convection.upper, &cfg.convection.lower, &cfg.convection.lateral})
        fit->validate();
    if (cfg.convection.constant_h && *cfg.convection.constant_h < 0.0)
        throw ConfigError("convection: constant h must be non-negative");
    for (const auto* panel : {&cfg.convection.top_bottom_insulation, &cfg.convection.lateral_insulation})
        if (panel->thickness < 0.0 || (panel->thickness > 0.0 && !(panel->conductivity > 0.0)))
            throw ConfigError("insulation: invalid thickness or conductivity");
    if (cfg.heaters.empty())
        throw ConfigError("at least one heater is required");
    if (!(cfg.ambient > 0.0))
        throw ConfigError("ambient temperature must be positive (K)");
    if (!(cfg.max_substep > 0.0))
        throw ConfigError("max_substep must be positive");

    std::set<std::tuple<int, int, int>> used;
    for (const auto& h : cfg.heaters)
    {
        const std::string name = "heater U" + std::to_string(h.id);
        if (h.footprint.empty())
            throw ConfigError(name + ": empty footprint");
        if (!(h.max_power > 0.0))
            throw ConfigError(name + ": max power must be positive");
        for (const auto& c : h.footprint)
        {
            if (!inside(g, c))
                throw ConfigError(name + ": cell " + describe(c) + " outside the grid");
            if (!used.insert({c.i, c.j, c.k}).second)
                throw ConfigError(name + ": cell " + describe(c) + " overlaps another heater");
        }
    }

    std::set<std::tuple<int, int, int>> sensors;
    for (const auto* group : {&cfg.sensors.control, &cfg.sensors.auxiliary})
        for (const auto& c : *group)
        {
            if (!inside(g, c))
                throw ConfigError("sensor at " + describe(c) + " outside the grid");
            if (!sensors.insert({c.i, c.j, c.k}).second)
                throw ConfigError("sensor at " + describe(c) + " duplicated");
        }

    if (cfg.curing.enabled)
    {
        cfg.curing.parameters.validate();
        for (const auto& c : cfg.curing.resin_columns)
            if (c.i < 0 || c.i >= g.nx || c.j < 0 || c.j >= g.ny)
                throw ConfigError("resin column " + describe(c) + " outside the grid");
        if (!(cfg.cavity.thickness > 0.0))
            throw ConfigError("curing needs a positive cavity thickness");
    }
}

} // namespace

ThermalPlant::ThermalPlant(PlantConfig config) : config_(std::move(config))
{
    validate_config(config_);
    const GridSpec& g = config_.grid;
    const MaterialProps& mat = config_.material;
    const int n = g.cell_count();
    const double dx = g.dx(), dy = g.dy(), dz = g.dz();
    const double volume = dx * dy * dz;

    capacity_ = Vector::Constant(n, mat.density * mat.specific_heat * volume);

    std::vector<Eigen::Triplet<double>> triplets;
    Vector diagonal = Vector::Zero(n);
    const auto link = [&](int a, int b, double conductance) {
        triplets.emplace_back(a, b, -conductance);
        triplets.emplace_back(b, a, -conductance);
        diagonal(a) += conductance;
        diagonal(b) += conductance;
    };

    const double kx = mat.conductivity * dy * dz / dx;
    const double ky = mat.conductivity * dx * dz / dy;
    const double kz = mat.conductivity * dx * dy / dz;
    const CavitySpec& cav = config_.cavity;
    const double cavity_link = cav.gap_conductance > 0.0
                                   ? dx * dy / (dz / mat.conductivity + 1.0 / cav.gap_conductance)
                                   : 0.0;
    for (int k = 0; k < g.nz(); ++k)
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i)
            {
                const int c = cell_index({i, j, k});
                if (i + 1 < g.nx)
                    link(c, cell_index({i + 1, j, k}), kx);
                if (j + 1 < g.ny)
                    link(c, cell_index({i, j + 1, k}), ky);
                if (k + 1 < g.nz())
                {
                    const bool interface = (k + 1) % g.nz_per_block == 0;
                    const bool in_cavity =
                        i >= cav.i_begin && i < cav.i_end && j >= cav.j_begin && j < cav.j_end;
                    const double conductance = interface && in_cavity ? cavity_link : kz;
                    if (conductance > 0.0)
                        link(c, cell_index({i, j, k + 1}), conductance);
                }
            }
    for (int c = 0; c < n; ++c)
        triplets.emplace_back(c, c, diagonal(c));
    conduction_.resize(n, n);
    conduction_.setFromTriplets(triplets.begin(), triplets.end());

    using Family = ExteriorFace::Family;
    for (int k = 0; k < g.nz(); ++k)
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i)
            {
                const int c = cell_index({i, j, k});
                if (i == 0)
                    faces_.push_back({c, dy * dz, Family::Lateral});
                if (i == g.nx - 1)
                    faces_.push_back({c, dy * dz, Family::Lateral});
                if (j == 0)
                    faces_.push_back({c, dx * dz, Family::Lateral});
                if (j == g.ny - 1)
                    faces_.push_back({c, dx * dz, Family::Lateral});
                if (k == 0)
                    faces_.push_back({c, dx * dy, Family::Lower});
                if (k == g.nz() - 1)
                    faces_.push_back({c, dx * dy, Family::Upper});
            }

    std::vector<Eigen::Triplet<double>> heater_entries;
    for (size_t h = 0; h < config_.heaters.size(); ++h)
    {
        const auto& fp = config_.heaters[h].footprint;
        for (const auto& cell : fp)
            heater_entries.emplace_back(cell_index(cell), static_cast<int>(h), 1.0 / fp.size());
    }
    heater_map_.resize(n, static_cast<int>(config_.heaters.size()));
    heater_map_.setFromTriplets(heater_entries.begin(), heater_entries.end());

    for (const auto& s : config_.sensors.control)
        control_cells_.push_back(cell_index(s));
    for (const auto& s : config_.sensors.auxiliary)
        auxiliary_cells_.push_back(cell_index(s));

    if (config_.curing.enabled)
    {
        for (const auto& col : config_.curing.resin_columns)
        {
            ResinSite site;
            site.volume = dx * dy * cav.thickness;
            if (g.blocks >= 2)
                site.cells = {cell_index({col.i, col.j, g.nz_per_block - 1}),
                              cell_index({col.i, col.j, g.nz_per_block})};
            else
                site.cells = {cell_index({col.i, col.j, g.nz() - 1})};
            resin_sites_.push_back(std::move(site));
        }
    }
}

int ThermalPlant::cell_index(const CellCoord& c) const
{
    const GridSpec& g = config_.grid;
    return c.i + g.nx * (c.j + g.ny * c.k);
}

CellCoord ThermalPlant::cell_coord(int index) const
{
    const GridSpec& g = config_.grid;
    return {index % g.nx, (index / g.nx) % g.ny, index / (g.nx * g.ny)};
}

Vector ThermalPlant::max_powers() const
{
    Vector p(heater_count());
    for (int h = 0; h < heater_count(); ++h)
        p(h) = config_.heaters[h].max_power;
    return p;
}

PlantState ThermalPlant::ambient_state() const { return uniform_state(config_.ambient); }

PlantState ThermalPlant::uniform_state(double temperature_k) const
{
    PlantState s;
    s.temperatures = Vector::Constant(cell_count(), temperature_k);
    s.cure_degree = Vector::Zero(resin_site_count());
    s.time = 0.0;
    return s;
}

double ThermalPlant::internal_energy(const PlantState& state) const
{
    return capacity_.dot(state.temperatures);
}

double ThermalPlant::face_conductance(const ExteriorFace& face, double temperature_k) const
{
    const ConvectionSpec& conv = config_.convection;
    double h = 0.0;
    const InsulationPanel* panel = &conv.lateral_insulation;
    switch (face.family)
    {
    case ExteriorFace::Family::Upper:
        panel = &conv.top_bottom_insulation;
        h = conv.constant_h ? *conv.constant_h : convection_h(conv.upper, temperature_k - config_.ambient);
        break;
    case ExteriorFace::Family::Lower:
        panel = &conv.top_bottom_insulation;
        h = conv.constant_h ? *conv.constant_h : convection_h(conv.lower, temperature_k - config_.ambient);
        break;
    case ExteriorFace::Family::Lateral:
        h = conv.constant_h ? *conv.constant_h : convection_h(conv.lateral, temperature_k - config_.ambient);
        break;
    }
    if (h <= 0.0)
        return 0.0;
    const double insulation = panel->thickness > 0.0 ? panel->thickness / panel->conductivity : 0.0;
    return face.area / (insulation + 1.0 / h);
}

Vector ThermalPlant::exterior_conductances(const Vector& temperatures) const
{
    Vector g = Vector::Zero(cell_count());
    for (const auto& face : faces_)
        g(face.cell) += face_conductance(face, temperatures(face.cell));
    return g;
}

void ThermalPlant::validate_powers(const Vector& powers) const
{
    if (powers.size() != heater_count())
        throw InputError("plant step: expected " + std::to_string(heater_count()) + " heater powers");
    for (int h = 0; h < heater_count(); ++h)
        if (!(powers(h) >= 0.0 && powers(h) <= config_.heaters[h].max_power))
            throw InputError("plant step: power of heater U" + std::to_string(config_.heaters[h].id) +
                             " outside [0, max_power]");
}

PlantState ThermalPlant::step(const PlantState& state, const Vector& powers, double dt, EnergyBalance* balance)
{
    validate_powers(powers);
    if (!(dt > 0.0))
        throw InputError("plant step: dt must be positive");
    if (state.temperatures.size() != cell_count())
        throw InputError("plant step: state size does not match the grid");

    const Vector& t0 = state.temperatures;
    const Vector g_ext = exterior_conductances(t0);
    const Vector heat_in = heater_map_ * powers;

    PlantState next;
    next.time = state.time + dt;
    next.cure_degree = state.cure_degree;

    Vector cure_heat = Vector::Zero(cell_count()); // J released over the step
    double released = 0.0;
    const CuringModel& cure = config_.curing;
    if (cure.enabled && next.time > cure.injection_time)
    {
        const double active = std::min(dt, next.time - cure.injection_time);
        const auto& params = cure.parameters;
        for (int s = 0; s < resin_site_count(); ++s)
        {
            const ResinSite& site = resin_sites_[s];
            double temperature = 0.0;
            for (int c : site.cells)
                temperature += t0(c);
            temperature /= static_cast<double>(site.cells.size());
            const double alpha0 = state.cure_degree(s);
            const double alpha1 = integrate_cure(params, alpha0, temperature, active);
            next.cure_degree(s) = alpha1;
            const double q = (alpha1 - alpha0) * params.resin_density * site.volume * params.heat_of_reaction;
            released += q;
            for (int c : site.cells)
                cure_heat(c) += q / static_cast<double>(site.cells.size());
        }
    }

    const Vector diag = capacity_ / dt + g_ext;
    if (!pattern_analyzed_ || dt != cached_dt_ || diag != cached_diagonal_)
    {
        Eigen::SparseMatrix<double> system = conduction_;
        for (int c = 0; c < cell_count(); ++c)
            system.coeffRef(c, c) += diag(c);
        if (!pattern_analyzed_)
        {
            solver_.analyzePattern(system);
            pattern_analyzed_ = true;
        }
        solver_.factorize(system);
        if (solver_.info() != Eigen::Success)
            throw NumericalError("plant step: factorization failed");
        cached_dt_ = dt;
        cached_diagonal_ = diag;
    }

    const Vector rhs = capacity_.cwiseProduct(t0) / dt + heat_in + cure_heat / dt +
                       g_ext * config_.ambient;
    next.temperatures = solver_.solve(rhs);
    if (!next.temperatures.allFinite())
        throw NumericalError("plant step: non-finite temperature");

    if (balance)
    {
        balance->internal_change = capacity_.dot(next.temperatures - t0);
        balance->heater_input = powers.sum() * dt;
        balance->curing_release = released;
        balance->exterior_loss = dt * g_ext.dot(next.temperatures - Vector::Constant(cell_count(), config_.ambient));
    }
    return next;
}

PlantState ThermalPlant::advance(const PlantState& state, const Vector& powers, double duration)
{
    if (!(duration > 0.0))
        throw InputError("plant advance: duration must be positive");
    const int steps = std::max(1, static_cast<int>(std::ceil(duration / config_.max_substep - 1e-9)));
    const double dt = duration / steps;
    PlantState s = state;
    const double end = state.time + duration;
    for (int i = 0; i < steps; ++i)
        s = step(s, powers, dt);
    s.time = end;
    return s;
}

SensorReadings ThermalPlant::read_sensors(const PlantState& state) const
{
    SensorReadings r;
    r.control.resize(static_cast<Eigen::Index>(control_cells_.size()));
    r.auxiliary.resize(static_cast<Eigen::Index>(auxiliary_cells_.size()));
    for (size_t i = 0; i < control_cells_.size(); ++i)
        r.control(i) = state.temperatures(control_cells_[i]);
    for (size_t i = 0; i < auxiliary_cells_.size(); ++i)
        r.auxiliary(i) = state.temperatures(auxiliary_cells_[i]);
    return r;
}

SensorReadings ThermalPlant::read_sensors(const PlantState& state, double noise_std, std::mt19937_64& rng) const
{
    SensorReadings r = read_sensors(state);
    if (noise_std > 0.0)
    {
        std::normal_distribution<double> noise(0.0, noise_std);
        for (Eigen::Index i = 0; i < r.control.size(); ++i)
            r.control(i) += noise(rng);
        for (Eigen::Index i = 0; i < r.auxiliary.size(); ++i)
            r.auxiliary(i) += noise(rng);
    }
    return r;
}

IoDataset ThermalPlant::run_open_loop(const PowerSchedule& schedule, double sample_period, double duration,
                                      bool include_auxiliary, const PlantState* initial)
{
    if (!(sample_period > 0.0) || !(duration >= sample_period))
        throw InputError("open loop: need duration >= sample_period > 0");
    const auto rows = static_cast<Eigen::Index>(std::floor(duration / sample_period + 1e-9));
    const auto m_control = static_cast<Eigen::Index>(control_cells_.size());
    const auto m = m_control + (include_auxiliary ? static_cast<Eigen::Index>(auxiliary_cells_.size()) : 0);

    IoDataset data;
    data.sample_period = sample_period;
    data.control_outputs = static_cast<int>(m_control);
    data.time.resize(rows);
    data.U.resize(rows, heater_count());
    data.Y.resize(rows, m);

    PlantState state = initial ? *initial : ambient_state();
    const double t0 = state.time;
    for (Eigen::Index t = 0; t < rows; ++t)
    {
        const double time = t0 + static_cast<double>(t) * sample_period;
        const Vector powers = schedule(time);
        if (powers.size() != heater_count())
            throw InputError("open loop: schedule returned the wrong number of powers");
        const SensorReadings r = read_sensors(state);
        data.time(t) = time;
        data.U.row(t) = powers.transpose();
        for (Eigen::Index c = 0; c < m_control; ++c)
            data.Y(t, c) = to_celsius(r.control(c));
        for (Eigen::Index c = m_control; c < m; ++c)
            data.Y(t, c) = to_celsius(r.auxiliary(c - m_control));
        state = advance(state, powers, sample_period);
    }
    return data;
}

} // namespace moldmpc
