#pragma once

#include "moldmpc/common.hpp"
#include "moldmpc/plant/io_dataset.hpp"
#include "moldmpc/plant/plant_config.hpp"

#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>

#include <functional>
#include <memory>
#include <random>
#include <vector>

namespace moldmpc
{

struct PlantState
{
    Vector temperatures; // K, one per cell
    Vector cure_degree;  // one per resin column
    double time = 0.0;   // s
};

struct SensorReadings
{
    Vector control;   // K
    Vector auxiliary; // K
};

/// Energy bookkeeping of one implicit step, all in J.
struct EnergyBalance
{
    double internal_change = 0.0;
    double heater_input = 0.0;
    double curing_release = 0.0;
    double exterior_loss = 0.0;

    double residual() const { return internal_change - (heater_input + curing_release - exterior_loss); }
};

struct ExteriorFace
{
    int cell = 0;
    double area = 0.0;
    enum class Family { Upper, Lower, Lateral } family = Family::Lateral;
};

struct ResinSite
{
    std::vector<int> cells; // thermal cells sharing the released heat equally
    double volume = 0.0;    // m^3 of resin
};

/// Power as a function of time, one value per heater.
using PowerSchedule = std::function<Vector(double time)>;

/// Finite-volume thermal model of the mold, integrated with backward Euler.
/// Exterior coefficients are evaluated at the start of each step, which keeps
/// the per-step linear system symmetric positive definite and the energy
/// balance exact up to solver roundoff.
class ThermalPlant
{
public:
    explicit ThermalPlant(PlantConfig config);

    const PlantConfig& config() const { return config_; }
    int cell_count() const { return static_cast<int>(capacity_.size()); }
    int heater_count() const { return static_cast<int>(config_.heaters.size()); }
    int resin_site_count() const { return static_cast<int>(resin_sites_.size()); }
    int cell_index(const CellCoord& c) const;
    CellCoord cell_coord(int index) const;

    const Vector& capacity() const { return capacity_; }
    Vector max_powers() const;
    const std::vector<int>& control_sensor_cells() const { return control_cells_; }
    const std::vector<int>& auxiliary_sensor_cells() const { return auxiliary_cells_; }
    const std::vector<ExteriorFace>& exterior_faces() const { return faces_; }
    const std::vector<ResinSite>& resin_sites() const { return resin_sites_; }

    PlantState ambient_state() const;
    PlantState uniform_state(double temperature_k) const;

    /// Internal energy relative to 0 K, sum of C_i T_i in J.
    double internal_energy(const PlantState& state) const;

    /// One backward-Euler step of length dt with powers held constant.
    PlantState step(const PlantState& state, const Vector& powers, double dt,
                    EnergyBalance* balance = nullptr);

    /// Integrates over `duration` with sub-steps no longer than max_substep.
    PlantState advance(const PlantState& state, const Vector& powers, double duration);

    /// Noise-free cell temperatures at the configured sensor locations.
    SensorReadings read_sensors(const PlantState& state) const;
    /// Readings with additive zero-mean Gaussian noise of std `noise_std`.
    SensorReadings read_sensors(const PlantState& state, double noise_std, std::mt19937_64& rng) const;

    /// Runs the plant open loop, sampling every `sample_period` seconds, and
    /// returns powers and sensor temperatures (C). Row t holds the outputs at
    /// time t * sample_period and the powers applied over the following period.
    IoDataset run_open_loop(const PowerSchedule& schedule, double sample_period, double duration,
                            bool include_auxiliary, const PlantState* initial = nullptr);

    /// Exterior conductance to ambient of one face, W/K, at cell temperature T.
    double face_conductance(const ExteriorFace& face, double temperature_k) const;

private:
    void validate_powers(const Vector& powers) const;
    Vector exterior_conductances(const Vector& temperatures) const;

    PlantConfig config_;
    Vector capacity_;
    Eigen::SparseMatrix<double> conduction_; // Laplacian, zero row sums
    Eigen::SparseMatrix<double> heater_map_; // cells x heaters, column sums 1
    std::vector<ExteriorFace> faces_;
    std::vector<int> control_cells_;
    std::vector<int> auxiliary_cells_;
    std::vector<ResinSite> resin_sites_;

    // Factorization cache: reused when the system matrix is unchanged
    // (constant exterior coefficients and the same dt).
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver_;
    bool pattern_analyzed_ = false;
    Vector cached_diagonal_;
    double cached_dt_ = -1.0;
};

} // namespace moldmpc
