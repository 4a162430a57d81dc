#pragma once

#include "moldmpc/sysid/state_space.hpp"

#include <vector>

namespace moldmpc
{

/// Noise model of the perturbation observer.
struct KalmanConfig
{
    Matrix process_noise;      // Cq, n_m x n_m
    Matrix measurement_noise;  // Cs, measured x measured
    Matrix initial_covariance; // P_k0, n_m x n_m

    void validate(int state_size, int measured) const;
};

/// Block-diagonal Cq with `state_noise` on the ROM states and
/// `perturbation_noise` on the perturbation states, Cs = sensor_std^2 I and
/// P_k0 = initial_variance I.
KalmanConfig make_kalman_config(const AugmentedModel& model, int measured, double state_noise = 1e-6,
                                double perturbation_noise = 1e-2, double sensor_std = 0.1,
                                double initial_variance = 1.0);

struct ObserverState
{
    Vector x_hat;       // augmented state estimate (deviation units)
    Matrix P;           // estimate covariance
    Matrix gain;        // last Kalman gain K_t
    Vector innovation;  // last z - C x_tilde on the measured rows
};

/// x_hat at the baseline (zero deviation) with P = P_k0.
ObserverState initial_observer_state(const AugmentedModel& model, const KalmanConfig& config);

/// Time update: x~ = A_m x^ + B_m u, P~ = A_m P A_m^T + Cq. `u` is in deviation units.
ObserverState predict(const ObserverState& obs, const AugmentedModel& model, const KalmanConfig& config,
                      const Vector& u);

/// Measurement update on the rows of C_m listed in `measured_rows` (all rows
/// when empty). `z` holds those rows in deviation units.
///   K = P~ C^T (C P~ C^T + Cs)^-1,  x^ = x~ + K (z - C x~),  P = (I - K C) P~
/// P is symmetrized afterwards. Throws NumericalError when the innovation
/// covariance is not positive definite.
ObserverState update(const ObserverState& obs, const AugmentedModel& model, const KalmanConfig& config,
                     const Vector& z, const std::vector<int>& measured_rows = {});

/// Joseph-form covariance for the same gain, used to cross-check update().
Matrix joseph_covariance(const Matrix& predicted_P, const Matrix& gain, const Matrix& measured_C,
                         const Matrix& measurement_noise);

/// Convenience wrapper working in absolute units (C and W): owns the model,
/// the noise model and the running estimate, and strictly alternates
/// predict/update.
class PerturbationObserver
{
public:
    PerturbationObserver(AugmentedModel model, KalmanConfig config, std::vector<int> measured_rows = {});

    const AugmentedModel& model() const { return model_; }
    const KalmanConfig& config() const { return config_; }
    const ObserverState& state() const { return state_; }
    const std::vector<int>& measured_rows() const { return measured_rows_; }

    /// Predict with the input applied over the last period, then update with
    /// the new measurement `z` (C) on the measured rows.
    void step(const Vector& applied_u, const Vector& z);

    /// Prior output prediction for the next sample given the input that will
    /// be applied (C, all outputs).
    Vector predict_next_output(const Vector& u) const;

    /// C_m x^ in C, all outputs.
    Vector outputs() const;
    /// Perturbation block of x^.
    Vector perturbations() const;

private:
    AugmentedModel model_;
    KalmanConfig config_;
    std::vector<int> measured_rows_;
    ObserverState state_;
};

} // namespace moldmpc
