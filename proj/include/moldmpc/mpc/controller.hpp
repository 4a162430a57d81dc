#pragma once

#include "moldmpc/mpc/hildreth.hpp"
#include "moldmpc/mpc/prediction.hpp"
#include "moldmpc/mpc/symmetry.hpp"

#include <optional>

namespace moldmpc
{

struct MpcConfig
{
    int horizon = 6;
    double q = 1.0;
    Vector output_weights; // per output; overrides q when set
    double r = 0.01;
    Vector u_min; // W
    Vector u_max; // W
    SymmetryPairs symmetry_pairs; // zero-based; empty disables symmetric actuation
    // When set, outputs past `measured_outputs` are virtual nodes weighted by
    // virtual_weight (q when unset); otherwise they carry no weight.
    bool extended_domain = false;
    int measured_outputs = 0; // 0 means all outputs are measured
    std::optional<double> virtual_weight;
    HildrethOptions solver;

    void validate(int outputs, int inputs) const;
    /// One weight per output row of a single horizon step.
    Vector step_weights(int outputs) const;
};

struct ControlCommand
{
    Vector u; // W, to apply over the next period
    Vector delta_u_horizon; // full optimized increment sequence, W
    Vector predicted_outputs; // stacked over the horizon, C
    double cost_value = 0.0;
    int hildreth_iterations = 0;
    int active_constraints = 0;
    QpStatus status = QpStatus::Converged;
};

/// Receding-horizon controller in increment form. Between calls it keeps
/// only the last applied input; the horizon matrices and the solver
/// factorization are built once.
class MpcController
{
public:
    MpcController(AugmentedModel model, MpcConfig config, Vector initial_u);

    /// `x_hat` and `x_hat_prev` are consecutive observer estimates (deviation
    /// units); `reference` is stacked over the horizon in C, outputs fastest.
    ControlCommand compute_command(const Vector& x_hat, const Vector& x_hat_prev, const Vector& reference);

    const Vector& last_input() const { return u_prev_; }
    void reset(const Vector& u);

    const AugmentedModel& model() const { return model_; }
    const MpcConfig& config() const { return config_; }
    const PredictionMatrices& prediction() const { return prediction_; }
    const SymmetryMap& symmetry() const { return symmetry_; }
    /// Weight of every stacked output row.
    const Vector& row_weights() const { return row_weights_; }

private:
    AugmentedModel model_;
    MpcConfig config_;
    PredictionMatrices prediction_;
    SymmetryMap symmetry_;
    Matrix expansion_; // horizon-wide
    Vector row_weights_;
    Vector lower_; // per free variable
    Vector upper_;
    Matrix constraint_;
    std::optional<HildrethSolver> solver_;
    Vector u_prev_;
};

/// Repeats a per-step scalar reference over all outputs.
Vector stack_reference(const Vector& per_step, int outputs);

} // namespace moldmpc
