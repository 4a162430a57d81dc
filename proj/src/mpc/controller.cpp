#include "moldmpc/mpc/controller.hpp"

#include <algorithm>
#include <limits>

namespace moldmpc
{

void MpcConfig::validate(int outputs, int inputs) const
{
    if (horizon < 1)
        throw ConfigError("mpc: horizon must be at least 1");
    if (q < 0.0 || r <= 0.0)
        throw ConfigError("mpc: need q >= 0 and r > 0");
    if (output_weights.size() != 0 && (output_weights.size() != outputs || output_weights.minCoeff() < 0.0))
        throw ConfigError("mpc: output weights must be non-negative, one per output");
    if (virtual_weight && *virtual_weight < 0.0)
        throw ConfigError("mpc: virtual weight must be non-negative");
    if (measured_outputs < 0 || measured_outputs > outputs)
        throw ConfigError("mpc: measured output count out of range");
    if (u_min.size() != inputs || u_max.size() != inputs)
        throw ConfigError("mpc: input bounds must have one entry per heater");
    if ((u_max - u_min).minCoeff() < 0.0)
        throw ConfigError("mpc: u_min must not exceed u_max");
}

Vector MpcConfig::step_weights(int outputs) const
{
    Vector w = output_weights.size() == outputs ? output_weights : Vector::Constant(outputs, q);
    const int measured = measured_outputs == 0 ? outputs : measured_outputs;
    for (int i = measured; i < outputs; ++i)
        w(i) = extended_domain ? virtual_weight.value_or(q) : 0.0;
    return w;
}

MpcController::MpcController(AugmentedModel model, MpcConfig config, Vector initial_u)
    : model_(std::move(model)), config_(std::move(config)),
      symmetry_((config_.validate(model_.outputs(), model_.inputs()), model_.inputs()), config_.symmetry_pairs)
{
    const int np = config_.horizon;
    const int m = model_.outputs();
    prediction_ = build_prediction(build_extended_ss(model_), np);
    expansion_ = symmetry_.horizon_expansion(np);
    row_weights_ = config_.step_weights(m).replicate(np, 1);

    const int k = symmetry_.free_variables();
    lower_.resize(k);
    upper_.resize(k);
    for (int g = 0; g < k; ++g)
    {
        double lo = -std::numeric_limits<double>::infinity(), hi = std::numeric_limits<double>::infinity();
        for (int q : symmetry_.groups()[static_cast<size_t>(g)])
        {
            lo = std::max(lo, config_.u_min(q));
            hi = std::min(hi, config_.u_max(q));
        }
        if (lo > hi)
            throw ConfigError("mpc: paired heaters have disjoint power ranges");
        lower_(g) = lo;
        upper_(g) = hi;
    }

    // cumulative-sum operator over the horizon, for both bounds
    Matrix cumulative = Matrix::Zero(k * np, k * np);
    for (int i = 0; i < np; ++i)
        for (int j = 0; j <= i; ++j)
            cumulative.block(i * k, j * k, k, k).setIdentity();
    constraint_.resize(2 * k * np, k * np);
    constraint_ << cumulative, -cumulative;

    const Matrix h = expansion_.transpose() * cost_hessian(prediction_, row_weights_, config_.r) * expansion_;
    solver_.emplace(h, constraint_, config_.solver);
    reset(initial_u);
}

void MpcController::reset(const Vector& u)
{
    if (u.size() != model_.inputs())
        throw InputError("mpc: input vector size mismatch");
    u_prev_ = u;
}

ControlCommand MpcController::compute_command(const Vector& x_hat, const Vector& x_hat_prev, const Vector& reference)
{
    const int np = config_.horizon;
    const int m = model_.outputs();
    if (reference.size() != m * np)
        throw InputError("mpc: reference must be stacked over the horizon");

    const Vector x_e = extended_state(model_, x_hat, x_hat_prev);
    const Vector ref_dev = reference - model_.base.baseline.y.replicate(np, 1);
    const Vector f = expansion_.transpose() * cost_linear_term(prediction_, ref_dev, x_e, row_weights_);

    const Vector v_prev = symmetry_.reduce(u_prev_ - model_.base.baseline.u);
    const Vector lo_dev = lower_ - symmetry_.reduce(model_.base.baseline.u);
    const Vector hi_dev = upper_ - symmetry_.reduce(model_.base.baseline.u);
    Vector gamma(constraint_.rows());
    gamma << (hi_dev - v_prev).replicate(np, 1), (v_prev - lo_dev).replicate(np, 1);

    const QpResult qp = solver_->solve(f, gamma);

    ControlCommand cmd;
    cmd.status = qp.status;
    cmd.hildreth_iterations = qp.iterations;
    cmd.active_constraints = qp.active_constraints;
    cmd.delta_u_horizon = expansion_ * qp.x;

    const int k = symmetry_.free_variables();
    const Vector v_next = (v_prev + qp.x.head(k)).cwiseMax(lo_dev).cwiseMin(hi_dev);
    cmd.u = symmetry_.expand(v_next) + model_.base.baseline.u;

    const Vector y = prediction_.F * x_e + prediction_.G * cmd.delta_u_horizon;
    cmd.predicted_outputs = y + model_.base.baseline.y.replicate(np, 1);
    cmd.cost_value = tracking_cost(ref_dev, y, cmd.delta_u_horizon, row_weights_, config_.r);
    u_prev_ = cmd.u;
    return cmd;
}

Vector stack_reference(const Vector& per_step, int outputs)
{
    Vector out(per_step.size() * outputs);
    for (Eigen::Index i = 0; i < per_step.size(); ++i)
        out.segment(i * outputs, outputs).setConstant(per_step(i));
    return out;
}

} // namespace moldmpc
