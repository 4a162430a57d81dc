#include "moldmpc/observer/kalman.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <numeric>

namespace moldmpc
{

namespace
{

bool is_symmetric_psd(const Matrix& m, double tol = 1e-12)
{
    if (m.rows() != m.cols())
        return false;
    if ((m - m.transpose()).cwiseAbs().maxCoeff() > tol * (1.0 + m.cwiseAbs().maxCoeff()))
        return false;
    if (m.size() == 0)
        return true;
    const Eigen::SelfAdjointEigenSolver<Matrix> eig(m, Eigen::EigenvaluesOnly);
    return eig.eigenvalues().minCoeff() >= -tol * (1.0 + m.cwiseAbs().maxCoeff());
}

std::vector<int> all_rows(int m)
{
    std::vector<int> rows(static_cast<size_t>(m));
    std::iota(rows.begin(), rows.end(), 0);
    return rows;
}

Matrix select_rows(const Matrix& c, const std::vector<int>& rows)
{
    Matrix out(static_cast<Eigen::Index>(rows.size()), c.cols());
    for (size_t i = 0; i < rows.size(); ++i)
        out.row(static_cast<Eigen::Index>(i)) = c.row(rows[i]);
    return out;
}

} // namespace

void KalmanConfig::validate(int state_size, int measured) const
{
    if (process_noise.rows() != state_size || initial_covariance.rows() != state_size)
        throw ConfigError("kalman: Cq and P_k0 must match the augmented state size");
    if (measurement_noise.rows() != measured)
        throw ConfigError("kalman: Cs must match the measured output count");
    if (!is_symmetric_psd(process_noise) || !is_symmetric_psd(initial_covariance))
        throw ConfigError("kalman: Cq and P_k0 must be symmetric positive semidefinite");
    if (Eigen::LLT<Matrix>(measurement_noise).info() != Eigen::Success ||
        !measurement_noise.isApprox(measurement_noise.transpose()))
        throw ConfigError("kalman: Cs must be symmetric positive definite");
}

KalmanConfig make_kalman_config(const AugmentedModel& model, int measured, double state_noise,
                                double perturbation_noise, double sensor_std, double initial_variance)
{
    const int n = model.state_size();
    KalmanConfig cfg;
    cfg.process_noise = Matrix::Zero(n, n);
    cfg.process_noise.diagonal().head(model.base_states).setConstant(state_noise);
    cfg.process_noise.diagonal().tail(model.p).setConstant(perturbation_noise);
    cfg.measurement_noise = Matrix::Identity(measured, measured) * sensor_std * sensor_std;
    cfg.initial_covariance = Matrix::Identity(n, n) * initial_variance;
    return cfg;
}

ObserverState initial_observer_state(const AugmentedModel& model, const KalmanConfig& config)
{
    ObserverState s;
    s.x_hat = Vector::Zero(model.state_size());
    s.P = config.initial_covariance;
    return s;
}

ObserverState predict(const ObserverState& obs, const AugmentedModel& model, const KalmanConfig& config,
                      const Vector& u)
{
    if (obs.x_hat.size() != model.state_size() || u.size() != model.inputs())
        throw InputError("observer predict: dimension mismatch");
    ObserverState next = obs;
    next.x_hat = model.A * obs.x_hat + model.B * u;
    next.P = model.A * obs.P * model.A.transpose() + config.process_noise;
    return next;
}

ObserverState update(const ObserverState& obs, const AugmentedModel& model, const KalmanConfig& config,
                     const Vector& z, const std::vector<int>& measured_rows)
{
    const std::vector<int> rows = measured_rows.empty() ? all_rows(model.outputs()) : measured_rows;
    if (z.size() != static_cast<Eigen::Index>(rows.size()))
        throw InputError("observer update: measurement size mismatch");
    const Matrix c = select_rows(model.C, rows);

    const Matrix pct = obs.P * c.transpose();
    const Matrix innovation_cov = c * pct + config.measurement_noise;
    const Eigen::LLT<Matrix> llt(innovation_cov);
    if (llt.info() != Eigen::Success)
        throw NumericalError("observer update: innovation covariance is not positive definite");

    ObserverState next;
    next.gain = llt.solve(pct.transpose()).transpose();
    next.innovation = z - c * obs.x_hat;
    next.x_hat = obs.x_hat + next.gain * next.innovation;
    const Eigen::Index n = obs.P.rows();
    next.P = (Matrix::Identity(n, n) - next.gain * c) * obs.P;
    next.P = (0.5 * (next.P + next.P.transpose())).eval();
    return next;
}

Matrix joseph_covariance(const Matrix& predicted_P, const Matrix& gain, const Matrix& measured_C,
                         const Matrix& measurement_noise)
{
    const Eigen::Index n = predicted_P.rows();
    const Matrix ikc = Matrix::Identity(n, n) - gain * measured_C;
    return ikc * predicted_P * ikc.transpose() + gain * measurement_noise * gain.transpose();
}

PerturbationObserver::PerturbationObserver(AugmentedModel model, KalmanConfig config, std::vector<int> measured_rows)
    : model_(std::move(model)), config_(std::move(config)), measured_rows_(std::move(measured_rows))
{
    if (measured_rows_.empty())
        measured_rows_ = all_rows(model_.outputs());
    for (int r : measured_rows_)
        if (r < 0 || r >= model_.outputs())
            throw ConfigError("observer: measured row outside the output range");
    config_.validate(model_.state_size(), static_cast<int>(measured_rows_.size()));
    state_ = initial_observer_state(model_, config_);
}

void PerturbationObserver::step(const Vector& applied_u, const Vector& z)
{
    const Vector du = applied_u - model_.base.baseline.u;
    Vector dz(static_cast<Eigen::Index>(measured_rows_.size()));
    for (size_t i = 0; i < measured_rows_.size(); ++i)
        dz(static_cast<Eigen::Index>(i)) = z(static_cast<Eigen::Index>(i)) - model_.base.baseline.y(measured_rows_[i]);
    state_ = update(predict(state_, model_, config_, du), model_, config_, dz, measured_rows_);
}

Vector PerturbationObserver::predict_next_output(const Vector& u) const
{
    const Vector x = model_.A * state_.x_hat + model_.B * (u - model_.base.baseline.u);
    return model_.C * x + model_.base.baseline.y;
}

Vector PerturbationObserver::outputs() const { return model_.C * state_.x_hat + model_.base.baseline.y; }

Vector PerturbationObserver::perturbations() const { return state_.x_hat.tail(model_.p); }

} // namespace moldmpc
