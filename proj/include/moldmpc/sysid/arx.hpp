#pragma once

#include "moldmpc/common.hpp"
#include "moldmpc/plant/io_dataset.hpp"

#include <vector>

namespace moldmpc
{

struct ArxOrders
{
    int r = 2; // output lags y_t .. y_{t-r+1}
    int s = 1; // input lags u_t .. u_{t-s}
};

/// Operating point the regression is taken around. The thermal plant is
/// affine (ambient temperature at zero power), so identification works on
/// deviations from it.
struct ArxBaseline
{
    Vector y; // C, one per output
    Vector u; // W, one per input
};

/// Multivariable ARX model
///
///   dy_{t+1} = sum_{i<r} a_i dy_{t-i} + sum_{i<=s} b_i du_{t-i}
///
/// with dy = y - baseline.y and du = u - baseline.u.
struct ArxModel
{
    int r = 1;
    int s = 0;
    int m = 0;  // outputs
    int nu = 0; // inputs
    double sample_period = 200.0;
    std::vector<Matrix> a; // r blocks, m x m
    std::vector<Matrix> b; // s + 1 blocks, m x nu
    ArxBaseline baseline;

    // One-step residual statistics on the fitting data (C).
    Vector residual_rms;
    double residual_max = 0.0;

    void validate() const;

    /// One-step prediction of y_{t+1} in absolute units from the most recent
    /// outputs (row 0 = y_t) and inputs (row 0 = u_t).
    Vector predict(const Matrix& recent_y, const Matrix& recent_u) const;

    /// Spectral radius of the autoregressive companion matrix.
    double spectral_radius() const;
};

/// Ordinary least squares fit of the ARX coefficients through a column-pivoted
/// QR of the regressor matrix. Throws IdentificationError when the regressors
/// are rank deficient; the message names the offending channels.
ArxModel fit_arx(const IoDataset& data, const ArxOrders& orders, const ArxBaseline& baseline);

/// Same, with a zero baseline.
ArxModel fit_arx(const IoDataset& data, const ArxOrders& orders);

/// Minimum number of rows fit_arx accepts for the given shape.
Eigen::Index minimum_rows(const ArxOrders& orders, int outputs, int inputs);

/// Free-run simulation of the model over `inputs` (rows = time) starting from
/// `initial_y` (rows = y_{t0}, y_{t0-1}, ...) and `initial_u`
/// (rows = u_{t0-1}, u_{t0-2}, ...). Returns outputs for rows t0 .. t0+T-1.
Matrix simulate_arx(const ArxModel& model, const Matrix& initial_y, const Matrix& initial_u, const Matrix& inputs);

/// Sum of squared one-step residuals on a dataset (absolute units).
double one_step_sse(const ArxModel& model, const IoDataset& data);

} // namespace moldmpc
