#pragma once

#include "moldmpc/sysid/state_space.hpp"

namespace moldmpc
{

/// Increment-form model: the state is [x_t - x_{t-1}; y_t] and the input is
/// the power increment, so integral action comes for free.
///   A_e = [[A_m, 0], [C_m A_m, I]],  B_e = [[B_m], [C_m B_m]],  C_e = [0, I]
struct ExtendedSS
{
    Matrix A;
    Matrix B;
    Matrix C;
    int model_states = 0;

    int state_size() const { return static_cast<int>(A.rows()); }
    int outputs() const { return static_cast<int>(C.rows()); }
    int inputs() const { return static_cast<int>(B.cols()); }
};

ExtendedSS build_extended_ss(const AugmentedModel& model);

/// [x_t - x_{t-1}; C_m x_t] from two consecutive observer estimates.
Vector extended_state(const AugmentedModel& model, const Vector& x_hat, const Vector& x_hat_prev);

/// Stacked predictions over the horizon: Y = F X_e + G dU, with
/// F row block i = C_e A_e^(i+1) and G block (i, j) = C_e A_e^(i-j) B_e.
struct PredictionMatrices
{
    Matrix F;
    Matrix G;
    int horizon = 0;
    int outputs = 0;
    int inputs = 0;
};

PredictionMatrices build_prediction(const ExtendedSS& ss, int horizon);

/// J = (ref - y)^T diag(q) (ref - y) + r |du|^2. `q` holds one weight per
/// stacked output row.
double tracking_cost(const Vector& ref, const Vector& y, const Vector& du, const Vector& q, double r);

/// The same cost as 1/2 dU^T H dU + f^T dU + const (halved):
/// H = G^T Q G + r I and f = -G^T Q (ref - F X).
Matrix cost_hessian(const PredictionMatrices& pred, const Vector& q, double r);
Vector cost_linear_term(const PredictionMatrices& pred, const Vector& ref, const Vector& x_e, const Vector& q);

/// Minimizer without constraints: (G^T Q G + r I)^-1 G^T Q (ref - F X).
Vector unconstrained_solution(const PredictionMatrices& pred, const Vector& ref, const Vector& x_e, const Vector& q,
                              double r);

} // namespace moldmpc
