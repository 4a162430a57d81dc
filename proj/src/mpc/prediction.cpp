#include "moldmpc/mpc/prediction.hpp"

#include <Eigen/Cholesky>

namespace moldmpc
{

ExtendedSS build_extended_ss(const AugmentedModel& model)
{
    const int n = model.state_size();
    const int m = model.outputs();
    const int nu = model.inputs();
    ExtendedSS e;
    e.model_states = n;
    e.A = Matrix::Zero(n + m, n + m);
    e.A.topLeftCorner(n, n) = model.A;
    e.A.bottomLeftCorner(m, n) = model.C * model.A;
    e.A.bottomRightCorner(m, m).setIdentity();
    e.B = Matrix::Zero(n + m, nu);
    e.B.topRows(n) = model.B;
    e.B.bottomRows(m) = model.C * model.B;
    e.C = Matrix::Zero(m, n + m);
    e.C.rightCols(m).setIdentity();
    return e;
}

Vector extended_state(const AugmentedModel& model, const Vector& x_hat, const Vector& x_hat_prev)
{
    if (x_hat.size() != model.state_size() || x_hat_prev.size() != model.state_size())
        throw InputError("extended_state: estimate size mismatch");
    Vector x(model.state_size() + model.outputs());
    x.head(model.state_size()) = x_hat - x_hat_prev;
    x.tail(model.outputs()) = model.C * x_hat;
    return x;
}

PredictionMatrices build_prediction(const ExtendedSS& ss, int horizon)
{
    if (horizon < 1)
        throw ConfigError("prediction: horizon must be at least 1");
    const int m = ss.outputs(), nu = ss.inputs(), ne = ss.state_size();
    PredictionMatrices p;
    p.horizon = horizon;
    p.outputs = m;
    p.inputs = nu;
    p.F.resize(m * horizon, ne);
    p.G = Matrix::Zero(m * horizon, nu * horizon);

    // impulse[i] = C_e A_e^i B_e
    std::vector<Matrix> impulse;
    Matrix ca = ss.C;
    for (int i = 0; i < horizon; ++i)
    {
        impulse.push_back(ca * ss.B);
        ca = ca * ss.A;
        p.F.middleRows(i * m, m) = ca;
    }
    for (int i = 0; i < horizon; ++i)
        for (int j = 0; j <= i; ++j)
            p.G.block(i * m, j * nu, m, nu) = impulse[static_cast<size_t>(i - j)];
    return p;
}

double tracking_cost(const Vector& ref, const Vector& y, const Vector& du, const Vector& q, double r)
{
    if (ref.size() != y.size() || q.size() != y.size())
        throw InputError("tracking_cost: dimension mismatch");
    const Vector e = ref - y;
    return e.dot(q.cwiseProduct(e)) + r * du.squaredNorm();
}

Matrix cost_hessian(const PredictionMatrices& pred, const Vector& q, double r)
{
    if (q.size() != pred.G.rows())
        throw InputError("cost_hessian: weight size mismatch");
    Matrix h = pred.G.transpose() * q.asDiagonal() * pred.G;
    h.diagonal().array() += r;
    return h;
}

Vector cost_linear_term(const PredictionMatrices& pred, const Vector& ref, const Vector& x_e, const Vector& q)
{
    if (ref.size() != pred.F.rows() || x_e.size() != pred.F.cols() || q.size() != pred.F.rows())
        throw InputError("cost_linear_term: dimension mismatch");
    return -(pred.G.transpose() * q.cwiseProduct(ref - pred.F * x_e));
}

Vector unconstrained_solution(const PredictionMatrices& pred, const Vector& ref, const Vector& x_e, const Vector& q,
                              double r)
{
    const Eigen::LLT<Matrix> llt(cost_hessian(pred, q, r));
    if (llt.info() != Eigen::Success)
        throw NumericalError("unconstrained_solution: Hessian is not positive definite");
    return -llt.solve(cost_linear_term(pred, ref, x_e, q));
}

} // namespace moldmpc
