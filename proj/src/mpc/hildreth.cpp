#include "moldmpc/mpc/hildreth.hpp"

#include <algorithm>
#include <cmath>

namespace moldmpc
{

namespace
{

// Multipliers this large mean the dual is unbounded, i.e. no x satisfies M x <= gamma.
constexpr double kDivergence = 1e14;

// A growing multiplier vector that nearly annihilates M^T while gamma^T l < 0
// is a Farkas certificate that M x <= gamma has no solution.
bool farkas_certificate(const Matrix& m, const Vector& gamma, const Vector& lambda)
{
    const double ln = lambda.norm();
    if (ln == 0.0)
        return false;
    const double annihilation = (m.transpose() * lambda).norm() / (m.norm() * ln);
    const double margin = gamma.dot(lambda) / ((1.0 + gamma.norm()) * ln);
    return annihilation < 1e-2 && margin < -1e-3;
}

} // namespace

const char* to_string(QpStatus status)
{
    switch (status)
    {
    case QpStatus::Converged:
        return "converged";
    case QpStatus::MaxIterations:
        return "max_iterations";
    case QpStatus::Infeasible:
        return "infeasible";
    }
    return "unknown";
}

HildrethSolver::HildrethSolver(Matrix H, Matrix M, HildrethOptions options)
    : m_(std::move(M)), options_(options)
{
    if (H.rows() != H.cols() || m_.cols() != H.rows())
        throw InputError("hildreth: H must be square with M having as many columns");
    if (options_.tolerance <= 0.0 || options_.max_iterations < 1)
        throw ConfigError("hildreth: tolerance and iteration cap must be positive");
    const Eigen::LLT<Matrix> llt(H);
    if (llt.info() != Eigen::Success)
        throw NumericalError("hildreth: H is not positive definite");
    h_inv_ = llt.solve(Matrix::Identity(H.rows(), H.cols()));
    h_inv_mt_ = h_inv_ * m_.transpose();
    p_ = m_ * h_inv_mt_;
}

QpResult HildrethSolver::solve(const Vector& f, const Vector& gamma) const
{
    if (f.size() != h_inv_.rows() || gamma.size() != m_.rows())
        throw InputError("hildreth: f or gamma has the wrong size");

    QpResult res;
    const Vector x0 = -h_inv_ * f;
    const Eigen::Index nc = m_.rows();
    res.multipliers = Vector::Zero(nc);
    res.x = x0;
    if (nc == 0 || (m_ * x0 - gamma).maxCoeff() <= 0.0)
        return res;

    const Vector k = gamma - m_ * x0;
    Vector& lambda = res.multipliers;
    Vector p_lambda = Vector::Zero(nc);
    res.status = QpStatus::MaxIterations;
    for (int it = 1; it <= options_.max_iterations; ++it)
    {
        double largest_change = 0.0;
        for (Eigen::Index i = 0; i < nc; ++i)
        {
            const double pii = p_(i, i);
            if (pii <= 0.0)
                continue; // zero row of M
            const double w = -(k(i) + p_lambda(i) - pii * lambda(i)) / pii;
            const double next = std::max(0.0, w);
            const double delta = next - lambda(i);
            if (delta != 0.0)
            {
                p_lambda.noalias() += delta * p_.col(i);
                lambda(i) = next;
                largest_change = std::max(largest_change, std::abs(delta));
            }
        }
        res.iterations = it;
        if (options_.record_dual)
            res.dual_history.push_back(0.5 * lambda.dot(p_lambda) + lambda.dot(k));
        if (!std::isfinite(largest_change) || lambda.maxCoeff() > kDivergence)
        {
            res.status = QpStatus::Infeasible;
            break;
        }
        if (largest_change < options_.tolerance * std::max(1.0, lambda.maxCoeff()))
        {
            res.status = QpStatus::Converged;
            break;
        }
    }
    if (res.status == QpStatus::MaxIterations && farkas_certificate(m_, gamma, lambda))
        res.status = QpStatus::Infeasible;
    res.x = x0 - h_inv_mt_ * lambda;
    res.active_constraints = static_cast<int>((lambda.array() > 0.0).count());
    return res;
}

QpResult hildreth_solve(const QpProblem& problem, const HildrethOptions& options)
{
    return HildrethSolver(problem.H, problem.M, options).solve(problem.f, problem.gamma);
}

} // namespace moldmpc
