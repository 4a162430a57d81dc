#pragma once

#include "moldmpc/common.hpp"

#include <Eigen/Cholesky>

#include <vector>

namespace moldmpc
{

/// min 1/2 x^T H x + f^T x  subject to  M x <= gamma
struct QpProblem
{
    Matrix H;
    Vector f;
    Matrix M;
    Vector gamma;
};

enum class QpStatus
{
    Converged,
    MaxIterations,
    Infeasible,
};

const char* to_string(QpStatus status);

struct HildrethOptions
{
    double tolerance = 1e-8; // on the largest multiplier change over a sweep
    int max_iterations = 500;
    bool record_dual = false;
};

struct QpResult
{
    Vector x;
    Vector multipliers;
    QpStatus status = QpStatus::Converged;
    int iterations = 0; // 0 when the unconstrained optimum is feasible
    int active_constraints = 0;
    // 1/2 l^T P l + l^T K after every sweep, the function the sweeps minimize
    std::vector<double> dual_history;
};

/// Dual coordinate ascent on the multipliers of M x <= gamma. H and M are
/// fixed at construction so H^-1 and M H^-1 M^T are factored once and reused
/// by every solve with a new f and gamma.
class HildrethSolver
{
public:
    HildrethSolver(Matrix H, Matrix M, HildrethOptions options = {});

    QpResult solve(const Vector& f, const Vector& gamma) const;

    int variables() const { return static_cast<int>(h_inv_.rows()); }
    int constraints() const { return static_cast<int>(m_.rows()); }
    const HildrethOptions& options() const { return options_; }

private:
    Matrix m_;
    Matrix h_inv_;
    Matrix h_inv_mt_; // H^-1 M^T
    Matrix p_;        // M H^-1 M^T
    HildrethOptions options_;
};

QpResult hildreth_solve(const QpProblem& problem, const HildrethOptions& options = {});

} // namespace moldmpc
