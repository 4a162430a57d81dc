#pragma once

#include "moldmpc/common.hpp"

#include <utility>
#include <vector>

namespace moldmpc
{

using SymmetryPairs = std::vector<std::pair<int, int>>;

/// Equality constraints u_i = u_j handled by elimination: each pair shares one
/// free variable and unpaired inputs keep their own, so u = E v.
class SymmetryMap
{
public:
    /// Pairs hold zero-based input indices. Throws ConfigError on overlapping,
    /// self-referencing or out-of-range pairs.
    SymmetryMap(int inputs, const SymmetryPairs& pairs);

    int inputs() const { return static_cast<int>(expansion_.rows()); }
    int free_variables() const { return static_cast<int>(expansion_.cols()); }

    /// inputs x free_variables, one or two unit entries per column.
    const Matrix& expansion() const { return expansion_; }
    /// Block-diagonal expansion over `horizon` steps.
    Matrix horizon_expansion(int horizon) const;
    /// Inputs mapped to each free variable.
    const std::vector<std::vector<int>>& groups() const { return groups_; }

    /// Free-variable value of a full input vector (first member of each group).
    Vector reduce(const Vector& u) const;
    /// Copies every free variable to all of its inputs.
    Vector expand(const Vector& v) const;

private:
    Matrix expansion_;
    std::vector<std::vector<int>> groups_;
};

/// Reduced QP data: H_r = E^T H E, f_r = E^T f, M_r = M E.
struct ReducedQp
{
    Matrix H;
    Vector f;
    Matrix M;
};

ReducedQp reduce_problem(const Matrix& H, const Vector& f, const Matrix& M, const Matrix& expansion);

} // namespace moldmpc
