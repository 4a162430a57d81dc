#include "moldmpc/mpc/symmetry.hpp"

#include <algorithm>

namespace moldmpc
{

SymmetryMap::SymmetryMap(int inputs, const SymmetryPairs& pairs)
{
    if (inputs < 1)
        throw ConfigError("symmetry: input count must be positive");
    std::vector<int> group_of(static_cast<size_t>(inputs), -1);
    for (const auto& [i, j] : pairs)
    {
        if (i < 0 || j < 0 || i >= inputs || j >= inputs)
            throw ConfigError("symmetry: pair index out of range");
        if (i == j)
            throw ConfigError("symmetry: a heater cannot be paired with itself");
        if (group_of[static_cast<size_t>(i)] >= 0 || group_of[static_cast<size_t>(j)] >= 0)
            throw ConfigError("symmetry: pairs overlap");
        group_of[static_cast<size_t>(i)] = group_of[static_cast<size_t>(j)] = static_cast<int>(groups_.size());
        groups_.push_back({i, j});
    }
    for (int q = 0; q < inputs; ++q)
        if (group_of[static_cast<size_t>(q)] < 0)
        {
            group_of[static_cast<size_t>(q)] = static_cast<int>(groups_.size());
            groups_.push_back({q});
        }
    // order groups by their lowest input so the identity map stays the identity
    std::sort(groups_.begin(), groups_.end(),
              [](const auto& a, const auto& b) { return std::min(a.front(), a.back()) < std::min(b.front(), b.back()); });

    expansion_ = Matrix::Zero(inputs, static_cast<Eigen::Index>(groups_.size()));
    for (size_t g = 0; g < groups_.size(); ++g)
        for (int q : groups_[g])
            expansion_(q, static_cast<Eigen::Index>(g)) = 1.0;
}

Matrix SymmetryMap::horizon_expansion(int horizon) const
{
    const Eigen::Index n = expansion_.rows(), k = expansion_.cols();
    Matrix e = Matrix::Zero(n * horizon, k * horizon);
    for (int i = 0; i < horizon; ++i)
        e.block(i * n, i * k, n, k) = expansion_;
    return e;
}

Vector SymmetryMap::reduce(const Vector& u) const
{
    if (u.size() != inputs())
        throw InputError("symmetry: input vector size mismatch");
    Vector v(free_variables());
    for (size_t g = 0; g < groups_.size(); ++g)
        v(static_cast<Eigen::Index>(g)) = u(groups_[g].front());
    return v;
}

Vector SymmetryMap::expand(const Vector& v) const
{
    if (v.size() != free_variables())
        throw InputError("symmetry: reduced vector size mismatch");
    Vector u(inputs());
    for (size_t g = 0; g < groups_.size(); ++g)
        for (int q : groups_[g])
            u(q) = v(static_cast<Eigen::Index>(g));
    return u;
}

ReducedQp reduce_problem(const Matrix& H, const Vector& f, const Matrix& M, const Matrix& expansion)
{
    if (H.rows() != expansion.rows() || f.size() != expansion.rows() || (M.size() > 0 && M.cols() != expansion.rows()))
        throw InputError("symmetry: expansion does not match the problem size");
    return {expansion.transpose() * H * expansion, expansion.transpose() * f, M * expansion};
}

} // namespace moldmpc
