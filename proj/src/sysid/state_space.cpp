#include "moldmpc/sysid/state_space.hpp"

namespace moldmpc
{

Vector StateSpaceModel::state_from_history(const Matrix& recent_y, const Matrix& past_u) const
{
    if (recent_y.rows() < r || (s > 0 && past_u.rows() < s))
        throw InputError("state_from_history: not enough history");
    Vector x(state_size());
    for (int i = 0; i < r; ++i)
        x.segment(output_block(i), m) = recent_y.row(i).transpose() - baseline.y;
    for (int i = 1; i <= s; ++i)
        x.segment(input_block(i), nu) = past_u.row(i - 1).transpose() - baseline.u;
    return x;
}

StateSpaceModel arx_to_statespace(const ArxModel& model)
{
    model.validate();
    const int m = model.m, nu = model.nu, r = model.r, s = model.s;
    const int n = m * r + nu * s;

    StateSpaceModel ss;
    ss.m = m;
    ss.nu = nu;
    ss.r = r;
    ss.s = s;
    ss.baseline = model.baseline;
    ss.sample_period = model.sample_period;
    ss.A = Matrix::Zero(n, n);
    ss.B = Matrix::Zero(n, nu);
    ss.C = Matrix::Zero(m, n);

    // y_{t+1} row block
    for (int i = 0; i < r; ++i)
        ss.A.block(0, ss.output_block(i), m, m) = model.a[i];
    for (int i = 1; i <= s; ++i)
        ss.A.block(0, ss.input_block(i), m, nu) = model.b[i];
    ss.B.topRows(m) = model.b[0];

    // shift registers
    for (int i = 1; i < r; ++i)
        ss.A.block(ss.output_block(i), ss.output_block(i - 1), m, m).setIdentity();
    if (s >= 1)
        ss.B.block(ss.input_block(1), 0, nu, nu).setIdentity();
    for (int i = 2; i <= s; ++i)
        ss.A.block(ss.input_block(i), ss.input_block(i - 1), nu, nu).setIdentity();

    ss.C.leftCols(m).setIdentity();
    return ss;
}

AugmentedModel augment_with_perturbations(const StateSpaceModel& ss, int p)
{
    if (p < 1 || p > ss.m)
        throw InputError("augment: perturbation count must lie in [1, m]");
    Matrix map = Matrix::Zero(ss.m, p);
    for (int j = 0; j < p; ++j)
        map(j, j) = 1.0;
    return augment_with_perturbations(ss, map);
}

AugmentedModel augment_with_perturbations(const StateSpaceModel& ss, const Matrix& output_map)
{
    if (output_map.rows() != ss.m || output_map.cols() < 1)
        throw InputError("augment: output map must be m x p with p >= 1");
    const int n = ss.state_size();
    const int p = static_cast<int>(output_map.cols());

    AugmentedModel aug;
    aug.base = ss;
    aug.base_states = n;
    aug.p = p;
    aug.Bp = Matrix::Zero(n, p);
    aug.Bp.topRows(ss.m) = output_map;

    aug.A = Matrix::Zero(n + p, n + p);
    aug.A.topLeftCorner(n, n) = ss.A;
    aug.A.topRightCorner(n, p) = aug.Bp;
    aug.A.bottomRightCorner(p, p).setIdentity();

    aug.B = Matrix::Zero(n + p, ss.nu);
    aug.B.topRows(n) = ss.B;

    aug.C = Matrix::Zero(ss.m, n + p);
    aug.C.leftCols(n) = ss.C;
    return aug;
}

} // namespace moldmpc
