#include "moldmpc/sysid/arx.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include <algorithm>
#include <set>
#include <sstream>

namespace moldmpc
{

void ArxModel::validate() const
{
    if (r < 1 || s < 0)
        throw InputError("arx: need r >= 1 and s >= 0");
    if (static_cast<int>(a.size()) != r || static_cast<int>(b.size()) != s + 1)
        throw InputError("arx: coefficient block count does not match the orders");
    for (const auto& ai : a)
        if (ai.rows() != m || ai.cols() != m)
            throw InputError("arx: a_i must be m x m");
    for (const auto& bi : b)
        if (bi.rows() != m || bi.cols() != nu)
            throw InputError("arx: b_i must be m x nu");
    if (baseline.y.size() != m || baseline.u.size() != nu)
        throw InputError("arx: baseline size mismatch");
}

Vector ArxModel::predict(const Matrix& recent_y, const Matrix& recent_u) const
{
    if (recent_y.rows() < r || recent_u.rows() < s + 1)
        throw InputError("arx predict: not enough history");
    Vector dy = Vector::Zero(m);
    for (int i = 0; i < r; ++i)
        dy += a[i] * (recent_y.row(i).transpose() - baseline.y);
    for (int i = 0; i <= s; ++i)
        dy += b[i] * (recent_u.row(i).transpose() - baseline.u);
    return dy + baseline.y;
}

double ArxModel::spectral_radius() const
{
    const int n = m * r;
    Matrix companion = Matrix::Zero(n, n);
    for (int i = 0; i < r; ++i)
        companion.block(0, i * m, m, m) = a[i];
    if (r > 1)
        companion.block(m, 0, n - m, n - m).setIdentity();
    return Eigen::EigenSolver<Matrix>(companion, false).eigenvalues().cwiseAbs().maxCoeff();
}

Eigen::Index minimum_rows(const ArxOrders& orders, int outputs, int inputs)
{
    const int per_output = outputs * orders.r + inputs * (orders.s + 1);
    const int lag = std::max(orders.r, orders.s + 1);
    return lag + (10 * per_output + outputs - 1) / std::max(outputs, 1) + 1;
}

namespace
{

std::string regressor_name(int column, int m, int nu, int r)
{
    std::ostringstream s;
    if (column < m * r)
    {
        const int lag = column / m;
        s << 'y' << (column % m + 1) << "[t" << (lag ? "-" + std::to_string(lag) : "") << ']';
    }
    else
    {
        const int c = column - m * r;
        const int lag = c / nu;
        s << 'u' << (c % nu + 1) << "[t" << (lag ? "-" + std::to_string(lag) : "") << ']';
    }
    return s.str();
}

} // namespace

ArxModel fit_arx(const IoDataset& data, const ArxOrders& orders, const ArxBaseline& baseline)
{
    data.validate();
    const int m = static_cast<int>(data.Y.cols());
    const int nu = static_cast<int>(data.U.cols());
    const int r = orders.r, s = orders.s;
    if (r < 1 || s < 0)
        throw InputError("fit_arx: need r >= 1 and s >= 0");
    if (baseline.y.size() != m || baseline.u.size() != nu)
        throw InputError("fit_arx: baseline size mismatch");
    if (data.rows() < minimum_rows(orders, m, nu))
        throw InputError("fit_arx: dataset too short for a well-posed fit (need " +
                         std::to_string(minimum_rows(orders, m, nu)) + " rows)");

    const Matrix dy = data.Y.rowwise() - baseline.y.transpose();
    const Matrix du = data.U.rowwise() - baseline.u.transpose();
    const int first = std::max(r - 1, s);
    const Eigen::Index rows = data.rows() - 1 - first;
    const int cols = m * r + nu * (s + 1);

    Matrix phi(rows, cols);
    Matrix target(rows, m);
    for (Eigen::Index row = 0; row < rows; ++row)
    {
        const Eigen::Index t = first + row;
        for (int i = 0; i < r; ++i)
            phi.block(row, i * m, 1, m) = dy.row(t - i);
        for (int i = 0; i <= s; ++i)
            phi.block(row, m * r + i * nu, 1, nu) = du.row(t - i);
        target.row(row) = dy.row(t + 1);
    }

    Eigen::ColPivHouseholderQR<Matrix> qr(phi);
    if (qr.rank() < cols)
    {
        std::set<int> deficient;
        for (int c = static_cast<int>(qr.rank()); c < cols; ++c)
            deficient.insert(static_cast<int>(qr.colsPermutation().indices()(c)));
        std::ostringstream msg;
        msg << "fit_arx: rank-deficient regressors (rank " << qr.rank() << " of " << cols << "); deficient:";
        for (int c : deficient)
            msg << ' ' << regressor_name(c, m, nu, r);
        throw IdentificationError(msg.str());
    }
    const Matrix theta = qr.solve(target); // cols x m

    ArxModel model;
    model.r = r;
    model.s = s;
    model.m = m;
    model.nu = nu;
    model.sample_period = data.sample_period;
    model.baseline = baseline;
    for (int i = 0; i < r; ++i)
        model.a.push_back(theta.block(i * m, 0, m, m).transpose());
    for (int i = 0; i <= s; ++i)
        model.b.push_back(theta.block(m * r + i * nu, 0, nu, m).transpose());

    const Matrix residual = target - phi * theta;
    model.residual_rms = (residual.colwise().squaredNorm() / static_cast<double>(rows)).cwiseSqrt().transpose();
    model.residual_max = residual.cwiseAbs().maxCoeff();
    return model;
}

ArxModel fit_arx(const IoDataset& data, const ArxOrders& orders)
{
    return fit_arx(data, orders, ArxBaseline{Vector::Zero(data.Y.cols()), Vector::Zero(data.U.cols())});
}

Matrix simulate_arx(const ArxModel& model, const Matrix& initial_y, const Matrix& initial_u, const Matrix& inputs)
{
    model.validate();
    if (initial_y.rows() < model.r || initial_u.rows() < model.s)
        throw InputError("simulate_arx: initial window too short");
    const Eigen::Index steps = inputs.rows();
    Matrix out(steps, model.m);
    // Rolling history, most recent first.
    Matrix ys = initial_y.topRows(model.r);
    Matrix us(model.s + 1, model.nu);
    if (model.s > 0)
        us.bottomRows(model.s) = initial_u.topRows(model.s);
    for (Eigen::Index t = 0; t < steps; ++t)
    {
        out.row(t) = ys.row(0);
        us.row(0) = inputs.row(t);
        const Vector next = model.predict(ys, us);
        for (int i = model.r - 1; i > 0; --i)
            ys.row(i) = ys.row(i - 1);
        ys.row(0) = next.transpose();
        for (int i = model.s; i > 0; --i)
            us.row(i) = us.row(i - 1);
    }
    return out;
}

double one_step_sse(const ArxModel& model, const IoDataset& data)
{
    const int first = std::max(model.r - 1, model.s);
    double sse = 0.0;
    Matrix ys(model.r, model.m), us(model.s + 1, model.nu);
    for (Eigen::Index t = first; t + 1 < data.rows(); ++t)
    {
        for (int i = 0; i < model.r; ++i)
            ys.row(i) = data.Y.row(t - i);
        for (int i = 0; i <= model.s; ++i)
            us.row(i) = data.U.row(t - i);
        sse += (data.Y.row(t + 1).transpose() - model.predict(ys, us)).squaredNorm();
    }
    return sse;
}

} // namespace moldmpc
