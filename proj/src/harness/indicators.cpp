#include "moldmpc/harness/indicators.hpp"

#include <cmath>

namespace moldmpc
{

namespace
{

struct SquaredDeviations
{
    double from_mean = 0.0;
    double from_reference = 0.0;
};

SquaredDeviations instant(const Matrix& temperatures, Eigen::Index row, double reference)
{
    const auto t = temperatures.row(row);
    // Deviations from the first sensor first: identical readings then give an
    // exact zero spread.
    const Eigen::ArrayXd shifted = (t.array() - t(0)).transpose();
    return {(shifted - shifted.mean()).square().sum(), (t.array() - reference).square().sum()};
}

} // namespace

IndicatorReport compute_indicators(const Vector& time, const Vector& reference, const Matrix& temperatures,
                                   double t_i, double t_f)
{
    if (time.size() != reference.size() || time.size() != temperatures.rows())
        throw InputError("indicators: time, reference and temperature rows differ");
    if (temperatures.cols() < 1)
        throw InputError("indicators: no sensors");
    if (!(t_i < t_f))
        throw InputError("indicators: need t_i < t_f");

    IndicatorReport rep;
    rep.t_i = t_i;
    rep.t_f = t_f;
    rep.sensors = static_cast<int>(temperatures.cols());
    const auto n = static_cast<double>(temperatures.cols());

    Eigen::Index last = -1;
    SquaredDeviations total;
    for (Eigen::Index r = 0; r < time.size(); ++r)
    {
        if (time(r) < t_i || time(r) > t_f)
            continue;
        const SquaredDeviations d = instant(temperatures, r, reference(r));
        total.from_mean += d.from_mean;
        total.from_reference += d.from_reference;
        ++rep.samples;
        if (last < 0 || time(r) >= time(last))
            last = r;
    }
    if (rep.samples == 0)
        throw InputError("indicators: no samples inside [t_i, t_f]");

    const SquaredDeviations end = instant(temperatures, last, reference(last));
    rep.rmse_avg_stat = std::sqrt(end.from_mean / n);
    rep.rmse_ref_stat = std::sqrt(end.from_reference / n);
    rep.rmse_avg_global = std::sqrt(total.from_mean / (n * rep.samples));
    rep.rmse_ref_global = std::sqrt(total.from_reference / (n * rep.samples));
    return rep;
}

} // namespace moldmpc
