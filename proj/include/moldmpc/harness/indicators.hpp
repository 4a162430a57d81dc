#pragma once

#include "moldmpc/common.hpp"

namespace moldmpc
{

/// Homogeneity and tracking indicators of a run, all in C.
struct IndicatorReport
{
    double rmse_avg_stat = 0.0;
    double rmse_ref_stat = 0.0;
    double rmse_avg_global = 0.0;
    double rmse_ref_global = 0.0;
    double t_i = 0.0;
    double t_f = 0.0;
    int sensors = 0;
    int samples = 0; // rows inside [t_i, t_f]
};

/// `temperatures` holds one row per sample and one column per sensor.
/// Stationary indicators use the sample at t_f (the last one not after it);
/// global ones average the squared deviations over every sample in
/// [t_i, t_f] and over the sensors.
IndicatorReport compute_indicators(const Vector& time, const Vector& reference, const Matrix& temperatures,
                                   double t_i, double t_f);

} // namespace moldmpc
