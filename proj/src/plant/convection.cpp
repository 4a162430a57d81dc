#include "moldmpc/plant/convection.hpp"

#include "moldmpc/common.hpp"

#include <algorithm>
#include <cmath>

namespace moldmpc
{

void ConvectionFit::validate() const
{
    if (!(a > 0.0))
        throw ConfigError("convection fit: coefficient a must be positive");
    if (!(dT_min <= dT_max))
        throw ConfigError("convection fit: dT_min must not exceed dT_max");
    if (!std::isfinite(b) || !std::isfinite(c))
        throw ConfigError("convection fit: non-finite coefficient");
}

ConvectionFit upper_face_fit() { return {FitKind::PowerLaw, 4.120, 23.567, 0.317, 2.0, 157.0}; }

ConvectionFit lower_face_fit() { return {FitKind::PowerLaw, 0.942, 22.937, 0.533, 2.0, 157.0}; }

ConvectionFit lateral_face_fit()
{
    return {FitKind::SaturatingExponential, 20.160, 0.395, 0.041, 2.0, 157.0};
}

double convection_h(const ConvectionFit& fit, double dT)
{
    const double clamped = std::clamp(dT, fit.dT_min, fit.dT_max);
    double h = 0.0;
    switch (fit.kind)
    {
    case FitKind::PowerLaw:
    {
        // Below the root the printed law has a negative base; treat as no convection.
        const double base = clamped - fit.b;
        h = base > 0.0 ? fit.a * std::pow(base, fit.c) : 0.0;
        break;
    }
    case FitKind::SaturatingExponential:
        h = fit.a * (fit.b - std::exp(-fit.c * clamped));
        break;
    }
    return std::max(h, 0.0);
}

} // namespace moldmpc
