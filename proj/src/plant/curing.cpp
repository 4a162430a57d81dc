#include "moldmpc/plant/curing.hpp"

#include "moldmpc/common.hpp"

#include <algorithm>
#include <cmath>

namespace moldmpc
{

void CuringParameters::validate() const
{
    const auto& k = kinetics;
    if (!(k.pre_exponential_1 >= 0.0 && k.pre_exponential_2 >= 0.0))
        throw ConfigError("curing: pre-exponential factors must be non-negative");
    if (!(k.activation_energy_1 >= 0.0 && k.activation_energy_2 >= 0.0))
        throw ConfigError("curing: activation energies must be non-negative");
    if (!(k.order_m >= 0.0 && k.order_n > 0.0))
        throw ConfigError("curing: reaction orders must satisfy m >= 0, n > 0");
    if (!(heat_of_reaction >= 0.0 && resin_density > 0.0))
        throw ConfigError("curing: heat of reaction and resin density must be positive");
}

namespace
{

double rate_unchecked(const CureKinetics& k, double alpha, double temperature_k)
{
    alpha = std::clamp(alpha, 0.0, 1.0);
    if (alpha >= 1.0)
        return 0.0;
    const double rt = kGasConstant * temperature_k;
    const double k1 = k.pre_exponential_1 * std::exp(-k.activation_energy_1 / rt);
    const double k2 = k.pre_exponential_2 * std::exp(-k.activation_energy_2 / rt);
    const double autocatalytic = alpha > 0.0 ? std::pow(alpha, k.order_m) : (k.order_m == 0.0 ? 1.0 : 0.0);
    return (k1 + k2 * autocatalytic) * std::pow(1.0 - alpha, k.order_n);
}

} // namespace

CureRate curing_rate(const CuringParameters& params, double alpha, double temperature_k)
{
    if (!(alpha >= 0.0 && alpha <= 1.0))
        throw DomainError("curing_rate: degree of cure outside [0, 1]");
    const double rate = rate_unchecked(params.kinetics, alpha, temperature_k);
    return {rate, rate * params.resin_density * params.heat_of_reaction};
}

double integrate_cure(const CuringParameters& params, double alpha, double temperature_k,
                      double dt, double max_substep)
{
    if (dt <= 0.0)
        return alpha;
    const int steps = std::max(1, static_cast<int>(std::ceil(dt / max_substep)));
    const double h = dt / steps;
    const auto f = [&](double a) { return rate_unchecked(params.kinetics, a, temperature_k); };
    for (int s = 0; s < steps; ++s)
    {
        const double k1 = f(alpha);
        const double k2 = f(alpha + 0.5 * h * k1);
        const double k3 = f(alpha + 0.5 * h * k2);
        const double k4 = f(alpha + h * k3);
        const double next = alpha + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        alpha = std::clamp(next, alpha, 1.0);
    }
    return alpha;
}

} // namespace moldmpc
