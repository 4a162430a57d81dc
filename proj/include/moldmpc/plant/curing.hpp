#pragma once

#include <utility>

namespace moldmpc
{

/// Kamal-Sourour autocatalytic cure kinetics with Arrhenius rate constants:
///
///   d(alpha)/dt = (k1(T) + k2(T) alpha^m) (1 - alpha)^n,   ki = Ai exp(-Ei / (R T))
///
/// The defaults are synthetic: negligible reaction at room temperature, slow
/// at the 120 C injection level, and a full cure well inside two hours at 185 C.
struct CureKinetics
{
    double pre_exponential_1 = 9.64e4; // 1/s
    double activation_energy_1 = 70.0e3; // J/mol
    double pre_exponential_2 = 4.82e5; // 1/s
    double activation_energy_2 = 70.0e3; // J/mol
    double order_m = 1.0;
    double order_n = 1.5;
};

struct CureRate
{
    double dalpha_dt = 0.0;   // 1/s
    double heat_density = 0.0; // W/m^3 of resin
};

inline constexpr double kGasConstant = 8.314462618;

/// Resin properties and kinetics. The resin occupying the cavity is described
/// per cavity column by the plant; this struct carries the material side.
struct CuringParameters
{
    CureKinetics kinetics;
    double heat_of_reaction = 400.0e3; // J/kg
    double resin_density = 1150.0;     // kg/m^3

    void validate() const;
};

/// Cure rate and volumetric heat release at degree of cure `alpha` and
/// temperature `temperature_k`. Throws DomainError when alpha is outside [0, 1].
CureRate curing_rate(const CuringParameters& params, double alpha, double temperature_k);

/// Advances alpha over `dt` seconds at fixed temperature with classical RK4
/// sub-steps no longer than `max_substep`. The result stays in [alpha, 1].
double integrate_cure(const CuringParameters& params, double alpha, double temperature_k,
                      double dt, double max_substep = 2.0);

} // namespace moldmpc
