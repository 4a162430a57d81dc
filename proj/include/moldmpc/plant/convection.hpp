#pragma once

namespace moldmpc
{

enum class FitKind
{
    PowerLaw,             // h = a (dT - b)^c
    SaturatingExponential // h = a (b - exp(-c dT))
};

/// Fitted convection coefficient h(dT) for one family of exterior faces.
/// dT is surface minus ambient temperature in K; h is in W/(m^2 K). Outside
/// [dT_min, dT_max] the coefficient is held at its boundary value.
struct ConvectionFit
{
    FitKind kind = FitKind::PowerLaw;
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
    double dT_min = 2.0;
    double dT_max = 157.0;

    void validate() const;
};

/// Upper face fit (power law).
ConvectionFit upper_face_fit();
/// Lower face fit (power law).
ConvectionFit lower_face_fit();
/// Lateral face fit (saturating exponential).
ConvectionFit lateral_face_fit();

/// Evaluates the fit with dT clamped to [dT_min, dT_max] and the result
/// floored at zero. Total for any finite dT.
double convection_h(const ConvectionFit& fit, double dT);

} // namespace moldmpc
