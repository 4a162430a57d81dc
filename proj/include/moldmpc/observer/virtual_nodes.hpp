#pragma once

#include "moldmpc/observer/kalman.hpp"

namespace moldmpc
{

/// Observer over a ROM whose outputs are the measured sensors followed by
/// unmeasured "virtual" cavity points. Only the measured rows enter the
/// Kalman update; the virtual outputs are read off the shared state.
class VirtualNodeEstimator
{
public:
    VirtualNodeEstimator(AugmentedModel extended_model, KalmanConfig config, int measured_outputs);

    int measured_outputs() const { return measured_; }
    int virtual_outputs() const { return observer_.model().outputs() - measured_; }
    const PerturbationObserver& observer() const { return observer_; }

    /// Selector picking the measured rows out of the full output vector.
    Matrix measurement_selector() const;

    /// Steps the filter and returns the estimated virtual-node temperatures (C).
    Vector step(const Vector& applied_u, const Vector& z);

    /// Current virtual-node estimate (C).
    Vector virtual_nodes() const;

private:
    int measured_;
    PerturbationObserver observer_;
};

/// Free-function form of VirtualNodeEstimator::step.
Vector estimate_virtual_nodes(VirtualNodeEstimator& estimator, const Vector& applied_u, const Vector& z);

} // namespace moldmpc
