#include "moldmpc/observer/virtual_nodes.hpp"

#include <numeric>

namespace moldmpc
{

namespace
{

std::vector<int> first_rows(int count)
{
    std::vector<int> rows(static_cast<size_t>(count));
    std::iota(rows.begin(), rows.end(), 0);
    return rows;
}

} // namespace

VirtualNodeEstimator::VirtualNodeEstimator(AugmentedModel extended_model, KalmanConfig config, int measured_outputs)
    : measured_(measured_outputs),
      observer_((measured_outputs >= 1 && measured_outputs <= extended_model.outputs())
                    ? std::move(extended_model)
                    : throw ConfigError("virtual nodes: measured output count out of range"),
                std::move(config), first_rows(measured_outputs))
{
}

Matrix VirtualNodeEstimator::measurement_selector() const
{
    Matrix s = Matrix::Zero(measured_, observer_.model().outputs());
    s.leftCols(measured_).setIdentity();
    return s;
}

Vector VirtualNodeEstimator::step(const Vector& applied_u, const Vector& z)
{
    observer_.step(applied_u, z);
    return virtual_nodes();
}

Vector VirtualNodeEstimator::virtual_nodes() const { return observer_.outputs().tail(virtual_outputs()); }

Vector estimate_virtual_nodes(VirtualNodeEstimator& estimator, const Vector& applied_u, const Vector& z)
{
    return estimator.step(applied_u, z);
}

} // namespace moldmpc
