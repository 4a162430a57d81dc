#include "moldmpc/sysid/excitation.hpp"

#include <cmath>
#include <memory>
#include <random>

namespace moldmpc
{

PowerSchedule excitation_schedule(const Vector& max_powers, const ExcitationSpec& spec, double duration)
{
    if (!(spec.bit_period > 0.0 && spec.stair_period > 0.0))
        throw InputError("excitation: periods must be positive");
    const auto nu = max_powers.size();
    const auto bits = static_cast<Eigen::Index>(std::ceil(duration / spec.bit_period)) + 1;
    const double bits_per_stair = std::max(1.0, std::round(spec.stair_period / spec.bit_period));

    std::mt19937_64 rng(spec.seed);
    std::uniform_real_distribution<double> level(0.0, 1.0);
    std::bernoulli_distribution on(spec.on_probability);

    auto table = std::make_shared<Matrix>(bits, nu);
    Vector stair(nu);
    for (Eigen::Index k = 0; k < bits; ++k)
    {
        if (std::fmod(static_cast<double>(k), bits_per_stair) == 0.0)
            for (Eigen::Index h = 0; h < nu; ++h)
                stair(h) = level(rng);
        for (Eigen::Index h = 0; h < nu; ++h)
            (*table)(k, h) = on(rng) ? stair(h) * max_powers(h) : 0.0;
    }
    const double period = spec.bit_period;
    return [table, period](double time) {
        const auto k = std::clamp<Eigen::Index>(static_cast<Eigen::Index>(std::floor(time / period + 1e-9)), 0,
                                                table->rows() - 1);
        return Vector(table->row(k).transpose());
    };
}

} // namespace moldmpc
