#pragma once

#include "moldmpc/common.hpp"

#include <vector>

namespace moldmpc
{

/// One piece of a temperature program. A ramp heats from the current value to
/// `target_c` at `rate_c_per_min`; a hold keeps the current value until the
/// absolute time `until_s`.
struct ProfileSegment
{
    enum class Kind
    {
        Ramp,
        Hold,
    };
    Kind kind = Kind::Hold;
    double target_c = 0.0;
    double rate_c_per_min = 0.0;
    double until_s = 0.0;

    static ProfileSegment ramp(double target_c, double rate_c_per_min);
    static ProfileSegment hold_until(double until_s);
};

/// Piecewise-linear reference temperature, continuous by construction.
class ReferenceProfile
{
public:
    ReferenceProfile(double start_c, std::vector<ProfileSegment> segments);

    /// Reference in C at time t (s); held at the final value after the end.
    double at(double t) const;
    double end_time() const { return knots_t_.back(); }
    double start_value() const { return knots_c_.front(); }
    const std::vector<ProfileSegment>& segments() const { return segments_; }

    /// Time at which segment `index` ends.
    double segment_end(size_t index) const { return knots_t_.at(index + 1); }

private:
    double start_c_;
    std::vector<ProfileSegment> segments_;
    std::vector<double> knots_t_;
    std::vector<double> knots_c_;
};

/// 23 -> 120 C at 2 C/min, hold to 10000 s, -> 180 C at 2 C/min, hold to 20000 s.
ReferenceProfile empty_mold_profile();

/// 23 -> 120 C at 2 C/min, hold until `injection_time`, -> 185 C at 2 C/min,
/// then hold for `cure_hold` seconds.
ReferenceProfile molding_profile(double injection_time = 6000.0, double cure_hold = 7200.0);

} // namespace moldmpc
