#include "moldmpc/harness/reference_profile.hpp"

#include <algorithm>
#include <cmath>

namespace moldmpc
{

ProfileSegment ProfileSegment::ramp(double target_c, double rate_c_per_min)
{
    return {Kind::Ramp, target_c, rate_c_per_min, 0.0};
}

ProfileSegment ProfileSegment::hold_until(double until_s) { return {Kind::Hold, 0.0, 0.0, until_s}; }

ReferenceProfile::ReferenceProfile(double start_c, std::vector<ProfileSegment> segments)
    : start_c_(start_c), segments_(std::move(segments))
{
    if (!std::isfinite(start_c_))
        throw ConfigError("profile: start temperature must be finite");
    knots_t_.push_back(0.0);
    knots_c_.push_back(start_c_);
    for (const auto& s : segments_)
    {
        const double t = knots_t_.back();
        const double c = knots_c_.back();
        if (s.kind == ProfileSegment::Kind::Ramp)
        {
            if (!(s.rate_c_per_min > 0.0))
                throw ConfigError("profile: ramp rates must be positive");
            knots_t_.push_back(t + std::abs(s.target_c - c) / s.rate_c_per_min * 60.0);
            knots_c_.push_back(s.target_c);
        }
        else
        {
            if (!(s.until_s >= t))
                throw ConfigError("profile: hold ends before it starts");
            knots_t_.push_back(s.until_s);
            knots_c_.push_back(c);
        }
    }
}

double ReferenceProfile::at(double t) const
{
    if (t <= 0.0)
        return knots_c_.front();
    if (t >= knots_t_.back())
        return knots_c_.back();
    const auto it = std::upper_bound(knots_t_.begin(), knots_t_.end(), t);
    const auto hi = static_cast<size_t>(it - knots_t_.begin());
    const size_t lo = hi - 1;
    const double span = knots_t_[hi] - knots_t_[lo];
    if (span <= 0.0)
        return knots_c_[hi];
    const double w = (t - knots_t_[lo]) / span;
    return knots_c_[lo] + w * (knots_c_[hi] - knots_c_[lo]);
}

ReferenceProfile empty_mold_profile()
{
    return ReferenceProfile(23.0, {ProfileSegment::ramp(120.0, 2.0), ProfileSegment::hold_until(10000.0),
                                   ProfileSegment::ramp(180.0, 2.0), ProfileSegment::hold_until(20000.0)});
}

ReferenceProfile molding_profile(double injection_time, double cure_hold)
{
    const double ramp_to_cure = (185.0 - 120.0) / 2.0 * 60.0;
    return ReferenceProfile(23.0, {ProfileSegment::ramp(120.0, 2.0), ProfileSegment::hold_until(injection_time),
                                   ProfileSegment::ramp(185.0, 2.0),
                                   ProfileSegment::hold_until(injection_time + ramp_to_cure + cure_hold)});
}

} // namespace moldmpc
