#include "elmpc/mpc/trajectory.hpp"

#include <cmath>

#include "elmpc/error.hpp"

namespace elmpc::mpc {

Trajectory::Trajectory(double ts, std::vector<ReferencePoint> samples)
    : ts_(ts), samples_(std::move(samples)) {
    if (!(ts_ > 0.0) || !std::isfinite(ts_)) {
        throw ConfigError("trajectory sample interval must be positive");
    }
    if (samples_.empty()) {
        throw ConfigError("trajectory needs at least one sample");
    }
    for (const auto& s : samples_) {
        if (!s.position.allFinite() || !s.velocity.allFinite()) {
            throw ConfigError("trajectory contains non-finite samples");
        }
    }
}

ReferencePoint Trajectory::at_position(double u) const {
    // u is a fractional sample index.
    if (!(u > 0.0)) {
        return samples_.front();
    }
    const double last = static_cast<double>(samples_.size() - 1);
    if (u >= last) {
        return samples_.back();
    }
    const auto i = static_cast<std::size_t>(std::floor(u));
    const double frac = u - static_cast<double>(i);
    if (frac == 0.0) {
        return samples_[i];
    }
    const auto& a = samples_[i];
    const auto& b = samples_[i + 1];
    return ReferencePoint{a.position + frac * (b.position - a.position),
                          a.velocity + frac * (b.velocity - a.velocity)};
}

ReferencePoint Trajectory::at_time(double t) const {
    return at_position(t / ts_);
}

Trajectory Trajectory::resample(double new_ts) const {
    if (!(new_ts > 0.0)) {
        throw ConfigError("resample interval must be positive");
    }
    // Ratio first so that integer multiples of the old interval land exactly on knots.
    const double ratio = new_ts / ts_;
    const auto count =
        static_cast<std::size_t>(std::floor(duration() / new_ts + 1e-9)) + 1;
    std::vector<ReferencePoint> out;
    out.reserve(count);
    for (std::size_t k = 0; k < count; ++k) {
        out.push_back(at_position(static_cast<double>(k) * ratio));
    }
    return Trajectory(new_ts, std::move(out));
}

std::vector<ReferencePoint> Trajectory::window(double t, double ts, std::size_t count) const {
    std::vector<ReferencePoint> out;
    out.reserve(count);
    for (std::size_t j = 1; j <= count; ++j) {
        out.push_back(at_time(t + static_cast<double>(j) * ts));
    }
    return out;
}

}  // namespace elmpc::mpc
