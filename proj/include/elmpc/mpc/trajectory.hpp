#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace elmpc::mpc {

struct ReferencePoint {
    Eigen::Vector2d position = Eigen::Vector2d::Zero();
    Eigen::Vector2d velocity = Eigen::Vector2d::Zero();
};

/// Reference states sampled every `ts` seconds starting at t = 0. Queries
/// between samples interpolate linearly; queries past either end hold the
/// end sample.
class Trajectory {
public:
    Trajectory(double ts, std::vector<ReferencePoint> samples);

    double ts() const noexcept { return ts_; }
    std::size_t size() const noexcept { return samples_.size(); }
    const ReferencePoint& operator[](std::size_t i) const { return samples_[i]; }
    const std::vector<ReferencePoint>& samples() const noexcept { return samples_; }
    double duration() const noexcept { return ts_ * static_cast<double>(samples_.size() - 1); }

    ReferencePoint at_time(double t) const;

    /// Re-sampled copy at a new interval covering the same duration.
    Trajectory resample(double new_ts) const;

    /// References for x_1 .. x_count of a horizon starting at t with step ts.
    std::vector<ReferencePoint> window(double t, double ts, std::size_t count) const;

private:
    ReferencePoint at_position(double u) const;

    double ts_;
    std::vector<ReferencePoint> samples_;
};

}  // namespace elmpc::mpc
