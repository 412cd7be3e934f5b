#pragma once

#include <array>
#include <cstdint>
#include <random>

#include <Eigen/Dense>

namespace elmpc::mpc {

struct UavState {
    Eigen::Vector2d position = Eigen::Vector2d::Zero();  // m
    Eigen::Vector2d velocity = Eigen::Vector2d::Zero();  // m/s

    bool finite() const { return position.allFinite() && velocity.allFinite(); }
    Eigen::Vector4d stacked() const {
        return (Eigen::Vector4d() << position, velocity).finished();
    }
    static UavState from_stacked(const Eigen::Vector4d& x) {
        return UavState{x.head<2>(), x.tail<2>()};
    }
};

/// Commanded acceleration, m/s^2.
struct ControlInput {
    Eigen::Vector2d accel = Eigen::Vector2d::Zero();
};

/// Adaptable controller parameters. Each adaptable quantity carries its
/// nominal value (what the adaptation laws scale from) and the value in force.
struct MpcConfig {
    int horizon_nominal = 20;
    int horizon_min = 5;
    int horizon = 20;

    double ts_nominal = 0.05;  // s
    double ts_min = 0.02;
    double ts = 0.05;

    double u_bound_nominal = 4.0;  // m/s^2
    double u_bound = 4.0;

    double drag_nominal = 0.1;  // 1/s, model linear drag
    double drag = 0.1;

    // Estimator process-noise covariance diagonal (px, py, vx, vy).
    std::array<double, 4> q_nominal{1e-6, 1e-6, 1e-4, 1e-4};
    std::array<double, 4> q{1e-6, 1e-6, 1e-4, 1e-4};

    double w_pos = 1.0;
    double w_vel = 0.1;
    double w_u = 0.01;

    int iterations = 30;
    double step_size = 50.0;  // initial step, halved on cost increase

    /// Throws ConfigError when an invariant is violated.
    void validate() const;
    /// Puts every adaptable parameter back at its nominal value.
    void reset_to_nominal();
    /// Ratio of current to nominal Q (taken from the first diagonal entry).
    double q_scale() const { return q[0] / q_nominal[0]; }
    void set_q_scale(double scale);
};

/// Ground-truth world the model may mismatch.
struct PlantParams {
    double drag = 0.1;                                 // 1/s
    Eigen::Vector2d wind = Eigen::Vector2d::Zero();    // disturbance added to acceleration
    double process_noise_std = 0.0;                    // m/s^2 per axis
    std::array<double, 4> measurement_noise_std{0.0, 0.0, 0.0, 0.0};
    double actuator_scale = 1.0;                       // realized u = scale * commanded u
};

/// Seeded Gaussian noise source. One stream per noise channel keeps runs
/// reproducible regardless of which channels are active.
class NoiseStream {
public:
    explicit NoiseStream(std::uint64_t seed) : rng_(seed) {}
    double gaussian(double std_dev) {
        const double z = normal_(rng_);
        return std_dev * z;
    }

private:
    std::mt19937_64 rng_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace elmpc::mpc
