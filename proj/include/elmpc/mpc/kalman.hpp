#pragma once

#include <optional>

#include <Eigen/Dense>

#include "elmpc/mpc/types.hpp"

namespace elmpc::mpc {

/// Linear Kalman filter over x = (px, py, vx, vy) with a full-state measurement.
struct Estimate {
    Eigen::Vector4d mean = Eigen::Vector4d::Zero();
    Eigen::Matrix4d covariance = Eigen::Matrix4d::Zero();

    UavState state() const { return UavState::from_stacked(mean); }
};

/// Transition matrix of the model at the config's current drag and ts.
Eigen::Matrix4d transition_matrix(const MpcConfig& cfg);

Estimate kalman_predict(const Estimate& prior, const ControlInput& u, const MpcConfig& cfg);

/// Throws DegeneracyError when the innovation covariance is not invertible.
Estimate kalman_update(const Estimate& predicted, const Eigen::Vector4d& measurement,
                       const Eigen::Matrix4d& r);

/// Predict with the current Q, then update when a measurement is present.
Estimate kalman_step(const Estimate& prior, const ControlInput& u,
                     const std::optional<Eigen::Vector4d>& measurement, const MpcConfig& cfg,
                     const Eigen::Matrix4d& r);

}  // namespace elmpc::mpc
