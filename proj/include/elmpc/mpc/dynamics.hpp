#pragma once

#include <span>
#include <vector>

#include "elmpc/mpc/types.hpp"

namespace elmpc::mpc {

/// Point mass with linear drag, explicit Euler:
///   p+ = p + v * ts
///   v+ = v + (u - drag * v) * ts
UavState model_step(const UavState& x, const Eigen::Vector2d& u, double drag, double ts);

/// Ground-truth step. Same form as the model plus wind, process noise and
/// actuator derating. Noise is drawn on every call (also when its std is 0).
UavState step_plant(const UavState& x, const ControlInput& u, const PlantParams& params, double ts,
                    NoiseStream& noise);

/// Rolls the model over the horizon with the config's current drag and ts.
/// Returns x_1 .. x_Np. Throws ConfigError when u_seq.size() != cfg.horizon.
std::vector<UavState> predict_horizon(const UavState& x0, std::span<const Eigen::Vector2d> u_seq,
                                      const MpcConfig& cfg);

}  // namespace elmpc::mpc
