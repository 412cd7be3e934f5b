#pragma once

#include <array>
#include <span>
#include <vector>

#include "elmpc/mpc/trajectory.hpp"
#include "elmpc/mpc/types.hpp"

namespace elmpc::mpc {

/// Tracking cost of one predicted state: w_pos |p - p_ref|^2 + w_vel |v - v_ref|^2.
double stage_cost(const UavState& x, const ReferencePoint& ref, const MpcConfig& cfg);

/// J = sum_k stage_cost(x_k, ref_k) + w_u |u_{k-1}|^2 for k = 1..Np.
double horizon_cost(const UavState& x0, std::span<const Eigen::Vector2d> u_seq,
                    std::span<const ReferencePoint> ref, const MpcConfig& cfg);

/// dJ/du by backward (adjoint) recursion through the linear model.
std::vector<Eigen::Vector2d> cost_gradient(const UavState& x0, std::span<const Eigen::Vector2d> u_seq,
                                           std::span<const ReferencePoint> ref, const MpcConfig& cfg);

struct OptimizerDiagnostics {
    double initial_cost = 0.0;
    double final_cost = 0.0;
    int iterations = 0;              // accepted iterations
    std::vector<double> cost_trace;  // initial cost, then cost after each accepted iteration
    std::array<bool, 2> saturated{false, false};  // first input component sits on the box
    double warm_terminal_cost = 0.0;  // terminal stage cost predicted from the warm start
};

struct Solution {
    std::vector<Eigen::Vector2d> u_seq;
    OptimizerDiagnostics diagnostics;
};

/// Box-constrained projected gradient descent, fixed iteration budget, step
/// halving whenever a trial step would increase the cost.
/// ref must hold at least cfg.horizon points (only the first Np are used).
/// Throws DivergenceError on a non-finite cost.
Solution optimize(const UavState& x0, std::span<const ReferencePoint> ref, const MpcConfig& cfg,
                  std::span<const Eigen::Vector2d> warm_start);

/// Receding-horizon wrapper holding the shifted warm start between cycles.
class MpcOptimizer {
public:
    explicit MpcOptimizer(const MpcConfig& cfg);

    Solution solve(const UavState& x0, std::span<const ReferencePoint> ref, const MpcConfig& cfg);

    /// Truncates or zero-pads the warm start to cfg.horizon and clamps it to cfg.u_bound.
    void conform(const MpcConfig& cfg);

    const std::vector<Eigen::Vector2d>& warm_start() const noexcept { return warm_; }

private:
    std::vector<Eigen::Vector2d> warm_;
};

}  // namespace elmpc::mpc
