#include "elmpc/mpc/optimizer.hpp"

#include <cmath>
#include <string>

#include "elmpc/error.hpp"
#include "elmpc/mpc/dynamics.hpp"

namespace elmpc::mpc {

namespace {

constexpr int kMaxHalvings = 40;

void check_ref(std::span<const ReferencePoint> ref, const MpcConfig& cfg) {
    if (ref.size() < static_cast<std::size_t>(cfg.horizon)) {
        throw ConfigError("reference window shorter than horizon (" + std::to_string(ref.size()) +
                          " < " + std::to_string(cfg.horizon) + ")");
    }
}

Eigen::Vector2d clamp_box(const Eigen::Vector2d& u, double bound) {
    return u.cwiseMax(-bound).cwiseMin(bound);
}

}  // namespace

double stage_cost(const UavState& x, const ReferencePoint& ref, const MpcConfig& cfg) {
    return cfg.w_pos * (x.position - ref.position).squaredNorm() +
           cfg.w_vel * (x.velocity - ref.velocity).squaredNorm();
}

double horizon_cost(const UavState& x0, std::span<const Eigen::Vector2d> u_seq,
                    std::span<const ReferencePoint> ref, const MpcConfig& cfg) {
    check_ref(ref, cfg);
    const auto pred = predict_horizon(x0, u_seq, cfg);
    double j = 0.0;
    for (std::size_t k = 0; k < pred.size(); ++k) {
        j += stage_cost(pred[k], ref[k], cfg) + cfg.w_u * u_seq[k].squaredNorm();
    }
    return j;
}

std::vector<Eigen::Vector2d> cost_gradient(const UavState& x0, std::span<const Eigen::Vector2d> u_seq,
                                           std::span<const ReferencePoint> ref, const MpcConfig& cfg) {
    check_ref(ref, cfg);
    const auto pred = predict_horizon(x0, u_seq, cfg);
    const std::size_t np = pred.size();
    const double ts = cfg.ts;
    const double decay = 1.0 - cfg.drag * ts;

    std::vector<Eigen::Vector2d> grad(np);
    // Costates of position and velocity for x_{k+1}; zero past the horizon.
    Eigen::Vector2d lam_p = Eigen::Vector2d::Zero();
    Eigen::Vector2d lam_v = Eigen::Vector2d::Zero();
    for (std::size_t k = np; k-- > 0;) {
        // lambda_k = grad stage_k + A^T lambda_{k+1}
        const Eigen::Vector2d next_p = lam_p;
        const Eigen::Vector2d next_v = lam_v;
        lam_p = 2.0 * cfg.w_pos * (pred[k].position - ref[k].position) + next_p;
        lam_v = 2.0 * cfg.w_vel * (pred[k].velocity - ref[k].velocity) + ts * next_p + decay * next_v;
        // u_k drives x_{k+1} (pred[k]) through B = [0; ts].
        grad[k] = 2.0 * cfg.w_u * u_seq[k] + ts * lam_v;
    }
    return grad;
}

Solution optimize(const UavState& x0, std::span<const ReferencePoint> ref, const MpcConfig& cfg,
                  std::span<const Eigen::Vector2d> warm_start) {
    check_ref(ref, cfg);
    const auto np = static_cast<std::size_t>(cfg.horizon);
    if (warm_start.size() != np) {
        throw ConfigError("warm start length does not match horizon");
    }
    const auto ref_h = ref.first(np);

    Solution sol;
    sol.u_seq.reserve(np);
    for (const auto& u : warm_start) {
        sol.u_seq.push_back(clamp_box(u, cfg.u_bound));
    }
    auto& diag = sol.diagnostics;

    const auto warm_pred = predict_horizon(x0, sol.u_seq, cfg);
    diag.warm_terminal_cost = stage_cost(warm_pred.back(), ref_h.back(), cfg);

    double cost = horizon_cost(x0, sol.u_seq, ref_h, cfg);
    if (!std::isfinite(cost)) {
        throw DivergenceError("non-finite initial cost");
    }
    diag.initial_cost = cost;
    diag.cost_trace.push_back(cost);

    double step = cfg.step_size;
    std::vector<Eigen::Vector2d> trial(np);
    for (int it = 0; it < cfg.iterations; ++it) {
        const auto grad = cost_gradient(x0, sol.u_seq, ref_h, cfg);
        bool accepted = false;
        bool stationary = false;
        for (int h = 0; h <= kMaxHalvings; ++h) {
            bool moved = false;
            for (std::size_t k = 0; k < np; ++k) {
                trial[k] = clamp_box(sol.u_seq[k] - step * grad[k], cfg.u_bound);
                moved = moved || trial[k] != sol.u_seq[k];
            }
            if (!moved) {
                stationary = true;
                break;
            }
            const double trial_cost = horizon_cost(x0, trial, ref_h, cfg);
            if (!std::isfinite(trial_cost)) {
                throw DivergenceError("non-finite cost during optimization");
            }
            if (trial_cost <= cost) {
                sol.u_seq.swap(trial);
                cost = trial_cost;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted || stationary) {
            break;
        }
        ++diag.iterations;
        diag.cost_trace.push_back(cost);
    }
    diag.final_cost = cost;
    for (int i = 0; i < 2; ++i) {
        diag.saturated[static_cast<std::size_t>(i)] = std::abs(sol.u_seq.front()[i]) >= cfg.u_bound;
    }
    return sol;
}

MpcOptimizer::MpcOptimizer(const MpcConfig& cfg)
    : warm_(static_cast<std::size_t>(cfg.horizon), Eigen::Vector2d::Zero()) {}

void MpcOptimizer::conform(const MpcConfig& cfg) {
    warm_.resize(static_cast<std::size_t>(cfg.horizon), Eigen::Vector2d::Zero());
    for (auto& u : warm_) {
        u = clamp_box(u, cfg.u_bound);
    }
}

Solution MpcOptimizer::solve(const UavState& x0, std::span<const ReferencePoint> ref,
                             const MpcConfig& cfg) {
    conform(cfg);
    Solution sol = optimize(x0, ref, cfg, warm_);
    // Shift by one step, repeating the last input.
    for (std::size_t k = 0; k + 1 < sol.u_seq.size(); ++k) {
        warm_[k] = sol.u_seq[k + 1];
    }
    warm_.back() = sol.u_seq.back();
    return sol;
}

}  // namespace elmpc::mpc
