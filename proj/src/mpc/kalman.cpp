#include "elmpc/mpc/kalman.hpp"

#include "elmpc/error.hpp"

namespace elmpc::mpc {

Eigen::Matrix4d transition_matrix(const MpcConfig& cfg) {
    Eigen::Matrix4d f = Eigen::Matrix4d::Identity();
    f(0, 2) = cfg.ts;
    f(1, 3) = cfg.ts;
    f(2, 2) = 1.0 - cfg.drag * cfg.ts;
    f(3, 3) = 1.0 - cfg.drag * cfg.ts;
    return f;
}

Estimate kalman_predict(const Estimate& prior, const ControlInput& u, const MpcConfig& cfg) {
    const Eigen::Matrix4d f = transition_matrix(cfg);
    Eigen::Vector4d bu = Eigen::Vector4d::Zero();
    bu.tail<2>() = cfg.ts * u.accel;

    Estimate out;
    out.mean = f * prior.mean + bu;
    Eigen::Vector4d q;
    q << cfg.q[0], cfg.q[1], cfg.q[2], cfg.q[3];
    out.covariance = f * prior.covariance * f.transpose();
    out.covariance.diagonal() += q;
    return out;
}

Estimate kalman_update(const Estimate& predicted, const Eigen::Vector4d& measurement,
                       const Eigen::Matrix4d& r) {
    const Eigen::Matrix4d s = predicted.covariance + r;
    Eigen::LDLT<Eigen::Matrix4d> ldlt(s);
    if (ldlt.info() != Eigen::Success || !ldlt.isPositive() ||
        ldlt.vectorD().minCoeff() <= 1e-300) {
        throw DegeneracyError("singular innovation covariance");
    }
    // K = P S^-1, S symmetric
    const Eigen::Matrix4d gain = ldlt.solve(predicted.covariance).transpose();

    Estimate out;
    out.mean = predicted.mean + gain * (measurement - predicted.mean);
    const Eigen::Matrix4d i_k = Eigen::Matrix4d::Identity() - gain;
    // Joseph form keeps the posterior PSD.
    out.covariance = i_k * predicted.covariance * i_k.transpose() + gain * r * gain.transpose();
    out.covariance = 0.5 * (out.covariance + out.covariance.transpose()).eval();
    return out;
}

Estimate kalman_step(const Estimate& prior, const ControlInput& u,
                     const std::optional<Eigen::Vector4d>& measurement, const MpcConfig& cfg,
                     const Eigen::Matrix4d& r) {
    Estimate predicted = kalman_predict(prior, u, cfg);
    if (!measurement) {
        return predicted;
    }
    return kalman_update(predicted, *measurement, r);
}

}  // namespace elmpc::mpc
