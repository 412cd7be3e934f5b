#include "elmpc/mpc/dynamics.hpp"

#include <string>

#include "elmpc/error.hpp"

namespace elmpc::mpc {

namespace {

UavState euler(const UavState& x, const Eigen::Vector2d& accel, double ts) {
    UavState next;
    next.position = x.position + x.velocity * ts;
    next.velocity = x.velocity + accel * ts;
    return next;
}

}  // namespace

UavState model_step(const UavState& x, const Eigen::Vector2d& u, double drag, double ts) {
    const Eigen::Vector2d accel = u - drag * x.velocity;
    return euler(x, accel, ts);
}

UavState step_plant(const UavState& x, const ControlInput& u, const PlantParams& params, double ts,
                    NoiseStream& noise) {
    const Eigen::Vector2d realized = params.actuator_scale * u.accel;
    Eigen::Vector2d accel = realized - params.drag * x.velocity;
    accel += params.wind;
    const double nx = noise.gaussian(params.process_noise_std);
    const double ny = noise.gaussian(params.process_noise_std);
    accel += Eigen::Vector2d(nx, ny);
    return euler(x, accel, ts);
}

std::vector<UavState> predict_horizon(const UavState& x0, std::span<const Eigen::Vector2d> u_seq,
                                      const MpcConfig& cfg) {
    if (u_seq.size() != static_cast<std::size_t>(cfg.horizon)) {
        throw ConfigError("input sequence length " + std::to_string(u_seq.size()) +
                          " does not match horizon " + std::to_string(cfg.horizon));
    }
    std::vector<UavState> out;
    out.reserve(u_seq.size());
    UavState x = x0;
    for (const auto& u : u_seq) {
        x = model_step(x, u, cfg.drag, cfg.ts);
        out.push_back(x);
    }
    return out;
}

}  // namespace elmpc::mpc
