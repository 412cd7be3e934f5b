#include <cmath>
#include <string>

#include "elmpc/error.hpp"
#include "elmpc/mpc/types.hpp"

namespace elmpc::mpc {

namespace {

void require(bool ok, const std::string& what) {
    if (!ok) {
        throw ConfigError("invalid mpc config: " + what);
    }
}

bool finite_all(std::initializer_list<double> xs) {
    for (double x : xs) {
        if (!std::isfinite(x)) return false;
    }
    return true;
}

}  // namespace

void MpcConfig::validate() const {
    require(finite_all({ts_nominal, ts_min, ts, u_bound_nominal, u_bound, drag_nominal, drag, w_pos,
                        w_vel, w_u, step_size}),
            "non-finite parameter");
    require(horizon_min >= 1, "Np_min must be >= 1");
    require(horizon_nominal >= horizon_min, "Np_nominal must be >= Np_min");
    require(horizon >= horizon_min, "Np must be >= Np_min");
    require(ts_min > 0.0, "Ts_min must be > 0");
    require(ts_nominal >= ts_min, "Ts_nominal must be >= Ts_min");
    require(ts >= ts_min, "Ts must be >= Ts_min");
    require(u_bound_nominal > 0.0 && u_bound > 0.0, "u_bound must be > 0");
    require(drag_nominal >= 0.0 && drag >= 0.0, "C_drag must be >= 0");
    for (std::size_t i = 0; i < 4; ++i) {
        require(std::isfinite(q_nominal[i]) && q_nominal[i] > 0.0, "Q_nominal diagonal must be > 0");
        require(std::isfinite(q[i]) && q[i] > 0.0, "Q diagonal must be > 0");
    }
    require(w_pos >= 0.0 && w_vel >= 0.0 && w_u > 0.0, "weights must be >= 0 and w_u > 0");
    require(iterations >= 1, "iterations must be >= 1");
    require(step_size > 0.0, "step_size must be > 0");
}

void MpcConfig::reset_to_nominal() {
    horizon = horizon_nominal;
    ts = ts_nominal;
    u_bound = u_bound_nominal;
    drag = drag_nominal;
    q = q_nominal;
}

void MpcConfig::set_q_scale(double scale) {
    for (std::size_t i = 0; i < 4; ++i) {
        q[i] = q_nominal[i] * scale;
    }
}

}  // namespace elmpc::mpc
