#pragma once

#include <string>

#include <json.hpp>

#include "elmpc/idt/config.hpp"
#include "elmpc/mpc/types.hpp"
#include "elmpc/sim/scenario.hpp"

namespace elmpc::sim {

// Parameter names accepted in config documents and `--set` overrides:
//   mpc: Np, Np_min, Ts, Ts_min, u_bound, C_drag, Q, w_pos, w_vel, w_u, iterations, step_size
//   idt: alpha, beta, gamma, delta, epsilon, k, std_floor, gradient_window,
//        calibration_length, cooldown, window, min_samples
// Np, Ts, u_bound, C_drag and Q set both the nominal and the active value.

nlohmann::json mpc_config_to_json(const mpc::MpcConfig& cfg);
nlohmann::json idt_config_to_json(const idt::IdtConfig& cfg);

/// Applies the keys present in j; unknown keys and type errors throw ConfigError.
/// The result is not validated.
void apply_mpc_json(mpc::MpcConfig& cfg, const nlohmann::json& j);
void apply_idt_json(idt::IdtConfig& cfg, const nlohmann::json& j);

/// Run configuration: controller and twin parameters together.
struct Configs {
    mpc::MpcConfig mpc;
    idt::IdtConfig idt;

    void validate() const;
};

/// Defaults with the scenario's own parameter blocks applied.
Configs scenario_configs(const ScenarioSpec& scenario);

/// Parses "section.key=value" with section in {mpc, idt}. The value is read as
/// JSON when possible (numbers, arrays), otherwise as a string.
void apply_override(Configs& cfgs, const std::string& assignment);

}  // namespace elmpc::sim
