#include "elmpc/sim/config_io.hpp"

#include "elmpc/error.hpp"

namespace elmpc::sim {

using nlohmann::json;

namespace {

template <typename T>
T read(const json& v, const std::string& key) {
    try {
        if constexpr (std::is_integral_v<T>) {
            if (!v.is_number_integer()) throw ConfigError("");
            if constexpr (std::is_unsigned_v<T>) {
                if (v.get<long long>() < 0) throw ConfigError("");
            }
        } else if constexpr (std::is_floating_point_v<T>) {
            if (!v.is_number()) throw ConfigError("");
        }
        return v.get<T>();
    } catch (const std::exception&) {
        throw ConfigError("bad value for '" + key + "': " + v.dump());
    }
}

}  // namespace

json mpc_config_to_json(const mpc::MpcConfig& c) {
    return json{
        {"Np", c.horizon_nominal},   {"Np_min", c.horizon_min}, {"Ts", c.ts_nominal},
        {"Ts_min", c.ts_min},        {"u_bound", c.u_bound_nominal}, {"C_drag", c.drag_nominal},
        {"Q", c.q_nominal},          {"w_pos", c.w_pos},        {"w_vel", c.w_vel},
        {"w_u", c.w_u},              {"iterations", c.iterations}, {"step_size", c.step_size},
    };
}

json idt_config_to_json(const idt::IdtConfig& c) {
    return json{
        {"alpha", c.alpha},
        {"beta", c.beta},
        {"gamma", c.gamma},
        {"delta", c.delta},
        {"epsilon", c.epsilon},
        {"k", c.k},
        {"std_floor", c.std_floor},
        {"gradient_window", c.gradient_window},
        {"calibration_length", c.calibration_length},
        {"cooldown", c.cooldown},
        {"window", c.window},
        {"min_samples", c.min_samples},
    };
}

void apply_mpc_json(mpc::MpcConfig& c, const json& j) {
    if (!j.is_object()) throw ConfigError("mpc config must be an object");
    for (const auto& [key, v] : j.items()) {
        if (key == "Np") {
            c.horizon_nominal = c.horizon = read<int>(v, key);
        } else if (key == "Np_min") {
            c.horizon_min = read<int>(v, key);
        } else if (key == "Ts") {
            c.ts_nominal = c.ts = read<double>(v, key);
        } else if (key == "Ts_min") {
            c.ts_min = read<double>(v, key);
        } else if (key == "u_bound") {
            c.u_bound_nominal = c.u_bound = read<double>(v, key);
        } else if (key == "C_drag") {
            c.drag_nominal = c.drag = read<double>(v, key);
        } else if (key == "Q") {
            if (!v.is_array() || v.size() != 4) throw ConfigError("'Q' must be a 4-element array");
            for (std::size_t i = 0; i < 4; ++i) c.q_nominal[i] = read<double>(v[i], key);
            c.q = c.q_nominal;
        } else if (key == "w_pos") {
            c.w_pos = read<double>(v, key);
        } else if (key == "w_vel") {
            c.w_vel = read<double>(v, key);
        } else if (key == "w_u") {
            c.w_u = read<double>(v, key);
        } else if (key == "iterations") {
            c.iterations = read<int>(v, key);
        } else if (key == "step_size") {
            c.step_size = read<double>(v, key);
        } else {
            throw ConfigError("unknown mpc parameter '" + key + "'");
        }
    }
}

void apply_idt_json(idt::IdtConfig& c, const json& j) {
    if (!j.is_object()) throw ConfigError("idt config must be an object");
    for (const auto& [key, v] : j.items()) {
        if (key == "alpha") {
            c.alpha = read<double>(v, key);
        } else if (key == "beta") {
            c.beta = read<double>(v, key);
        } else if (key == "gamma") {
            c.gamma = read<double>(v, key);
        } else if (key == "delta") {
            c.delta = read<double>(v, key);
        } else if (key == "epsilon") {
            c.epsilon = read<double>(v, key);
        } else if (key == "k") {
            c.k = read<double>(v, key);
        } else if (key == "std_floor") {
            c.std_floor = read<double>(v, key);
        } else if (key == "gradient_window") {
            c.gradient_window = read<std::size_t>(v, key);
        } else if (key == "calibration_length") {
            c.calibration_length = read<std::size_t>(v, key);
        } else if (key == "cooldown") {
            c.cooldown = read<std::size_t>(v, key);
        } else if (key == "window") {
            c.window = read<std::size_t>(v, key);
        } else if (key == "min_samples") {
            c.min_samples = read<std::size_t>(v, key);
        } else {
            throw ConfigError("unknown idt parameter '" + key + "'");
        }
    }
}

void Configs::validate() const {
    mpc.validate();
    idt.validate();
}

Configs scenario_configs(const ScenarioSpec& scenario) {
    Configs c;
    apply_mpc_json(c.mpc, scenario.mpc_overrides);
    apply_idt_json(c.idt, scenario.idt_overrides);
    return c;
}

void apply_override(Configs& cfgs, const std::string& assignment) {
    const auto eq = assignment.find('=');
    const auto dot = assignment.find('.');
    if (eq == std::string::npos || dot == std::string::npos || dot > eq) {
        throw ConfigError("override must look like section.key=value, got '" + assignment + "'");
    }
    const std::string section = assignment.substr(0, dot);
    const std::string key = assignment.substr(dot + 1, eq - dot - 1);
    const std::string text = assignment.substr(eq + 1);
    json value = json::parse(text, nullptr, false);
    if (value.is_discarded()) value = text;
    const json doc{{key, value}};
    if (section == "mpc") {
        apply_mpc_json(cfgs.mpc, doc);
    } else if (section == "idt") {
        apply_idt_json(cfgs.idt, doc);
    } else {
        throw ConfigError("unknown override section '" + section + "'");
    }
}

}  // namespace elmpc::sim
