#include "elmpc/sim/scenario.hpp"

#include <cmath>
#include <fstream>
#include <numbers>

#include "elmpc/error.hpp"

namespace elmpc::sim {

using nlohmann::json;

namespace {

void require(bool ok, const std::string& what) {
    if (!ok) {
        throw ConfigError("invalid scenario: " + what);
    }
}

Eigen::Vector2d vec2(const json& j) {
    if (!j.is_array() || j.size() != 2) {
        throw ConfigError("expected a 2-element array, got " + j.dump());
    }
    return Eigen::Vector2d(j[0].get<double>(), j[1].get<double>());
}

json vec2_json(const Eigen::Vector2d& v) { return json::array({v.x(), v.y()}); }

ReferenceKind reference_kind(const std::string& s) {
    if (s == "line") return ReferenceKind::Line;
    if (s == "circle") return ReferenceKind::Circle;
    if (s == "figure8") return ReferenceKind::FigureEight;
    throw ConfigError("unknown reference kind '" + s + "'");
}

EventKind event_kind(const std::string& s) {
    if (s == "wind_gust") return EventKind::WindGust;
    if (s == "drag_shift") return EventKind::DragShift;
    if (s == "actuator_derate") return EventKind::ActuatorDerate;
    throw ConfigError("unknown event kind '" + s + "'");
}

void check_keys(const json& j, std::initializer_list<std::string_view> allowed, const char* where) {
    for (const auto& [key, _] : j.items()) {
        bool known = false;
        for (auto a : allowed) known = known || key == a;
        if (!known) {
            throw ConfigError(std::string("unknown key '") + key + "' in " + where);
        }
    }
}

}  // namespace

std::string_view to_string(ReferenceKind k) {
    switch (k) {
        case ReferenceKind::Line: return "line";
        case ReferenceKind::Circle: return "circle";
        case ReferenceKind::FigureEight: return "figure8";
    }
    return "unknown";
}

std::string_view to_string(EventKind k) {
    switch (k) {
        case EventKind::WindGust: return "wind_gust";
        case EventKind::DragShift: return "drag_shift";
        case EventKind::ActuatorDerate: return "actuator_derate";
    }
    return "unknown";
}

void ScenarioSpec::validate() const {
    require(duration >= 1, "duration must be >= 1 cycle");
    require(calibration_fraction > 0.0 && calibration_fraction < 1.0,
            "calibration_fraction must be in (0, 1)");
    require(std::isfinite(plant_drag) && plant_drag >= 0.0, "plant drag must be >= 0");
    require(std::isfinite(noise.process_std) && noise.process_std >= 0.0,
            "process noise std must be >= 0");
    for (double s : noise.measurement_std) {
        require(std::isfinite(s) && s >= 0.0, "measurement noise std must be >= 0");
    }
    const auto& r = reference;
    switch (r.kind) {
        case ReferenceKind::Line:
            require(!r.waypoints.empty(), "line reference needs at least one waypoint");
            require(std::isfinite(r.speed) && r.speed > 0.0, "line speed must be positive");
            for (const auto& w : r.waypoints) require(w.allFinite(), "waypoints must be finite");
            break;
        case ReferenceKind::Circle:
        case ReferenceKind::FigureEight:
            require(std::isfinite(r.radius) && r.radius >= 0.0, "radius must be >= 0");
            require(std::isfinite(r.period) && r.period > 0.0, "period must be positive");
            require(r.center.allFinite(), "center must be finite");
            break;
    }
    for (const auto& e : events) {
        require(e.onset >= 0 && e.onset < duration, "event onset outside the run");
        require(!e.end || *e.end > e.onset, "event end must follow its onset");
        require(e.onset >= calibration_end(), "events must not fall inside the calibration prefix");
        switch (e.kind) {
            case EventKind::WindGust: require(e.wind.allFinite(), "wind must be finite"); break;
            case EventKind::DragShift:
                require(std::isfinite(e.value) && e.value >= 0.0, "shifted drag must be >= 0");
                break;
            case EventKind::ActuatorDerate:
                require(std::isfinite(e.value) && e.value > 0.0, "derate scale must be positive");
                break;
        }
    }
}

std::int64_t ScenarioSpec::calibration_end() const {
    return static_cast<std::int64_t>(std::floor(calibration_fraction * static_cast<double>(duration)));
}

std::optional<std::int64_t> ScenarioSpec::first_onset() const {
    std::optional<std::int64_t> out;
    for (const auto& e : events) {
        if (!out || e.onset < *out) out = e.onset;
    }
    return out;
}

ScenarioSpec scenario_from_json(const json& j) {
    try {
        check_keys(j, {"name", "duration", "seed", "reference", "events", "noise", "plant",
                       "calibration_fraction", "mpc", "idt"},
                   "scenario");
        ScenarioSpec s;
        s.name = j.value("name", s.name);
        s.duration = j.at("duration").get<std::int64_t>();
        s.seed = j.value("seed", s.seed);
        s.calibration_fraction = j.value("calibration_fraction", s.calibration_fraction);

        const auto& r = j.at("reference");
        check_keys(r, {"kind", "waypoints", "speed", "center", "radius", "period"}, "reference");
        s.reference.kind = reference_kind(r.at("kind").get<std::string>());
        if (r.contains("waypoints")) {
            for (const auto& w : r["waypoints"]) s.reference.waypoints.push_back(vec2(w));
        }
        s.reference.speed = r.value("speed", s.reference.speed);
        if (r.contains("center")) s.reference.center = vec2(r["center"]);
        s.reference.radius = r.value("radius", s.reference.radius);
        s.reference.period = r.value("period", s.reference.period);

        if (j.contains("events")) {
            for (const auto& e : j["events"]) {
                check_keys(e, {"onset", "kind", "wind", "value", "end"}, "event");
                ScenarioEvent ev;
                ev.onset = e.at("onset").get<std::int64_t>();
                ev.kind = event_kind(e.at("kind").get<std::string>());
                if (ev.kind == EventKind::WindGust) {
                    ev.wind = vec2(e.at("wind"));
                } else {
                    ev.value = e.at("value").get<double>();
                }
                if (e.contains("end")) ev.end = e["end"].get<std::int64_t>();
                s.events.push_back(ev);
            }
        }
        if (j.contains("noise")) {
            const auto& n = j["noise"];
            check_keys(n, {"process_std", "measurement_std"}, "noise");
            s.noise.process_std = n.value("process_std", 0.0);
            if (n.contains("measurement_std")) {
                const auto& m = n["measurement_std"];
                if (!m.is_array() || m.size() != 4) {
                    throw ConfigError("noise.measurement_std must have 4 entries");
                }
                for (std::size_t i = 0; i < 4; ++i) s.noise.measurement_std[i] = m[i].get<double>();
            }
        }
        if (j.contains("plant")) {
            check_keys(j["plant"], {"drag"}, "plant");
            s.plant_drag = j["plant"].value("drag", s.plant_drag);
        }
        if (j.contains("mpc")) s.mpc_overrides = j["mpc"];
        if (j.contains("idt")) s.idt_overrides = j["idt"];
        if (!s.mpc_overrides.is_object() || !s.idt_overrides.is_object()) {
            throw ConfigError("scenario 'mpc' and 'idt' blocks must be objects");
        }
        s.validate();
        return s;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("bad scenario document: ") + e.what());
    }
}

json scenario_to_json(const ScenarioSpec& s) {
    json ref{{"kind", to_string(s.reference.kind)}};
    if (s.reference.kind == ReferenceKind::Line) {
        json wps = json::array();
        for (const auto& w : s.reference.waypoints) wps.push_back(vec2_json(w));
        ref["waypoints"] = wps;
        ref["speed"] = s.reference.speed;
    } else {
        ref["center"] = vec2_json(s.reference.center);
        ref["radius"] = s.reference.radius;
        ref["period"] = s.reference.period;
    }
    json events = json::array();
    for (const auto& e : s.events) {
        json ej{{"onset", e.onset}, {"kind", to_string(e.kind)}};
        if (e.kind == EventKind::WindGust) {
            ej["wind"] = vec2_json(e.wind);
        } else {
            ej["value"] = e.value;
        }
        if (e.end) ej["end"] = *e.end;
        events.push_back(ej);
    }
    return json{
        {"name", s.name},
        {"duration", s.duration},
        {"seed", s.seed},
        {"calibration_fraction", s.calibration_fraction},
        {"reference", ref},
        {"events", events},
        {"noise", {{"process_std", s.noise.process_std}, {"measurement_std", s.noise.measurement_std}}},
        {"plant", {{"drag", s.plant_drag}}},
        {"mpc", s.mpc_overrides},
        {"idt", s.idt_overrides},
    };
}

ScenarioSpec load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open scenario file '" + path.string() + "'");
    }
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError("cannot parse scenario file '" + path.string() + "': " + e.what());
    }
    return scenario_from_json(j);
}

namespace {

mpc::ReferencePoint line_point(const ReferenceSpec& spec, double t) {
    const auto& wp = spec.waypoints;
    double remaining = spec.speed * t;
    for (std::size_t i = 0; i + 1 < wp.size(); ++i) {
        const Eigen::Vector2d seg = wp[i + 1] - wp[i];
        const double len = seg.norm();
        if (len == 0.0) continue;
        if (remaining < len) {
            const Eigen::Vector2d dir = seg / len;
            return mpc::ReferencePoint{wp[i] + remaining * dir, spec.speed * dir};
        }
        remaining -= len;
    }
    return mpc::ReferencePoint{wp.back(), Eigen::Vector2d::Zero()};
}

mpc::ReferencePoint periodic_point(const ReferenceSpec& spec, double t) {
    const double w = 2.0 * std::numbers::pi / spec.period;
    const double r = spec.radius;
    const double c = std::cos(w * t);
    const double s = std::sin(w * t);
    if (spec.kind == ReferenceKind::Circle) {
        return mpc::ReferencePoint{spec.center + Eigen::Vector2d(r * c, r * s),
                                   Eigen::Vector2d(-r * w * s, r * w * c)};
    }
    // Lemniscate of Gerono: (r sin wt, r sin wt cos wt).
    const double c2 = std::cos(2.0 * w * t);
    const double s2 = std::sin(2.0 * w * t);
    return mpc::ReferencePoint{spec.center + Eigen::Vector2d(r * s, 0.5 * r * s2),
                               Eigen::Vector2d(r * w * c, r * w * c2)};
}

}  // namespace

mpc::Trajectory build_reference(const ReferenceSpec& spec, double ts, double duration_s) {
    if (!(ts > 0.0) || !(duration_s >= 0.0)) {
        throw ConfigError("reference needs a positive interval and non-negative duration");
    }
    const auto count = static_cast<std::size_t>(std::ceil(duration_s / ts - 1e-9)) + 1;
    std::vector<mpc::ReferencePoint> samples;
    samples.reserve(count);
    for (std::size_t k = 0; k < count; ++k) {
        const double t = static_cast<double>(k) * ts;
        samples.push_back(spec.kind == ReferenceKind::Line ? line_point(spec, t)
                                                           : periodic_point(spec, t));
    }
    return mpc::Trajectory(ts, std::move(samples));
}

mpc::PlantParams plant_at(const ScenarioSpec& spec, std::int64_t cycle) {
    mpc::PlantParams p;
    p.drag = spec.plant_drag;
    p.process_noise_std = spec.noise.process_std;
    p.measurement_noise_std = spec.noise.measurement_std;
    for (const auto& e : spec.events) {
        if (cycle < e.onset || (e.end && cycle >= *e.end)) continue;
        switch (e.kind) {
            case EventKind::WindGust: p.wind += e.wind; break;
            case EventKind::DragShift: p.drag = e.value; break;
            case EventKind::ActuatorDerate: p.actuator_scale = e.value; break;
        }
    }
    return p;
}

}  // namespace elmpc::sim
