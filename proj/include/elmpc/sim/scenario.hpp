#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "elmpc/mpc/trajectory.hpp"
#include "elmpc/mpc/types.hpp"

namespace elmpc::sim {

enum class ReferenceKind { Line, Circle, FigureEight };

struct ReferenceSpec {
    ReferenceKind kind = ReferenceKind::Circle;
    // Line: waypoints visited in order at constant speed, holding the last.
    std::vector<Eigen::Vector2d> waypoints;
    double speed = 1.0;  // m/s
    // Circle and figure-eight.
    Eigen::Vector2d center = Eigen::Vector2d::Zero();
    double radius = 5.0;   // m; figure-eight half-width
    double period = 20.0;  // s
};

enum class EventKind { WindGust, DragShift, ActuatorDerate };

struct ScenarioEvent {
    std::int64_t onset = 0;
    EventKind kind = EventKind::DragShift;
    Eigen::Vector2d wind = Eigen::Vector2d::Zero();  // wind_gust
    double value = 0.0;                              // drag_shift: drag, actuator_derate: scale
    std::optional<std::int64_t> end;                 // exclusive; absent means until the run ends
};

struct NoiseSpec {
    double process_std = 0.0;                         // m/s^2
    std::array<double, 4> measurement_std{0, 0, 0, 0};  // px, py, vx, vy
};

struct ScenarioSpec {
    std::string name = "scenario";
    std::int64_t duration = 1000;  // cycles
    std::uint64_t seed = 1;
    ReferenceSpec reference;
    std::vector<ScenarioEvent> events;
    NoiseSpec noise;
    double plant_drag = 0.1;
    double calibration_fraction = 0.2;
    // Parameter blocks applied on top of the controller and twin defaults.
    nlohmann::json mpc_overrides = nlohmann::json::object();
    nlohmann::json idt_overrides = nlohmann::json::object();

    /// Throws ConfigError when an invariant is violated.
    void validate() const;
    /// First cycle after the event-free calibration prefix.
    std::int64_t calibration_end() const;
    /// Earliest event onset, if any.
    std::optional<std::int64_t> first_onset() const;
};

std::string_view to_string(ReferenceKind k);
std::string_view to_string(EventKind k);

ScenarioSpec scenario_from_json(const nlohmann::json& j);
nlohmann::json scenario_to_json(const ScenarioSpec& s);
/// Throws ConfigError naming the path when it cannot be read or parsed.
ScenarioSpec load_scenario(const std::filesystem::path& path);

/// Samples the reference every ts seconds over [0, duration_s].
mpc::Trajectory build_reference(const ReferenceSpec& spec, double ts, double duration_s);

/// True-plant parameters in force at a cycle, events applied in list order.
mpc::PlantParams plant_at(const ScenarioSpec& spec, std::int64_t cycle);

}  // namespace elmpc::sim
