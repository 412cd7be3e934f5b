#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "elmpc/idt/baseline.hpp"
#include "elmpc/idt/detection.hpp"
#include "elmpc/idt/feedback.hpp"
#include "elmpc/info/metrics.hpp"
#include "elmpc/mpc/trajectory.hpp"
#include "elmpc/mpc/types.hpp"
#include "elmpc/sim/config_io.hpp"
#include "elmpc/sim/scenario.hpp"

namespace elmpc::sim {

struct CycleRow {
    std::int64_t cycle = 0;
    double time = 0.0;  // s
    mpc::UavState truth;
    mpc::UavState estimate;
    mpc::ReferencePoint reference;
    Eigen::Vector2d u = Eigen::Vector2d::Zero();  // commanded acceleration
    double cost = 0.0;
    bool saturated = false;

    // Parameters in force during this cycle.
    int horizon = 0;
    double ts = 0.0;
    double u_bound = 0.0;
    double drag = 0.0;
    double q_scale = 1.0;

    // Twin output for the triple completed at this cycle.
    std::optional<info::EntanglementMetrics> metrics;
    std::optional<idt::Severity> deviation;
    std::optional<idt::Cause> diagnosis;
    std::optional<idt::AdaptiveSignal> signal;
    bool alert = false;

    double position_error() const { return (truth.position - reference.position).norm(); }
    double velocity_error() const { return (truth.velocity - reference.velocity).norm(); }
};

enum class IdtMode { Interleaved, Concurrent };

struct RunOptions {
    bool el_enabled = true;
    IdtMode mode = IdtMode::Interleaved;
    // Skips calibration and monitors against this baseline from the first ready sample.
    std::optional<idt::Baseline> baseline;
    // Stop as soon as the baseline has been formed.
    bool calibration_only = false;
};

struct RunLog {
    ScenarioSpec scenario;
    Configs configs;
    bool el_enabled = true;
    IdtMode mode = IdtMode::Interleaved;
    std::vector<CycleRow> rows;

    std::optional<idt::Baseline> baseline;
    std::vector<idt::Alert> alerts;
    std::size_t rejected_triples = 0;

    bool diverged = false;
    std::string error;

    // Wall-clock measurements, kept apart from the deterministic rows.
    std::vector<double> idt_us;  // per processed triple: ingest + metrics + detection
    std::vector<double> mpc_us;  // per cycle: estimator + optimizer
    std::size_t peak_table_bytes = 0;
    std::size_t window_bytes = 0;
};

/// Closed loop: measure, estimate, optimize, apply the first input to the
/// plant, hand the completed triple to the twin. With EL enabled a signal
/// issued at cycle k takes effect at the start of cycle k+1; with EL disabled
/// the twin does not run. Divergence stops the run and flags the partial log.
/// Throws CalibrationError when the calibration prefix yields no baseline.
RunLog run_closed_loop(const ScenarioSpec& scenario, const Configs& configs, const RunOptions& opts,
                       const idt::FeatureSchemes& schemes = idt::FeatureSchemes::defaults());

/// Reference covering a run of the scenario under the given controller config.
mpc::Trajectory scenario_reference(const ScenarioSpec& scenario, const mpc::MpcConfig& cfg);

}  // namespace elmpc::sim
