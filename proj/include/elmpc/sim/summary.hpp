#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>

#include "elmpc/sim/runner.hpp"

namespace elmpc::sim {

struct LatencyStats {
    std::size_t count = 0;
    double median = 0.0;  // microseconds
    double p95 = 0.0;
    double max = 0.0;
};

LatencyStats latency_stats(std::span<const double> micros);

struct RunSummary {
    std::size_t rows = 0;
    bool diverged = false;
    std::string error;

    double rmse = 0.0;  // position error, m
    std::optional<double> rmse_pre;   // [0, onset)
    std::optional<double> rmse_post;  // [onset, end)
    double velocity_rmse = 0.0;
    std::size_t saturation_count = 0;

    std::size_t deviations = 0;
    std::size_t signals = 0;
    std::size_t alerts = 0;
    std::optional<std::int64_t> first_deviation;

    // Event-relative quantities; absent without an onset or without the event they time.
    std::optional<std::int64_t> onset;
    std::size_t false_alarms = 0;                // deviations before the onset
    std::optional<std::int64_t> detection_cycle;  // first deviation at or after the onset
    std::optional<std::int64_t> detection_latency;
    std::optional<std::int64_t> psi_crossing;   // first cycle at or after the onset with psi below threshold
    std::optional<std::int64_t> rmse_crossing;  // windowed RMSE first above 2x the pre-event RMSE
    std::optional<std::int64_t> psi_to_rmse_lag;  // rmse_crossing - psi_crossing
    std::optional<bool> detection_precedes_rmse;

    LatencyStats idt_latency;
    LatencyStats mpc_latency;
    std::size_t peak_table_bytes = 0;
};

/// Root mean square; 0 for an empty sequence.
double rmse(std::span<const double> residuals);

/// First cycle c >= onset at which the RMSE of errors over the trailing
/// window (c - window, c] exceeds factor * reference.
std::optional<std::int64_t> windowed_rmse_crossing(std::span<const double> errors, std::int64_t onset,
                                                   std::size_t window, double reference,
                                                   double factor = 2.0);

/// rmse_window is the trailing window of the RMSE crossing test.
RunSummary summarize(const RunLog& log, std::optional<std::int64_t> onset, std::size_t rmse_window);

/// Same scenario and seed with EL on and off.
struct Comparison {
    RunLog el_on_log;
    RunLog el_off_log;
    RunSummary el_on;
    RunSummary el_off;
};

Comparison compare(const ScenarioSpec& scenario, const Configs& configs,
                   IdtMode mode = IdtMode::Interleaved);

}  // namespace elmpc::sim
