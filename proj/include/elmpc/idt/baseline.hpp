#pragma once

#include <cstdint>
#include <optional>
#include <span>

#include <json.hpp>

#include "elmpc/idt/config.hpp"
#include "elmpc/info/metrics.hpp"

namespace elmpc::idt {

struct MetricStats {
    double mean = 0.0;
    double std = 0.0;  // population

    friend bool operator==(const MetricStats&, const MetricStats&) = default;
};

/// Metric statistics over a period of verified healthy operation, and the
/// detection thresholds derived from them.
struct Baseline {
    MetricStats psi;
    MetricStats asymmetry;
    MetricStats memory;

    double k = 2.0;
    double std_floor = 0.0;

    double psi_threshold = 0.0;     // psi below this is a breach
    double memory_threshold = 0.0;  // memory below this is a breach
    double asymmetry_low = 0.0;     // asymmetry outside [low, high] is a breach
    double asymmetry_high = 0.0;

    std::int64_t span_begin = 0;  // first and last cycle of the calibration stream
    std::int64_t span_end = 0;
    std::size_t samples = 0;

    std::optional<FeatureSchemes> schemes;

    /// std actually used for thresholds: max(std, std_floor).
    double band_std(const MetricStats& s) const;

    friend bool operator==(const Baseline&, const Baseline&);
};

/// Per-metric mean/std and thresholds (mean - k std, mean +- k std for asymmetry).
/// Throws CalibrationError when the stream is shorter than cfg.calibration_length
/// or shorter than cfg.min_samples.
Baseline calibrate(std::span<const info::EntanglementMetrics> stream, const IdtConfig& cfg,
                   std::int64_t span_begin = 0, std::int64_t span_end = 0);

nlohmann::json baseline_to_json(const Baseline& b);
Baseline baseline_from_json(const nlohmann::json& j);

}  // namespace elmpc::idt
