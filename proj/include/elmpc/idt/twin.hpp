#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <vector>

#include "elmpc/idt/baseline.hpp"
#include "elmpc/idt/config.hpp"
#include "elmpc/idt/detection.hpp"
#include "elmpc/idt/feedback.hpp"
#include "elmpc/info/triple_histogram.hpp"
#include "elmpc/mpc/features.hpp"

namespace elmpc::idt {

/// Everything the twin produced for one ingested triple.
struct CycleReport {
    std::int64_t cycle = 0;
    bool accepted = false;
    std::optional<info::EntanglementMetrics> metrics;
    MetricGradients gradients;
    std::optional<Deviation> deviation;
    std::optional<Diagnosis> diagnosis;
    std::optional<AdaptiveSignal> signal;
    std::optional<Alert> alert;
};

/// Information digital twin: ingest, metric computation, baseline,
/// misalignment detection, diagnosis and feedback generation. Sequential
/// consumer of triples; never touches the controller's config, only reads it.
class InformationTwin {
public:
    InformationTwin(IdtConfig cfg, FeatureSchemes schemes);

    /// Discretizes and pushes one triple. Non-finite features are rejected
    /// and counted; returns whether the triple was accepted.
    bool ingest(const mpc::RawTriple& raw);

    /// ingest, then metrics, then (with a baseline) detect, diagnose and
    /// feedback subject to the cooldown. Without a baseline, ready metrics
    /// are recorded for calibration.
    CycleReport process(const mpc::RawTriple& raw, const mpc::MpcConfig& current);

    /// Builds the baseline from the metrics recorded so far and switches to monitoring.
    const Baseline& finish_calibration();
    void set_baseline(Baseline b);
    const std::optional<Baseline>& baseline() const noexcept { return baseline_; }

    const info::TripleHistogram& histogram() const noexcept { return hist_; }
    const FeatureSchemes& schemes() const noexcept { return schemes_; }
    const IdtConfig& config() const noexcept { return cfg_; }
    std::size_t rejected() const noexcept { return rejected_; }
    const std::vector<info::EntanglementMetrics>& calibration_stream() const noexcept {
        return calibration_;
    }

private:
    MetricGradients update_gradients(std::int64_t cycle, const info::EntanglementMetrics& m);

    IdtConfig cfg_;
    FeatureSchemes schemes_;
    info::TripleHistogram hist_;
    std::size_t rejected_ = 0;

    std::vector<info::EntanglementMetrics> calibration_;
    std::int64_t calibration_begin_ = -1;
    std::int64_t calibration_end_ = -1;
    std::optional<Baseline> baseline_;

    struct Sample {
        double cycle, psi, asymmetry, memory;
    };
    std::deque<Sample> recent_;

    std::optional<std::int64_t> last_signal_;
    std::optional<std::int64_t> last_alert_;
};

/// Least-squares slope of y over x. Zero for fewer than two points.
double least_squares_slope(std::span<const double> x, std::span<const double> y);

}  // namespace elmpc::idt
