#pragma once

#include <optional>
#include <string_view>

#include "elmpc/idt/baseline.hpp"
#include "elmpc/info/metrics.hpp"

namespace elmpc::idt {

enum class Severity { Minor, Major };

enum class Cause { ConstraintRestriction, ModelMismatch, PredictionModelError, EnvironmentShift };

std::string_view to_string(Severity s);
std::string_view to_string(Cause c);

/// Least-squares slopes of the metrics over the recent window, bits/cycle.
struct MetricGradients {
    double psi = 0.0;
    double asymmetry = 0.0;
    double memory = 0.0;
};

struct MetricDeviation {
    double value = 0.0;
    double gap = 0.0;       // value - baseline mean
    double gradient = 0.0;
    bool breached = false;
};

struct Deviation {
    MetricDeviation psi;
    MetricDeviation asymmetry;
    MetricDeviation memory;
    bool asymmetry_above = false;
    bool asymmetry_below = false;
    Severity severity = Severity::Minor;

    int breach_count() const {
        return int(psi.breached) + int(asymmetry.breached) + int(memory.breached);
    }
};

/// Returns a Deviation iff psi or memory falls below its threshold or
/// asymmetry leaves its band. Major when any breached gap exceeds 2k band-std
/// or when two or more metrics breach together.
std::optional<Deviation> detect(const info::EntanglementMetrics& current,
                                const MetricGradients& gradients, const Baseline& baseline);

struct Diagnosis {
    Cause cause = Cause::ModelMismatch;
    double psi = 0.0;
    double asymmetry = 0.0;
    double memory = 0.0;
};

/// Decision table, first match wins:
///   asymmetry above band -> constraint restriction
///   asymmetry below band -> prediction-model error
///   memory breach        -> environment shift
///   psi breach           -> model mismatch
Diagnosis diagnose(const Deviation& d);

}  // namespace elmpc::idt
