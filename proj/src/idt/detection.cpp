#include "elmpc/idt/detection.hpp"

#include <cmath>

namespace elmpc::idt {

std::string_view to_string(Severity s) {
    return s == Severity::Major ? "major" : "minor";
}

std::string_view to_string(Cause c) {
    switch (c) {
        case Cause::ConstraintRestriction: return "constraint_restriction";
        case Cause::ModelMismatch: return "model_mismatch";
        case Cause::PredictionModelError: return "prediction_model_error";
        case Cause::EnvironmentShift: return "environment_shift";
    }
    return "unknown";
}

std::optional<Deviation> detect(const info::EntanglementMetrics& current,
                                const MetricGradients& gradients, const Baseline& baseline) {
    Deviation d;
    d.psi = MetricDeviation{current.psi, current.psi - baseline.psi.mean, gradients.psi,
                            current.psi < baseline.psi_threshold};
    d.memory = MetricDeviation{current.memory, current.memory - baseline.memory.mean,
                               gradients.memory, current.memory < baseline.memory_threshold};
    d.asymmetry_above = current.asymmetry > baseline.asymmetry_high;
    d.asymmetry_below = current.asymmetry < baseline.asymmetry_low;
    d.asymmetry = MetricDeviation{current.asymmetry, current.asymmetry - baseline.asymmetry.mean,
                                  gradients.asymmetry, d.asymmetry_above || d.asymmetry_below};

    if (d.breach_count() == 0) {
        return std::nullopt;
    }

    const double major_factor = 2.0 * baseline.k;
    auto large = [&](const MetricDeviation& m, const MetricStats& s) {
        return m.breached && std::abs(m.gap) > major_factor * baseline.band_std(s);
    };
    const bool any_large = large(d.psi, baseline.psi) || large(d.memory, baseline.memory) ||
                           large(d.asymmetry, baseline.asymmetry);
    d.severity = (any_large || d.breach_count() >= 2) ? Severity::Major : Severity::Minor;
    return d;
}

Diagnosis diagnose(const Deviation& d) {
    Diagnosis out;
    out.psi = d.psi.value;
    out.asymmetry = d.asymmetry.value;
    out.memory = d.memory.value;
    if (d.asymmetry_above) {
        out.cause = Cause::ConstraintRestriction;
    } else if (d.asymmetry_below) {
        out.cause = Cause::PredictionModelError;
    } else if (d.memory.breached) {
        out.cause = Cause::EnvironmentShift;
    } else {
        out.cause = Cause::ModelMismatch;
    }
    return out;
}

}  // namespace elmpc::idt
