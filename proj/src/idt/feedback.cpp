#include "elmpc/idt/feedback.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace elmpc::idt {

namespace {

// Smallest Q multiplier a signal may carry; Q must stay positive definite.
constexpr double kMinQScale = 1e-3;

}  // namespace

void AdaptiveSignal::apply(mpc::MpcConfig& cfg) const {
    if (horizon) cfg.horizon = *horizon;
    if (u_bound) cfg.u_bound = *u_bound;
    if (drag) cfg.drag = *drag;
    if (ts) cfg.ts = *ts;
    if (q_scale) cfg.set_q_scale(*q_scale);
}

int adapt_horizon(const mpc::MpcConfig& cfg, double beta, double psi_baseline, double psi_current) {
    if (!(psi_baseline > 0.0) || !std::isfinite(psi_current)) {
        return std::max(cfg.horizon_min, cfg.horizon_nominal);
    }
    const double raw = cfg.horizon_nominal * (1.0 - beta * (psi_baseline - psi_current) / psi_baseline);
    if (!std::isfinite(raw)) {
        return cfg.horizon_min;
    }
    const double rounded = std::round(raw);
    if (rounded <= static_cast<double>(cfg.horizon_min)) {
        return cfg.horizon_min;
    }
    return static_cast<int>(std::min(rounded, 1e6));
}

double relax_input_bound(double u_bound_nominal, double alpha, double asymmetry_excess) {
    return (1.0 + alpha * std::max(0.0, asymmetry_excess)) * u_bound_nominal;
}

double adapt_drag(double drag_nominal, double gamma, double asymmetry_excess) {
    return drag_nominal * (1.0 - gamma * std::min(0.0, asymmetry_excess));
}

double adapt_sampling_time(const mpc::MpcConfig& cfg, double delta, double memory_baseline,
                           double memory_current) {
    if (!(memory_baseline > 0.0) || !std::isfinite(memory_current)) {
        return cfg.ts_nominal;
    }
    const double raw =
        cfg.ts_nominal * (1.0 - delta * (memory_baseline - memory_current) / memory_baseline);
    if (!std::isfinite(raw)) {
        return cfg.ts_min;
    }
    return std::max(cfg.ts_min, raw);
}

double adapt_q_scale(double epsilon, double memory_baseline, double memory_current) {
    if (!(memory_baseline > 0.0) || !std::isfinite(memory_current)) {
        return 1.0;
    }
    const double raw = 1.0 + epsilon * (memory_baseline - memory_current) / memory_baseline;
    return std::isfinite(raw) ? std::max(kMinQScale, raw) : 1.0;
}

Feedback generate_feedback(const Diagnosis& diagnosis, const Deviation& deviation,
                           const info::EntanglementMetrics& metrics, const Baseline& baseline,
                           const mpc::MpcConfig& cfg, const IdtConfig& icfg, std::int64_t cycle) {
    if (deviation.severity == Severity::Major) {
        std::ostringstream msg;
        msg << "major misalignment (" << to_string(diagnosis.cause) << "): psi=" << metrics.psi
            << " [thr " << baseline.psi_threshold << "], asymmetry=" << metrics.asymmetry << " [band "
            << baseline.asymmetry_low << ", " << baseline.asymmetry_high << "], memory=" << metrics.memory
            << " [thr " << baseline.memory_threshold << "]; " << deviation.breach_count()
            << " metric(s) breached";
        return Alert{Severity::Major, diagnosis.cause, metrics, msg.str(), cycle};
    }

    AdaptiveSignal s;
    s.cycle = cycle;
    s.cause = diagnosis.cause;
    switch (diagnosis.cause) {
        case Cause::ModelMismatch:
            s.horizon = adapt_horizon(cfg, icfg.beta, baseline.psi.mean, metrics.psi);
            break;
        case Cause::ConstraintRestriction:
            s.u_bound = relax_input_bound(cfg.u_bound_nominal, icfg.alpha,
                                          metrics.asymmetry - baseline.asymmetry_high);
            break;
        case Cause::PredictionModelError:
            s.drag = adapt_drag(cfg.drag_nominal, icfg.gamma, metrics.asymmetry - baseline.asymmetry_low);
            break;
        case Cause::EnvironmentShift:
            s.ts = adapt_sampling_time(cfg, icfg.delta, baseline.memory.mean, metrics.memory);
            s.q_scale = adapt_q_scale(icfg.epsilon, baseline.memory.mean, metrics.memory);
            break;
    }
    return s;
}

AdaptiveSignal restore_signal(const mpc::MpcConfig& cfg, std::int64_t cycle) {
    AdaptiveSignal s;
    s.cycle = cycle;
    if (cfg.horizon != cfg.horizon_nominal) s.horizon = cfg.horizon_nominal;
    if (cfg.u_bound != cfg.u_bound_nominal) s.u_bound = cfg.u_bound_nominal;
    if (cfg.drag != cfg.drag_nominal) s.drag = cfg.drag_nominal;
    if (cfg.ts != cfg.ts_nominal) s.ts = cfg.ts_nominal;
    if (cfg.q != cfg.q_nominal) s.q_scale = 1.0;
    return s;
}

bool at_nominal(const mpc::MpcConfig& cfg) {
    return cfg.horizon == cfg.horizon_nominal && cfg.u_bound == cfg.u_bound_nominal &&
           cfg.drag == cfg.drag_nominal && cfg.ts == cfg.ts_nominal && cfg.q == cfg.q_nominal;
}

}  // namespace elmpc::idt
