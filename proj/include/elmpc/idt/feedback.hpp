#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>

#include "elmpc/idt/baseline.hpp"
#include "elmpc/idt/detection.hpp"
#include "elmpc/mpc/types.hpp"

namespace elmpc::idt {

/// Parameter update for the controller. Absent fields are left alone; an
/// empty signal is the identity.
struct AdaptiveSignal {
    std::optional<int> horizon;
    std::optional<double> u_bound;
    std::optional<double> drag;
    std::optional<double> ts;
    std::optional<double> q_scale;
    std::int64_t cycle = 0;
    std::optional<Cause> cause;  // empty for a restore-to-nominal signal

    bool empty() const { return !horizon && !u_bound && !drag && !ts && !q_scale; }
    void apply(mpc::MpcConfig& cfg) const;
};

struct Alert {
    Severity severity = Severity::Major;
    Cause cause = Cause::ModelMismatch;
    info::EntanglementMetrics snapshot;
    std::string message;
    std::int64_t cycle = 0;
};

using Feedback = std::variant<AdaptiveSignal, Alert>;

// Adaptation laws. Each is evaluated as written, then clamped to the config floors.

/// Np = max(Np_min, round(Np_nominal * (1 - beta * (psi_b - psi_c) / psi_b))).
int adapt_horizon(const mpc::MpcConfig& cfg, double beta, double psi_baseline, double psi_current);

/// u_bound = (1 + alpha * max(0, excess)) * u_bound_nominal.
double relax_input_bound(double u_bound_nominal, double alpha, double asymmetry_excess);

/// C_drag = C_drag_nominal * (1 - gamma * min(0, excess)).
double adapt_drag(double drag_nominal, double gamma, double asymmetry_excess);

/// Ts = max(Ts_min, Ts_nominal * (1 - delta * (mu_b - mu_c) / mu_b)).
double adapt_sampling_time(const mpc::MpcConfig& cfg, double delta, double memory_baseline,
                           double memory_current);

/// Q scale = 1 + epsilon * (mu_b - mu_c) / mu_b, kept strictly positive.
double adapt_q_scale(double epsilon, double memory_baseline, double memory_current);

/// Minor deviations yield an AdaptiveSignal carrying exactly the laws tied to
/// the diagnosed cause; major deviations yield an Alert. The asymmetry operand
/// of the input-bound and drag laws is its excess beyond the baseline band.
Feedback generate_feedback(const Diagnosis& diagnosis, const Deviation& deviation,
                           const info::EntanglementMetrics& metrics, const Baseline& baseline,
                           const mpc::MpcConfig& cfg, const IdtConfig& icfg, std::int64_t cycle);

/// Signal that puts every adaptable parameter back at nominal.
AdaptiveSignal restore_signal(const mpc::MpcConfig& cfg, std::int64_t cycle);

bool at_nominal(const mpc::MpcConfig& cfg);

}  // namespace elmpc::idt
