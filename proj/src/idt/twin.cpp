#include "elmpc/idt/twin.hpp"

#include <cmath>

#include "elmpc/error.hpp"
#include "elmpc/info/metrics.hpp"

namespace elmpc::idt {

double least_squares_slope(std::span<const double> x, std::span<const double> y) {
    const std::size_t n = std::min(x.size(), y.size());
    if (n < 2) {
        return 0.0;
    }
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    return sxx > 0.0 ? sxy / sxx : 0.0;
}

InformationTwin::InformationTwin(IdtConfig cfg, FeatureSchemes schemes)
    : cfg_(cfg),
      schemes_(std::move(schemes)),
      hist_(cfg.window, info::Alphabet{schemes_.state.cardinality(), schemes_.action.cardinality()}) {
    cfg_.validate();
}

bool InformationTwin::ingest(const mpc::RawTriple& raw) {
    auto finite = [](const auto& arr) {
        for (double v : arr) {
            if (!std::isfinite(v)) return false;
        }
        return true;
    };
    if (!finite(raw.s) || !finite(raw.a) || !finite(raw.s_next)) {
        ++rejected_;
        return false;
    }
    hist_.push(info::SampleTriple{schemes_.state.discretize(raw.s), schemes_.action.discretize(raw.a),
                                  schemes_.state.discretize(raw.s_next), raw.cycle});
    return true;
}

MetricGradients InformationTwin::update_gradients(std::int64_t cycle,
                                                  const info::EntanglementMetrics& m) {
    recent_.push_back(Sample{static_cast<double>(cycle), m.psi, m.asymmetry, m.memory});
    while (recent_.size() > cfg_.gradient_window) {
        recent_.pop_front();
    }
    std::vector<double> x, psi, asym, mem;
    x.reserve(recent_.size());
    for (const auto& s : recent_) {
        x.push_back(s.cycle);
        psi.push_back(s.psi);
        asym.push_back(s.asymmetry);
        mem.push_back(s.memory);
    }
    return MetricGradients{least_squares_slope(x, psi), least_squares_slope(x, asym),
                           least_squares_slope(x, mem)};
}

CycleReport InformationTwin::process(const mpc::RawTriple& raw, const mpc::MpcConfig& current) {
    CycleReport r;
    r.cycle = raw.cycle;
    r.accepted = ingest(raw);
    if (!r.accepted || hist_.size() < cfg_.min_samples) {
        return r;
    }
    r.metrics = info::compute_metrics(hist_, cfg_.min_samples);
    r.gradients = update_gradients(raw.cycle, *r.metrics);

    if (!baseline_) {
        // Only full windows enter calibration: partial windows carry a
        // sample-size bias that the monitored (full) windows do not.
        if (!hist_.full()) return r;
        if (calibration_begin_ < 0) calibration_begin_ = raw.cycle;
        calibration_end_ = raw.cycle;
        calibration_.push_back(*r.metrics);
        return r;
    }

    r.deviation = detect(*r.metrics, r.gradients, *baseline_);
    if (r.deviation) {
        r.diagnosis = diagnose(*r.deviation);
        const bool major = r.deviation->severity == Severity::Major;
        const auto& last = major ? last_alert_ : last_signal_;
        const bool cooled = !last || raw.cycle - *last >= static_cast<std::int64_t>(cfg_.cooldown);
        if (cooled) {
            auto fb = generate_feedback(*r.diagnosis, *r.deviation, *r.metrics, *baseline_, current,
                                        cfg_, raw.cycle);
            if (auto* s = std::get_if<AdaptiveSignal>(&fb)) {
                r.signal = std::move(*s);
                last_signal_ = raw.cycle;
            } else {
                r.alert = std::get<Alert>(std::move(fb));
                last_alert_ = raw.cycle;
            }
        }
    } else if (!at_nominal(current)) {
        // Metrics back inside the baseline band: hand back the nominal parameters.
        const bool cooled =
            !last_signal_ || raw.cycle - *last_signal_ >= static_cast<std::int64_t>(cfg_.cooldown);
        if (cooled) {
            r.signal = restore_signal(current, raw.cycle);
            last_signal_ = raw.cycle;
        }
    }
    return r;
}

const Baseline& InformationTwin::finish_calibration() {
    Baseline b = calibrate(calibration_, cfg_, calibration_begin_, calibration_end_);
    b.schemes = schemes_;
    baseline_ = std::move(b);
    return *baseline_;
}

void InformationTwin::set_baseline(Baseline b) {
    if (b.schemes && (!(b.schemes->state == schemes_.state) || !(b.schemes->action == schemes_.action))) {
        throw ConfigError("baseline was calibrated with a different discretization scheme");
    }
    baseline_ = std::move(b);
}

}  // namespace elmpc::idt
