#include "elmpc/sim/summary.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace elmpc::sim {

LatencyStats latency_stats(std::span<const double> micros) {
    LatencyStats s;
    s.count = micros.size();
    if (micros.empty()) return s;
    std::vector<double> v(micros.begin(), micros.end());
    std::sort(v.begin(), v.end());
    auto rank = [&](double q) {
        const auto i = static_cast<std::size_t>(std::ceil(q * static_cast<double>(v.size()))) - 1;
        return v[std::min(i, v.size() - 1)];
    };
    const std::size_t n = v.size();
    s.median = n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
    s.p95 = rank(0.95);
    s.max = v.back();
    return s;
}

double rmse(std::span<const double> residuals) {
    if (residuals.empty()) return 0.0;
    double sum = 0.0;
    for (double r : residuals) sum += r * r;
    return std::sqrt(sum / static_cast<double>(residuals.size()));
}

std::optional<std::int64_t> windowed_rmse_crossing(std::span<const double> errors, std::int64_t onset,
                                                   std::size_t window, double reference,
                                                   double factor) {
    if (window == 0 || onset < 0) return std::nullopt;
    const double limit = factor * reference;
    for (std::size_t c = static_cast<std::size_t>(onset); c < errors.size(); ++c) {
        const std::size_t begin = c + 1 >= window ? c + 1 - window : 0;
        if (rmse(errors.subspan(begin, c + 1 - begin)) > limit) {
            return static_cast<std::int64_t>(c);
        }
    }
    return std::nullopt;
}

RunSummary summarize(const RunLog& log, std::optional<std::int64_t> onset, std::size_t rmse_window) {
    RunSummary s;
    s.rows = log.rows.size();
    s.diverged = log.diverged;
    s.error = log.error;
    s.onset = onset;

    std::vector<double> pos(log.rows.size()), vel(log.rows.size());
    for (std::size_t i = 0; i < log.rows.size(); ++i) {
        const auto& r = log.rows[i];
        pos[i] = r.position_error();
        vel[i] = r.velocity_error();
        if (r.saturated) ++s.saturation_count;
        if (r.signal) ++s.signals;
        if (r.alert) ++s.alerts;
        if (r.deviation) {
            ++s.deviations;
            if (!s.first_deviation) s.first_deviation = r.cycle;
            if (onset && r.cycle < *onset) ++s.false_alarms;
            if (onset && r.cycle >= *onset && !s.detection_cycle) s.detection_cycle = r.cycle;
        }
        if (onset && r.cycle >= *onset && !s.psi_crossing && r.metrics && log.baseline &&
            r.metrics->psi < log.baseline->psi_threshold) {
            s.psi_crossing = r.cycle;
        }
    }
    s.rmse = rmse(pos);
    s.velocity_rmse = rmse(vel);

    if (onset) {
        const auto split = static_cast<std::size_t>(std::clamp<std::int64_t>(
            *onset, 0, static_cast<std::int64_t>(pos.size())));
        const std::span<const double> all(pos);
        s.rmse_pre = rmse(all.first(split));
        s.rmse_post = rmse(all.subspan(split));
        s.rmse_crossing = windowed_rmse_crossing(pos, *onset, rmse_window, *s.rmse_pre);
        if (s.detection_cycle) s.detection_latency = *s.detection_cycle - *onset;
        if (s.psi_crossing && s.rmse_crossing) s.psi_to_rmse_lag = *s.rmse_crossing - *s.psi_crossing;
        if (s.detection_cycle) {
            s.detection_precedes_rmse = !s.rmse_crossing || *s.detection_cycle < *s.rmse_crossing;
        }
    }

    s.idt_latency = latency_stats(log.idt_us);
    s.mpc_latency = latency_stats(log.mpc_us);
    s.peak_table_bytes = log.peak_table_bytes;
    return s;
}

Comparison compare(const ScenarioSpec& scenario, const Configs& configs, IdtMode mode) {
    Comparison c;
    RunOptions on;
    on.el_enabled = true;
    on.mode = mode;
    RunOptions off;
    off.el_enabled = false;
    c.el_on_log = run_closed_loop(scenario, configs, on);
    c.el_off_log = run_closed_loop(scenario, configs, off);
    const auto onset = scenario.first_onset();
    c.el_on = summarize(c.el_on_log, onset, configs.idt.window);
    c.el_off = summarize(c.el_off_log, onset, configs.idt.window);
    return c;
}

}  // namespace elmpc::sim
