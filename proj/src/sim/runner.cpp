#include "elmpc/sim/runner.hpp"

#include <algorithm>
#include <chrono>
#include <condition_variable>
#include <deque>
#include <mutex>
#include <thread>
#include <variant>

#include "elmpc/error.hpp"
#include "elmpc/idt/twin.hpp"
#include "elmpc/mpc/dynamics.hpp"
#include "elmpc/mpc/features.hpp"
#include "elmpc/mpc/kalman.hpp"
#include "elmpc/mpc/optimizer.hpp"

namespace elmpc::sim {

namespace {

using Clock = std::chrono::steady_clock;

double micros(Clock::duration d) {
    return std::chrono::duration<double, std::micro>(d).count();
}

std::uint64_t channel_seed(std::uint64_t seed, std::uint64_t channel) {
    // splitmix64 finalizer over (seed, channel)
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (channel + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

template <typename T>
class Channel {
public:
    void push(T v) {
        {
            std::lock_guard lock(mu_);
            q_.push_back(std::move(v));
        }
        cv_.notify_one();
    }
    T pop() {
        std::unique_lock lock(mu_);
        cv_.wait(lock, [&] { return !q_.empty(); });
        T v = std::move(q_.front());
        q_.pop_front();
        return v;
    }
    std::optional<T> try_pop() {
        std::lock_guard lock(mu_);
        if (q_.empty()) return std::nullopt;
        T v = std::move(q_.front());
        q_.pop_front();
        return v;
    }

private:
    std::mutex mu_;
    std::condition_variable cv_;
    std::deque<T> q_;
};

struct TripleMsg {
    mpc::RawTriple triple;
    mpc::MpcConfig cfg;
};
struct CalibrateMsg {};
struct StopMsg {};
using ConsumerMsg = std::variant<TripleMsg, CalibrateMsg, StopMsg>;

struct ReportMsg {
    idt::CycleReport report;
    double micros = 0.0;
    std::size_t table_bytes = 0;
};
struct CalibrationFailedMsg {
    std::string what;
};
using ProducerMsg = std::variant<ReportMsg, CalibrationFailedMsg>;

void record_report(CycleRow& row, const idt::CycleReport& r) {
    row.metrics = r.metrics;
    if (r.deviation) row.deviation = r.deviation->severity;
    if (r.diagnosis) row.diagnosis = r.diagnosis->cause;
    row.signal = r.signal;
    row.alert = r.alert.has_value();
}

Eigen::Matrix4d measurement_covariance(const NoiseSpec& noise) {
    Eigen::Vector4d var;
    for (int i = 0; i < 4; ++i) var[i] = noise.measurement_std[i] * noise.measurement_std[i];
    return var.asDiagonal();
}

}  // namespace

mpc::Trajectory scenario_reference(const ScenarioSpec& scenario, const mpc::MpcConfig& cfg) {
    // Ts never exceeds nominal, so the run covers at most duration * Ts_nominal seconds.
    const int horizon = std::max(cfg.horizon_nominal, cfg.horizon);
    const double seconds =
        cfg.ts_nominal * static_cast<double>(scenario.duration + horizon + 1);
    return build_reference(scenario.reference, cfg.ts_nominal, seconds);
}

RunLog run_closed_loop(const ScenarioSpec& scenario, const Configs& configs, const RunOptions& opts,
                       const idt::FeatureSchemes& schemes) {
    scenario.validate();
    configs.validate();

    RunLog log;
    log.scenario = scenario;
    log.configs = configs;
    log.el_enabled = opts.el_enabled;
    log.mode = opts.mode;
    log.rows.reserve(static_cast<std::size_t>(scenario.duration));
    log.mpc_us.reserve(static_cast<std::size_t>(scenario.duration));

    mpc::MpcConfig cfg = configs.mpc;
    cfg.reset_to_nominal();
    const auto reference = scenario_reference(scenario, cfg);
    const Eigen::Matrix4d r_meas = measurement_covariance(scenario.noise);

    mpc::NoiseStream process_noise(channel_seed(scenario.seed, 0));
    mpc::NoiseStream measurement_noise(channel_seed(scenario.seed, 1));

    const auto start = reference.at_time(0.0);
    mpc::UavState truth{start.position, start.velocity};
    mpc::Estimate prior;
    prior.mean = truth.stacked();
    prior.covariance = Eigen::Vector4d(cfg.q.data()).asDiagonal();

    mpc::MpcOptimizer optimizer(cfg);

    const bool monitor = opts.el_enabled;
    std::optional<idt::InformationTwin> twin;
    if (monitor) {
        twin.emplace(configs.idt, schemes);
        if (opts.baseline) twin->set_baseline(*opts.baseline);
    }
    const std::int64_t calibration_end = scenario.calibration_end();
    const bool calibrate = monitor && !opts.baseline;
    const bool concurrent = monitor && opts.mode == IdtMode::Concurrent;

    // Concurrent mode plumbing. The consumer owns the twin once started.
    Channel<ConsumerMsg> to_twin;
    Channel<ProducerMsg> from_twin;
    std::thread consumer;
    std::optional<std::string> calibration_failure;
    if (concurrent) {
        consumer = std::thread([&] {
            for (;;) {
                auto msg = to_twin.pop();
                if (std::holds_alternative<StopMsg>(msg)) return;
                if (std::holds_alternative<CalibrateMsg>(msg)) {
                    try {
                        twin->finish_calibration();
                    } catch (const CalibrationError& e) {
                        from_twin.push(CalibrationFailedMsg{e.what()});
                    }
                    continue;
                }
                const auto& t = std::get<TripleMsg>(msg);
                const auto t0 = Clock::now();
                auto report = twin->process(t.triple, t.cfg);
                const double us = micros(Clock::now() - t0);
                from_twin.push(ReportMsg{std::move(report), us, twin->histogram().occupied_table_bytes()});
            }
        });
    }

    auto handle_report = [&](const ReportMsg& m) {
        log.idt_us.push_back(m.micros);
        log.peak_table_bytes = std::max(log.peak_table_bytes, m.table_bytes);
        const auto row_index = static_cast<std::size_t>(m.report.cycle + 1);
        if (row_index < log.rows.size()) record_report(log.rows[row_index], m.report);
        if (m.report.alert) log.alerts.push_back(*m.report.alert);
    };

    std::optional<mpc::OptimizerIo> previous_io;
    std::optional<idt::AdaptiveSignal> pending;
    double t = 0.0;

    try {
        for (std::int64_t k = 0; k < scenario.duration; ++k) {
            if (pending) {
                pending->apply(cfg);
                optimizer.conform(cfg);
                pending.reset();
            }
            if (calibrate && k == calibration_end) {
                if (concurrent) {
                    to_twin.push(CalibrateMsg{});
                } else {
                    twin->finish_calibration();
                }
                if (opts.calibration_only) break;
            }

            CycleRow row;
            row.cycle = k;
            row.time = t;
            row.truth = truth;
            row.horizon = cfg.horizon;
            row.ts = cfg.ts;
            row.u_bound = cfg.u_bound;
            row.drag = cfg.drag;
            row.q_scale = cfg.q_scale();

            const auto mpc_t0 = Clock::now();
            Eigen::Vector4d y = truth.stacked();
            for (int i = 0; i < 4; ++i) {
                y[i] += measurement_noise.gaussian(scenario.noise.measurement_std[i]);
            }
            const auto posterior = mpc::kalman_update(prior, y, r_meas);
            const mpc::UavState estimate = posterior.state();

            const auto ref_now = reference.at_time(t);
            const auto window =
                reference.window(t, cfg.ts, static_cast<std::size_t>(cfg.horizon));
            const auto solution = optimizer.solve(estimate, window, cfg);
            const mpc::ControlInput applied{solution.u_seq.front()};
            log.mpc_us.push_back(micros(Clock::now() - mpc_t0));

            const auto io = mpc::extract_io(estimate, ref_now, applied, solution.diagnostics);

            row.estimate = estimate;
            row.reference = ref_now;
            row.u = applied.accel;
            row.cost = solution.diagnostics.final_cost;
            row.saturated = solution.diagnostics.saturated[0] || solution.diagnostics.saturated[1];
            log.rows.push_back(row);

            if (monitor && previous_io) {
                const auto triple = mpc::make_triple(*previous_io, io.input, k - 1);
                if (concurrent) {
                    to_twin.push(TripleMsg{triple, cfg});
                } else {
                    const auto t0 = Clock::now();
                    auto report = twin->process(triple, cfg);
                    const double us = micros(Clock::now() - t0);
                    if (report.signal) pending = report.signal;
                    handle_report(ReportMsg{std::move(report), us,
                                            twin->histogram().occupied_table_bytes()});
                }
            }
            if (concurrent) {
                while (auto msg = from_twin.try_pop()) {
                    if (auto* fail = std::get_if<CalibrationFailedMsg>(&*msg)) {
                        calibration_failure = fail->what;
                        continue;
                    }
                    auto& rep = std::get<ReportMsg>(*msg);
                    if (rep.report.signal) pending = rep.report.signal;
                    handle_report(rep);
                }
                if (calibration_failure) throw CalibrationError(*calibration_failure);
            }
            previous_io = io;

            const auto params = plant_at(scenario, k);
            truth = mpc::step_plant(truth, applied, params, cfg.ts, process_noise);
            prior = mpc::kalman_predict(posterior, applied, cfg);
            t += cfg.ts;
            if (!truth.finite()) {
                throw DivergenceError("plant state became non-finite at cycle " + std::to_string(k));
            }
        }
    } catch (const DivergenceError& e) {
        log.diverged = true;
        log.error = e.what();
    } catch (const DegeneracyError& e) {
        log.diverged = true;
        log.error = e.what();
    } catch (...) {
        if (concurrent) {
            to_twin.push(StopMsg{});
            consumer.join();
        }
        throw;
    }

    if (concurrent) {
        to_twin.push(StopMsg{});
        consumer.join();
        while (auto msg = from_twin.try_pop()) {
            if (auto* fail = std::get_if<CalibrationFailedMsg>(&*msg)) {
                throw CalibrationError(fail->what);
            }
            handle_report(std::get<ReportMsg>(*msg));
        }
    }
    if (twin) {
        log.baseline = twin->baseline();
        log.rejected_triples = twin->rejected();
        log.window_bytes = twin->histogram().window_bytes();
    }
    return log;
}

}  // namespace elmpc::sim
