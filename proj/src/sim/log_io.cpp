#include "elmpc/sim/log_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "elmpc/error.hpp"
#include "elmpc/idt/baseline.hpp"

namespace elmpc::sim {

using nlohmann::json;

std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

const std::vector<std::string>& log_columns() {
    static const std::vector<std::string> cols{
        "cycle",      "time",        "px",          "py",          "vx",          "vy",
        "est_px",     "est_py",      "est_vx",      "est_vy",      "ref_px",      "ref_py",
        "ref_vx",     "ref_vy",      "ux",          "uy",          "cost",        "saturated",
        "pos_error",  "psi",         "asymmetry",   "memory",      "Np",          "Ts",
        "u_bound",    "C_drag",      "Q_scale",     "deviation",   "diagnosis",   "signal_Np",
        "signal_Ts",  "signal_u_bound", "signal_C_drag", "signal_Q_scale", "alert",
    };
    return cols;
}

namespace {

class Row {
public:
    explicit Row(std::ostream& out) : out_(out) {}
    Row& operator<<(double v) { return field(format_double(v)); }
    Row& operator<<(std::int64_t v) { return field(std::to_string(v)); }
    Row& operator<<(int v) { return field(std::to_string(v)); }
    Row& operator<<(std::string_view v) { return field(v); }
    template <typename T>
    Row& operator<<(const std::optional<T>& v) {
        if (v) return *this << *v;
        return field("");
    }
    void end() { out_ << '\n'; }

private:
    Row& field(std::string_view s) {
        if (!first_) out_ << ',';
        first_ = false;
        out_ << s;
        return *this;
    }
    std::ostream& out_;
    bool first_ = true;
};

json optional_json(const std::optional<std::int64_t>& v) { return v ? json(*v) : json(nullptr); }
json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }
json optional_json(const std::optional<bool>& v) { return v ? json(*v) : json(nullptr); }

json latency_json(const LatencyStats& s) {
    return json{{"count", s.count}, {"median_us", s.median}, {"p95_us", s.p95}, {"max_us", s.max}};
}

}  // namespace

void write_log_csv(std::ostream& out, const RunLog& log) {
    out << "#schema_version=" << kLogSchemaVersion << '\n';
    const auto& cols = log_columns();
    for (std::size_t i = 0; i < cols.size(); ++i) {
        out << (i ? "," : "") << cols[i];
    }
    out << '\n';
    for (const auto& r : log.rows) {
        Row row(out);
        row << r.cycle << r.time << r.truth.position.x() << r.truth.position.y()
            << r.truth.velocity.x() << r.truth.velocity.y() << r.estimate.position.x()
            << r.estimate.position.y() << r.estimate.velocity.x() << r.estimate.velocity.y()
            << r.reference.position.x() << r.reference.position.y() << r.reference.velocity.x()
            << r.reference.velocity.y() << r.u.x() << r.u.y() << r.cost << (r.saturated ? 1 : 0)
            << r.position_error();
        if (r.metrics) {
            row << r.metrics->psi << r.metrics->asymmetry << r.metrics->memory;
        } else {
            row << "" << "" << "";
        }
        row << r.horizon << r.ts << r.u_bound << r.drag << r.q_scale;
        row << (r.deviation ? idt::to_string(*r.deviation) : std::string_view{});
        row << (r.diagnosis ? idt::to_string(*r.diagnosis) : std::string_view{});
        if (r.signal) {
            row << r.signal->horizon << r.signal->ts << r.signal->u_bound << r.signal->drag
                << r.signal->q_scale;
        } else {
            row << "" << "" << "" << "" << "";
        }
        row << (r.alert ? 1 : 0);
        row.end();
    }
}

void write_timing_csv(std::ostream& out, const RunLog& log) {
    out << "#schema_version=" << kLogSchemaVersion << '\n';
    out << "index,mpc_us,idt_us\n";
    const std::size_t n = std::max(log.mpc_us.size(), log.idt_us.size());
    for (std::size_t i = 0; i < n; ++i) {
        Row row(out);
        row << static_cast<std::int64_t>(i);
        row << (i < log.mpc_us.size() ? std::optional<double>(log.mpc_us[i]) : std::nullopt);
        row << (i < log.idt_us.size() ? std::optional<double>(log.idt_us[i]) : std::nullopt);
        row.end();
    }
}

json summary_to_json(const RunSummary& s) {
    return json{
        {"rows", s.rows},
        {"diverged", s.diverged},
        {"error", s.error},
        {"rmse", s.rmse},
        {"rmse_pre", optional_json(s.rmse_pre)},
        {"rmse_post", optional_json(s.rmse_post)},
        {"velocity_rmse", s.velocity_rmse},
        {"saturation_count", s.saturation_count},
        {"deviations", s.deviations},
        {"signals", s.signals},
        {"alerts", s.alerts},
        {"first_deviation", optional_json(s.first_deviation)},
        {"onset", optional_json(s.onset)},
        {"false_alarms", s.false_alarms},
        {"detection_cycle", optional_json(s.detection_cycle)},
        {"detection_latency", optional_json(s.detection_latency)},
        {"psi_crossing", optional_json(s.psi_crossing)},
        {"rmse_crossing", optional_json(s.rmse_crossing)},
        {"psi_to_rmse_lag", optional_json(s.psi_to_rmse_lag)},
        {"detection_precedes_rmse", optional_json(s.detection_precedes_rmse)},
        {"idt_latency", latency_json(s.idt_latency)},
        {"mpc_latency", latency_json(s.mpc_latency)},
        {"peak_table_bytes", s.peak_table_bytes},
    };
}

json run_document(const RunLog& log, const RunSummary& s) {
    json doc{
        {"schema_version", kLogSchemaVersion},
        {"scenario", scenario_to_json(log.scenario)},
        {"seed", log.scenario.seed},
        {"el_enabled", log.el_enabled},
        {"idt_mode", log.mode == IdtMode::Concurrent ? "concurrent" : "interleaved"},
        {"config", {{"mpc", mpc_config_to_json(log.configs.mpc)},
                    {"idt", idt_config_to_json(log.configs.idt)}}},
        {"summary", summary_to_json(s)},
        {"rejected_triples", log.rejected_triples},
        {"window_bytes", log.window_bytes},
        {"baseline", log.baseline ? idt::baseline_to_json(*log.baseline) : json(nullptr)},
    };
    json alerts = json::array();
    for (const auto& a : log.alerts) {
        alerts.push_back({{"cycle", a.cycle}, {"cause", idt::to_string(a.cause)}, {"message", a.message}});
    }
    doc["alerts"] = alerts;
    return doc;
}

json comparison_to_json(const Comparison& c) {
    auto diff = [](const std::optional<double>& a, const std::optional<double>& b) {
        return a && b ? json(*a - *b) : json(nullptr);
    };
    return json{
        {"schema_version", kLogSchemaVersion},
        {"scenario", scenario_to_json(c.el_on_log.scenario)},
        {"seed", c.el_on_log.scenario.seed},
        {"config", {{"mpc", mpc_config_to_json(c.el_on_log.configs.mpc)},
                    {"idt", idt_config_to_json(c.el_on_log.configs.idt)}}},
        {"el_on", summary_to_json(c.el_on)},
        {"el_off", summary_to_json(c.el_off)},
        {"delta",
         {
             {"rmse", c.el_on.rmse - c.el_off.rmse},
             {"rmse_pre", diff(c.el_on.rmse_pre, c.el_off.rmse_pre)},
             {"rmse_post", diff(c.el_on.rmse_post, c.el_off.rmse_post)},
             {"velocity_rmse", c.el_on.velocity_rmse - c.el_off.velocity_rmse},
             {"saturation_count", static_cast<std::int64_t>(c.el_on.saturation_count) -
                                      static_cast<std::int64_t>(c.el_off.saturation_count)},
             {"detection_latency", optional_json(c.el_on.detection_latency)},
             {"signals", c.el_on.signals},
             {"alerts", c.el_on.alerts},
         }},
    };
}

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::error_code ec;
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error("cannot write '" + path.string() + "'");
    }
    out << text;
    if (!out) {
        throw Error("failed writing '" + path.string() + "'");
    }
}

}  // namespace elmpc::sim
