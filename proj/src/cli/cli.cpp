#include "elmpc/cli/cli.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "elmpc/error.hpp"
#include "elmpc/idt/baseline.hpp"
#include "elmpc/info/metrics.hpp"
#include "elmpc/sim/log_io.hpp"
#include "elmpc/sim/summary.hpp"

namespace elmpc::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct CommonArgs {
    std::string scenario;
    std::optional<std::uint64_t> seed;
    std::string out;
    std::string config;
    std::vector<std::string> overrides;
};

void add_common(CLI::App* cmd, CommonArgs& a) {
    cmd->add_option("--scenario", a.scenario, "Scenario JSON file")->required();
    cmd->add_option("--seed", a.seed, "Override the scenario seed");
    cmd->add_option("--out", a.out, "Output directory (default: $ELMPC_OUT, else ./out)");
    cmd->add_option("--config", a.config, "JSON file with 'mpc' and/or 'idt' parameter blocks");
    cmd->add_option("--set", a.overrides, "Parameter override, e.g. mpc.Np=15 or idt.k=3");
}

fs::path output_dir(const std::string& flag) {
    if (!flag.empty()) return flag;
    if (const char* env = std::getenv("ELMPC_OUT"); env && *env) return env;
    return "out";
}

json read_json_file(const std::string& path, const char* what) {
    std::ifstream in(path);
    if (!in) throw ConfigError(std::string("cannot open ") + what + " '" + path + "'");
    json j = json::parse(in, nullptr, false);
    if (j.is_discarded()) throw ConfigError(std::string("cannot parse ") + what + " '" + path + "'");
    return j;
}

struct Resolved {
    sim::ScenarioSpec scenario;
    sim::Configs configs;
};

Resolved resolve(const CommonArgs& a) {
    Resolved r;
    r.scenario = sim::load_scenario(a.scenario);
    if (a.seed) r.scenario.seed = *a.seed;
    r.configs = sim::scenario_configs(r.scenario);
    if (!a.config.empty()) {
        const json j = read_json_file(a.config, "config file");
        for (const auto& [key, v] : j.items()) {
            if (key == "mpc") {
                sim::apply_mpc_json(r.configs.mpc, v);
            } else if (key == "idt") {
                sim::apply_idt_json(r.configs.idt, v);
            } else {
                throw ConfigError("unknown section '" + key + "' in config file");
            }
        }
    }
    for (const auto& o : a.overrides) sim::apply_override(r.configs, o);
    r.configs.validate();
    return r;
}

std::string log_csv(const sim::RunLog& log) {
    std::ostringstream s;
    sim::write_log_csv(s, log);
    return s.str();
}

int cmd_run(const CommonArgs& a, bool el_off, bool concurrent, const std::string& baseline_path,
            bool timing, std::ostream& out) {
    const auto r = resolve(a);
    sim::RunOptions opts;
    opts.el_enabled = !el_off;
    opts.mode = concurrent ? sim::IdtMode::Concurrent : sim::IdtMode::Interleaved;
    if (!baseline_path.empty()) {
        opts.baseline = idt::baseline_from_json(read_json_file(baseline_path, "baseline file"));
    }
    const auto log = sim::run_closed_loop(r.scenario, r.configs, opts);
    const auto summary = sim::summarize(log, r.scenario.first_onset(), r.configs.idt.window);

    const fs::path dir = output_dir(a.out);
    sim::write_file(dir / "log.csv", log_csv(log));
    sim::write_file(dir / "summary.json", sim::run_document(log, summary).dump(2) + "\n");
    if (timing) {
        std::ostringstream t;
        sim::write_timing_csv(t, log);
        sim::write_file(dir / "timing.csv", t.str());
    }
    out << "scenario " << r.scenario.name << " seed " << r.scenario.seed << ": " << summary.rows
        << " cycles, rmse " << summary.rmse << " m, " << summary.deviations << " deviations, "
        << summary.signals << " signals, " << summary.alerts << " alerts\n";
    out << "wrote " << (dir / "log.csv").string() << " and " << (dir / "summary.json").string() << "\n";
    if (log.diverged) {
        out << "run aborted: " << log.error << "\n";
        return kExitRuntime;
    }
    return kExitOk;
}

int cmd_baseline(const CommonArgs& a, const std::string& output, std::ostream& out) {
    const auto r = resolve(a);
    sim::RunOptions opts;
    opts.calibration_only = true;
    const auto log = sim::run_closed_loop(r.scenario, r.configs, opts);
    if (log.diverged) {
        out << "run aborted: " << log.error << "\n";
        return kExitRuntime;
    }
    if (!log.baseline) {
        throw CalibrationError("run ended before the calibration prefix completed");
    }
    const fs::path path = output.empty() ? output_dir(a.out) / "baseline.json" : fs::path(output);
    sim::write_file(path, idt::baseline_to_json(*log.baseline).dump(2) + "\n");
    const auto& b = *log.baseline;
    out << "baseline from " << b.samples << " samples (cycles " << b.span_begin << ".." << b.span_end
        << "): psi " << b.psi.mean << " +- " << b.psi.std << ", asymmetry " << b.asymmetry.mean
        << " +- " << b.asymmetry.std << ", memory " << b.memory.mean << " +- " << b.memory.std << "\n";
    out << "wrote " << path.string() << "\n";
    return kExitOk;
}

int cmd_compare(const CommonArgs& a, std::ostream& out) {
    const auto r = resolve(a);
    const auto c = sim::compare(r.scenario, r.configs);
    const fs::path dir = output_dir(a.out);
    sim::write_file(dir / "log_el_on.csv", log_csv(c.el_on_log));
    sim::write_file(dir / "log_el_off.csv", log_csv(c.el_off_log));
    const json doc = sim::comparison_to_json(c);
    sim::write_file(dir / "compare.json", doc.dump(2) + "\n");

    std::ostringstream delta;
    delta << "#schema_version=" << sim::kLogSchemaVersion << "\n";
    delta << "field,el_on,el_off,delta\n";
    auto num = [](const json& v) { return v.is_null() ? std::string() : v.dump(); };
    for (const char* key : {"rmse", "rmse_pre", "rmse_post", "velocity_rmse", "saturation_count",
                            "deviations", "signals", "alerts", "detection_latency"}) {
        const json& on = doc["el_on"][key];
        const json& off = doc["el_off"][key];
        json d = nullptr;
        if (on.is_number() && off.is_number()) d = on.get<double>() - off.get<double>();
        delta << key << "," << num(on) << "," << num(off) << "," << num(d) << "\n";
    }
    sim::write_file(dir / "delta.csv", delta.str());
    out << delta.str().substr(delta.str().find('\n') + 1);
    out << "wrote " << (dir / "compare.json").string() << "\n";
    return (c.el_on_log.diverged || c.el_off_log.diverged) ? kExitRuntime : kExitOk;
}

int cmd_metrics(const std::string& input, std::optional<std::size_t> window, std::size_t min_samples,
                bool oracle, std::ostream& out) {
    std::ifstream in(input);
    if (!in) throw ConfigError("cannot open triples file '" + input + "'");
    const auto triples = read_triples_csv(in);
    if (triples.empty()) throw ConfigError("triples file '" + input + "' holds no rows");

    info::Alphabet alphabet;
    for (const auto& t : triples) {
        alphabet.state = std::max({alphabet.state, t.s.index + 1, t.s_next.index + 1});
        alphabet.action = std::max(alphabet.action, t.a.index + 1);
    }
    const std::size_t w = window.value_or(triples.size());
    if (w == 0) throw ConfigError("--window must be positive");
    info::TripleHistogram hist(w, alphabet);
    double worst = 0.0;
    for (std::size_t i = 0; i < triples.size(); ++i) {
        hist.push(triples[i]);
        const bool check = oracle && hist.size() >= min_samples &&
                           ((i + 1) % 100 == 0 || i + 1 == triples.size());
        if (check) {
            worst = std::max(worst, info::max_abs_difference(info::compute_metrics(hist, min_samples),
                                                             info::batch_recompute_oracle(hist, min_samples)));
        }
    }
    const auto m = info::compute_metrics(hist, min_samples);
    out.precision(12);
    out << "n " << m.n << "\n"
        << "psi " << m.psi << "\n"
        << "asymmetry " << m.asymmetry << "\n"
        << "memory " << m.memory << "\n"
        << "H(S) " << m.h_s << "\nH(A) " << m.h_a << "\nH(S') " << m.h_s_next << "\nH(S,A) " << m.h_sa
        << "\nH(A,S') " << m.h_a_s_next << "\nH(S,S') " << m.h_s_s_next << "\nH(S,A,S') " << m.h_joint
        << "\n";
    if (oracle) {
        const bool match = worst <= 1e-9;
        out << "oracle " << (match ? "match" : "MISMATCH") << " (max |diff| " << worst << " bits)\n";
        return match ? kExitOk : kExitOracleMismatch;
    }
    return kExitOk;
}

std::uint32_t parse_symbol(const std::string& field, std::size_t line) {
    std::size_t b = field.find_first_not_of(" \t\r");
    std::size_t e = field.find_last_not_of(" \t\r");
    if (b == std::string::npos) throw ConfigError("empty field on line " + std::to_string(line));
    const std::string s = field.substr(b, e - b + 1);
    std::uint32_t v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
        throw ConfigError("line " + std::to_string(line) + ": '" + s + "' is not a symbol index");
    }
    return v;
}

}  // namespace

std::vector<info::SampleTriple> read_triples_csv(std::istream& in) {
    std::vector<info::SampleTriple> out;
    std::string line;
    std::size_t line_no = 0;
    bool header_checked = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r" || line[0] == '#') continue;
        std::vector<std::string> fields;
        std::stringstream ss(line);
        for (std::string f; std::getline(ss, f, ',');) fields.push_back(f);
        if (!header_checked) {
            header_checked = true;
            const auto first = line.find_first_not_of(" \t");
            if (first != std::string::npos && std::isalpha(static_cast<unsigned char>(line[first]))) {
                continue;
            }
        }
        if (fields.size() != 3) {
            throw ConfigError("line " + std::to_string(line_no) + ": expected 3 fields s,a,s_next");
        }
        out.push_back(info::SampleTriple{info::Symbol{parse_symbol(fields[0], line_no)},
                                         info::Symbol{parse_symbol(fields[1], line_no)},
                                         info::Symbol{parse_symbol(fields[2], line_no)},
                                         static_cast<std::int64_t>(out.size())});
    }
    return out;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Entanglement-monitored MPC simulator"};
    app.require_subcommand(1);

    CommonArgs run_args;
    bool el_off = false, concurrent = false, timing = false;
    std::string baseline_path;
    auto* run_cmd = app.add_subcommand("run", "Run a scenario closed loop");
    add_common(run_cmd, run_args);
    run_cmd->add_flag("--el-off", el_off, "Disable the information twin");
    run_cmd->add_flag("--concurrent", concurrent, "Run the twin on its own thread");
    run_cmd->add_option("--baseline", baseline_path, "Monitor against a saved baseline");
    run_cmd->add_flag("--timing", timing, "Also write timing.csv");

    CommonArgs base_args;
    std::string base_output;
    auto* base_cmd = app.add_subcommand("baseline", "Calibrate a baseline on a scenario prefix");
    add_common(base_cmd, base_args);
    base_cmd->add_option("--output", base_output, "Baseline file (default: <out>/baseline.json)");

    CommonArgs cmp_args;
    auto* cmp_cmd = app.add_subcommand("compare", "Run a scenario with EL on and off");
    add_common(cmp_cmd, cmp_args);

    std::string metrics_input;
    std::optional<std::size_t> metrics_window;
    std::size_t min_samples = 1;
    bool oracle = false;
    auto* met_cmd = app.add_subcommand("metrics", "Entanglement metrics of a CSV of symbol triples");
    met_cmd->add_option("input", metrics_input, "CSV with columns s,a,s_next")->required();
    met_cmd->add_option("--window", metrics_window, "Sliding window (default: all rows)");
    met_cmd->add_option("--min-samples", min_samples, "Metrics gate")->default_val(1);
    met_cmd->add_flag("--oracle", oracle, "Cross-check against the batch recomputation");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kExitConfig;
    }

    try {
        if (*run_cmd) return cmd_run(run_args, el_off, concurrent, baseline_path, timing, out);
        if (*base_cmd) return cmd_baseline(base_args, base_output, out);
        if (*cmp_cmd) return cmd_compare(cmp_args, out);
        return cmd_metrics(metrics_input, metrics_window, min_samples, oracle, out);
    } catch (const CalibrationError& e) {
        err << "error: " << e.what() << "\n";
        return kExitRuntime;
    } catch (const DivergenceError& e) {
        err << "error: " << e.what() << "\n";
        return kExitRuntime;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitConfig;
    }
}

}  // namespace elmpc::cli
