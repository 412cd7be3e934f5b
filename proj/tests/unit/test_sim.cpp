#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include "elmpc/error.hpp"
#include "elmpc/sim/log_io.hpp"
#include "elmpc/sim/summary.hpp"

using namespace elmpc;
using namespace elmpc::sim;

namespace {

std::string scenario_path(const char* name) {
    return std::string(ELMPC_SCENARIO_DIR) + "/" + name;
}

std::string csv_of(const RunLog& log) {
    std::ostringstream s;
    write_log_csv(s, log);
    return s.str();
}

// Control-side columns only: everything the controller and plant produced.
bool same_control_trace(const RunLog& a, const RunLog& b) {
    if (a.rows.size() != b.rows.size()) return false;
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
        const auto& x = a.rows[i];
        const auto& y = b.rows[i];
        if (x.cycle != y.cycle || x.time != y.time || x.truth.stacked() != y.truth.stacked() ||
            x.estimate.stacked() != y.estimate.stacked() ||
            x.reference.position != y.reference.position || x.u != y.u || x.cost != y.cost ||
            x.horizon != y.horizon || x.ts != y.ts || x.u_bound != y.u_bound || x.drag != y.drag ||
            x.q_scale != y.q_scale) {
            return false;
        }
    }
    return true;
}

ScenarioSpec short_scenario() {
    ScenarioSpec s;
    s.duration = 300;
    s.seed = 3;
    s.noise.process_std = 0.05;
    s.noise.measurement_std = {0.005, 0.005, 0.02, 0.02};
    return s;
}

}  // namespace

TEST_CASE("circle reference") {
    ReferenceSpec r;
    r.kind = ReferenceKind::Circle;
    r.radius = 5.0;
    r.period = 20.0;
    const auto traj = build_reference(r, 0.05, 30.0);
    CHECK(std::abs(traj[0].position.x() - 5.0) < 1e-9);
    CHECK(std::abs(traj[0].position.y()) < 1e-9);
    CHECK(std::abs(traj[100].position.x()) < 1e-9);
    CHECK(std::abs(traj[100].position.y() - 5.0) < 1e-9);
    CHECK(traj[0].velocity.y() == doctest::Approx(5.0 * 2.0 * std::numbers::pi / 20.0));
}

TEST_CASE("zero-length line is a constant reference") {
    ReferenceSpec r;
    r.kind = ReferenceKind::Line;
    r.waypoints = {Eigen::Vector2d(1.0, 2.0), Eigen::Vector2d(1.0, 2.0)};
    const auto traj = build_reference(r, 0.05, 5.0);
    for (const auto& p : traj.samples()) {
        CHECK(p.position == Eigen::Vector2d(1.0, 2.0));
        CHECK(p.velocity == Eigen::Vector2d::Zero());
    }
}

TEST_CASE("line reference follows waypoints then holds") {
    ReferenceSpec r;
    r.kind = ReferenceKind::Line;
    r.waypoints = {Eigen::Vector2d(0, 0), Eigen::Vector2d(2, 0), Eigen::Vector2d(2, 1)};
    r.speed = 1.0;
    const auto traj = build_reference(r, 0.5, 5.0);
    CHECK(traj.at_time(1.0).position.isApprox(Eigen::Vector2d(1, 0)));
    CHECK(traj.at_time(2.5).position.isApprox(Eigen::Vector2d(2, 0.5)));
    CHECK(traj.at_time(4.0).position.isApprox(Eigen::Vector2d(2, 1)));
    CHECK(traj.at_time(4.0).velocity == Eigen::Vector2d::Zero());
}

TEST_CASE("resampling at half the interval reproduces the knots") {
    ReferenceSpec r;
    r.kind = ReferenceKind::FigureEight;
    const auto traj = build_reference(r, 0.05, 10.0);
    const auto fine = traj.resample(0.025);
    REQUIRE(fine.size() == 2 * traj.size() - 1);
    for (std::size_t i = 0; i < traj.size(); ++i) {
        CHECK(fine[2 * i].position == traj[i].position);
        CHECK(fine[2 * i].velocity == traj[i].velocity);
    }
}

TEST_CASE("scenario documents") {
    const auto s = load_scenario(scenario_path("drag_shift.json"));
    CHECK(s.events.size() == 1);
    CHECK(s.events[0].kind == EventKind::DragShift);
    CHECK(s.first_onset() == 2000);
    CHECK(s.calibration_end() == 1200);
    const auto back = scenario_from_json(scenario_to_json(s));
    CHECK(scenario_to_json(back) == scenario_to_json(s));

    auto j = scenario_to_json(s);
    j["reference"]["kind"] = "spiral";
    CHECK_THROWS_AS(scenario_from_json(j), ConfigError);
    j = scenario_to_json(s);
    j["events"][0]["onset"] = 100;  // inside the calibration prefix
    CHECK_THROWS_AS(scenario_from_json(j), ConfigError);
    j = scenario_to_json(s);
    j["events"][0]["onset"] = 7000;
    CHECK_THROWS_AS(scenario_from_json(j), ConfigError);
    j = scenario_to_json(s);
    j["surprise"] = 1;
    CHECK_THROWS_AS(scenario_from_json(j), ConfigError);
    CHECK_THROWS_AS(load_scenario("does/not/exist.json"), ConfigError);
}

TEST_CASE("events take effect exactly at onset and stop at end") {
    ScenarioSpec s;
    s.duration = 100;
    ScenarioEvent gust;
    gust.kind = EventKind::WindGust;
    gust.onset = 40;
    gust.end = 60;
    gust.wind = Eigen::Vector2d(0.5, 0.0);
    ScenarioEvent drag;
    drag.kind = EventKind::DragShift;
    drag.onset = 50;
    drag.value = 0.3;
    s.events = {gust, drag};
    CHECK(plant_at(s, 39).wind == Eigen::Vector2d::Zero());
    CHECK(plant_at(s, 40).wind == Eigen::Vector2d(0.5, 0.0));
    CHECK(plant_at(s, 59).wind == Eigen::Vector2d(0.5, 0.0));
    CHECK(plant_at(s, 60).wind == Eigen::Vector2d::Zero());
    CHECK(plant_at(s, 49).drag == 0.1);
    CHECK(plant_at(s, 50).drag == 0.3);
    CHECK(plant_at(s, 99).drag == 0.3);

    // Closed loop: runs agree up to the onset and part right after it.
    auto base = short_scenario();
    base.calibration_fraction = 0.1;
    auto shifted = base;
    ScenarioEvent e;
    e.kind = EventKind::DragShift;
    e.onset = 150;
    e.value = 0.3;
    shifted.events = {e};
    RunOptions off;
    off.el_enabled = false;
    const auto a = run_closed_loop(base, Configs{}, off);
    const auto b = run_closed_loop(shifted, Configs{}, off);
    for (std::size_t k = 0; k <= 150; ++k) {
        CHECK(a.rows[k].truth.stacked() == b.rows[k].truth.stacked());
    }
    CHECK(a.rows[151].truth.stacked() != b.rows[151].truth.stacked());
}

TEST_CASE("config overrides") {
    Configs c;
    apply_override(c, "mpc.Np=15");
    CHECK(c.mpc.horizon_nominal == 15);
    CHECK(c.mpc.horizon == 15);
    apply_override(c, "idt.k=3");
    CHECK(c.idt.k == 3.0);
    apply_override(c, "mpc.Q=[1e-6,1e-6,1e-3,1e-3]");
    CHECK(c.mpc.q[2] == 1e-3);
    CHECK_THROWS_AS(apply_override(c, "mpc.horizon=3"), ConfigError);
    CHECK_THROWS_AS(apply_override(c, "ctl.Np=3"), ConfigError);
    CHECK_THROWS_AS(apply_override(c, "mpc.Np=fast"), ConfigError);
    CHECK_THROWS_AS(apply_override(c, "mpc.Np"), ConfigError);
    CHECK_THROWS_AS(apply_override(c, "idt.window=-4"), ConfigError);
    apply_override(c, "mpc.Np=3");
    CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE("closed loop is deterministic and logs one row per cycle") {
    const auto s = load_scenario(scenario_path("nominal.json"));
    const auto cfgs = scenario_configs(s);
    const auto a = run_closed_loop(s, cfgs, RunOptions{});
    const auto b = run_closed_loop(s, cfgs, RunOptions{});
    REQUIRE(a.rows.size() == static_cast<std::size_t>(s.duration));
    for (std::size_t i = 0; i < a.rows.size(); ++i) CHECK(a.rows[i].cycle == static_cast<std::int64_t>(i));
    CHECK(csv_of(a) == csv_of(b));
    CHECK_FALSE(a.diverged);
    REQUIRE(a.baseline);
    CHECK(a.baseline->span_end < s.calibration_end());
}

TEST_CASE("nominal scenario flags nothing after calibration") {
    const auto s = load_scenario(scenario_path("nominal.json"));
    const auto log = run_closed_loop(s, scenario_configs(s), RunOptions{});
    std::size_t flagged = 0;
    for (const auto& r : log.rows) flagged += r.deviation.has_value() || r.signal.has_value();
    CHECK(flagged == 0);
    CHECK(log.rows.back().metrics.has_value());
}

TEST_CASE("EL off keeps the controller at nominal under a drag shift") {
    const auto s = load_scenario(scenario_path("drag_shift.json"));
    RunOptions off;
    off.el_enabled = false;
    const auto log = run_closed_loop(s, scenario_configs(s), off);
    for (const auto& r : log.rows) {
        CHECK(r.drag == 0.1);
        CHECK(r.horizon == 20);
        CHECK_FALSE(r.metrics.has_value());
    }
    CHECK(log.idt_us.empty());
}

TEST_CASE("signals apply at the next cycle boundary") {
    const auto s = load_scenario(scenario_path("drag_shift.json"));
    const auto log = run_closed_loop(s, scenario_configs(s), RunOptions{});
    std::size_t seen = 0;
    for (std::size_t i = 0; i + 1 < log.rows.size(); ++i) {
        const auto& sig = log.rows[i].signal;
        if (!sig) continue;
        ++seen;
        if (sig->horizon) CHECK(log.rows[i + 1].horizon == *sig->horizon);
        if (sig->ts) CHECK(log.rows[i + 1].ts == *sig->ts);
        if (sig->drag) CHECK(log.rows[i + 1].drag == *sig->drag);
    }
    CHECK(seen >= 1);
}

TEST_CASE("concurrent twin matches the interleaved control trace when nothing fires") {
    const auto s = load_scenario(scenario_path("nominal.json"));
    RunOptions conc;
    conc.mode = IdtMode::Concurrent;
    const auto a = run_closed_loop(s, scenario_configs(s), RunOptions{});
    const auto b = run_closed_loop(s, scenario_configs(s), conc);
    CHECK(same_control_trace(a, b));
    CHECK(b.idt_us.size() == a.idt_us.size());
    REQUIRE(b.baseline);
    CHECK(*b.baseline == *a.baseline);
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
        CHECK(a.rows[i].metrics.has_value() == b.rows[i].metrics.has_value());
    }
}

TEST_CASE("calibration failure and saved baselines") {
    auto s = short_scenario();  // 60-cycle prefix cannot fill a 1000-triple window
    CHECK_THROWS_AS(run_closed_loop(s, Configs{}, RunOptions{}), CalibrationError);

    const auto nominal = load_scenario(scenario_path("nominal.json"));
    RunOptions calib;
    calib.calibration_only = true;
    const auto c = run_closed_loop(nominal, scenario_configs(nominal), calib);
    REQUIRE(c.baseline);
    CHECK(c.rows.size() == static_cast<std::size_t>(nominal.calibration_end()));

    RunOptions reuse;
    reuse.baseline = *c.baseline;
    const auto log = run_closed_loop(nominal, scenario_configs(nominal), reuse);
    REQUIRE(log.baseline);
    CHECK(*log.baseline == *c.baseline);
}

TEST_CASE("rmse and summary sentinels") {
    const std::vector<double> r{3.0, 4.0};
    CHECK(std::abs(rmse(r) - 3.535534) < 1e-6);
    CHECK(rmse(std::vector<double>{}) == 0.0);

    RunLog log;
    for (int k = 0; k < 10; ++k) {
        CycleRow row;
        row.cycle = k;
        log.rows.push_back(row);
    }
    const auto s = summarize(log, std::int64_t{5}, 4);
    CHECK(s.rmse == 0.0);
    CHECK(s.rmse_pre == 0.0);
    CHECK_FALSE(s.detection_latency.has_value());
    CHECK_FALSE(s.first_deviation.has_value());
    CHECK_FALSE(s.rmse_crossing.has_value());
}

TEST_CASE("windowed rmse crossing uses the trailing window") {
    const std::vector<double> err{1, 1, 1, 1, 3, 3, 3};
    // c=4: sqrt((1+1+9)/3)=1.91; c=5: sqrt((1+9+9)/3)=2.52
    CHECK(windowed_rmse_crossing(err, 4, 3, 1.0) == 5);
    CHECK_FALSE(windowed_rmse_crossing(err, 4, 3, 2.0).has_value());
}

TEST_CASE("latency stats") {
    const std::vector<double> v{5, 1, 3, 2, 4};
    const auto s = latency_stats(v);
    CHECK(s.median == 3.0);
    CHECK(s.max == 5.0);
    CHECK(s.p95 == 5.0);
    CHECK(latency_stats(std::vector<double>{}).count == 0);
}

TEST_CASE("compare pairs EL on and off") {
    SUBCASE("no-event scenario") {
        const auto s = load_scenario(scenario_path("nominal.json"));
        const auto c = compare(s, scenario_configs(s));
        CHECK(std::abs(c.el_on.rmse - c.el_off.rmse) <= 1e-9);
        CHECK(c.el_on.rows == static_cast<std::size_t>(s.duration));
        CHECK(c.el_off.rows == static_cast<std::size_t>(s.duration));
        CHECK(c.el_on.signals == 0);
    }
    SUBCASE("drag shift") {
        const auto s = load_scenario(scenario_path("drag_shift.json"));
        const auto c = compare(s, scenario_configs(s));
        CHECK(c.el_on.detection_latency.has_value());
        CHECK_FALSE(c.el_off.detection_latency.has_value());
        CHECK(c.el_on.rows == c.el_off.rows);
        const auto doc = comparison_to_json(c);
        CHECK(doc["delta"].contains("detection_latency"));
        CHECK(doc["delta"]["detection_latency"].is_number());
    }
}

TEST_CASE("log csv layout") {
    const auto s = short_scenario();
    RunOptions off;
    off.el_enabled = false;
    const auto text = csv_of(run_closed_loop(s, Configs{}, off));
    std::istringstream in(text);
    std::string line;
    std::getline(in, line);
    CHECK(line == "#schema_version=1");
    std::getline(in, line);
    CHECK(line.rfind("cycle,time,px,py", 0) == 0);
    std::size_t rows = 0, commas_expected = log_columns().size() - 1;
    while (std::getline(in, line)) {
        ++rows;
        CHECK(static_cast<std::size_t>(std::count(line.begin(), line.end(), ',')) == commas_expected);
    }
    CHECK(rows == 300);
    CHECK(format_double(0.1) == "0.1");
}

TEST_CASE("divergence stops the run with a flagged partial log") {
    auto s = short_scenario();
    ScenarioEvent gust;
    gust.kind = EventKind::WindGust;
    gust.onset = 100;
    gust.wind = Eigen::Vector2d(1e308, 1e308);
    s.events = {gust};
    RunOptions off;
    off.el_enabled = false;
    const auto log = run_closed_loop(s, Configs{}, off);
    CHECK(log.diverged);
    CHECK_FALSE(log.error.empty());
    CHECK(log.rows.size() < static_cast<std::size_t>(s.duration));
    CHECK(log.rows.size() >= 100);
}
