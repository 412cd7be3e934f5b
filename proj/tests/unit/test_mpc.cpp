#include <doctest.h>

#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>

#include "elmpc/error.hpp"
#include "elmpc/mpc/dynamics.hpp"
#include "elmpc/mpc/features.hpp"
#include "elmpc/mpc/kalman.hpp"
#include "elmpc/mpc/optimizer.hpp"
#include "elmpc/mpc/trajectory.hpp"
#include "oracles.hpp"

using namespace elmpc::mpc;

namespace {

std::vector<ReferencePoint> constant_ref(const Eigen::Vector2d& p, std::size_t n) {
    return std::vector<ReferencePoint>(n, ReferencePoint{p, Eigen::Vector2d::Zero()});
}

Eigen::Matrix4d diag4(double a, double b, double c, double d) {
    return Eigen::Vector4d(a, b, c, d).asDiagonal();
}

}  // namespace

TEST_CASE("plant at rest with no input stays put") {
    NoiseStream noise(1);
    PlantParams params;
    const UavState x{{1.0, -2.0}, {0.0, 0.0}};
    const auto next = step_plant(x, ControlInput{}, params, 0.05, noise);
    CHECK(next.position == x.position);
    CHECK(next.velocity == x.velocity);
}

TEST_CASE("plant drag decays velocity") {
    NoiseStream noise(1);
    PlantParams params;
    params.drag = 0.1;
    const auto next = step_plant(UavState{{0, 0}, {1, 0}}, ControlInput{}, params, 0.05, noise);
    CHECK(next.velocity.x() == doctest::Approx(0.995).epsilon(1e-15));
    CHECK(next.velocity.y() == 0.0);
    CHECK(next.position.x() == doctest::Approx(0.05));
}

TEST_CASE("plant replay is bit-identical for a fixed seed") {
    PlantParams params;
    params.drag = 0.3;
    params.process_noise_std = 0.2;
    params.wind = {0.1, -0.3};
    auto run = [&] {
        NoiseStream noise(42);
        UavState x;
        std::vector<UavState> trace;
        for (int k = 0; k < 100; ++k) {
            x = step_plant(x, ControlInput{{std::sin(k * 0.1), 0.5}}, params, 0.05, noise);
            trace.push_back(x);
        }
        return trace;
    };
    const auto a = run();
    const auto b = run();
    for (std::size_t k = 0; k < a.size(); ++k) {
        REQUIRE(a[k].position == b[k].position);
        REQUIRE(a[k].velocity == b[k].velocity);
    }
}

TEST_CASE("horizon prediction") {
    MpcConfig cfg;
    SUBCASE("one step from rest") {
        cfg.horizon_min = 1;
        cfg.horizon = 1;
        const std::vector<Eigen::Vector2d> u{{1.0, 0.0}};
        const auto pred = predict_horizon(UavState{}, u, cfg);
        REQUIRE(pred.size() == 1);
        CHECK(pred[0].velocity.x() == doctest::Approx(0.05));
        CHECK(pred[0].position == Eigen::Vector2d::Zero());
    }
    SUBCASE("zero input from rest is a fixed point") {
        const std::vector<Eigen::Vector2d> u(20, Eigen::Vector2d::Zero());
        const UavState x0{{3.0, 4.0}, {0.0, 0.0}};
        for (const auto& x : predict_horizon(x0, u, cfg)) {
            CHECK(x.position == x0.position);
            CHECK(x.velocity == x0.velocity);
        }
    }
    SUBCASE("length mismatch") {
        const std::vector<Eigen::Vector2d> u(3, Eigen::Vector2d::Zero());
        CHECK_THROWS_AS(predict_horizon(UavState{}, u, cfg), elmpc::ConfigError);
    }
    SUBCASE("matched model equals plant rollout") {
        std::mt19937_64 rng(3);
        std::uniform_real_distribution<double> d(-3.0, 3.0);
        std::vector<Eigen::Vector2d> u;
        for (int k = 0; k < cfg.horizon; ++k) u.emplace_back(d(rng), d(rng));
        const UavState x0{{d(rng), d(rng)}, {d(rng), d(rng)}};
        PlantParams params;
        params.drag = cfg.drag;
        NoiseStream noise(9);
        UavState x = x0;
        const auto pred = predict_horizon(x0, u, cfg);
        for (std::size_t k = 0; k < u.size(); ++k) {
            x = step_plant(x, ControlInput{u[k]}, params, cfg.ts, noise);
            CHECK((pred[k].position - x.position).norm() <= 1e-9);
            CHECK((pred[k].velocity - x.velocity).norm() <= 1e-9);
        }
    }
}

TEST_CASE("optimizer at rest on a constant reference returns zero input") {
    MpcConfig cfg;
    const Eigen::Vector2d p{2.0, -1.0};
    const auto ref = constant_ref(p, 20);
    const std::vector<Eigen::Vector2d> warm(20, Eigen::Vector2d::Zero());
    const auto sol = optimize(UavState{p, {0, 0}}, ref, cfg, warm);
    double norm = 0.0;
    for (const auto& u : sol.u_seq) norm += u.squaredNorm();
    CHECK(std::sqrt(norm) <= 1e-6);
    CHECK(sol.diagnostics.final_cost == doctest::Approx(0.0));
}

TEST_CASE("optimizer saturates under a tiny input bound") {
    MpcConfig cfg;
    cfg.u_bound_nominal = cfg.u_bound = 0.01;
    const auto ref = constant_ref({50.0, -50.0}, 20);
    const std::vector<Eigen::Vector2d> warm(20, Eigen::Vector2d::Zero());
    const auto sol = optimize(UavState{}, ref, cfg, warm);
    CHECK(sol.u_seq.front().x() == 0.01);
    CHECK(sol.u_seq.front().y() == -0.01);
    CHECK(sol.diagnostics.saturated[0]);
    CHECK(sol.diagnostics.saturated[1]);
    for (const auto& u : sol.u_seq) {
        CHECK(std::abs(u.x()) <= 0.01);
        CHECK(std::abs(u.y()) <= 0.01);
    }
}

TEST_CASE("optimizer cost is non-increasing and matches grid search on small instances") {
    std::mt19937_64 rng(5);
    for (int i = 0; i < 5; ++i) {
        const auto inst = elmpc::testing::random_axis_instance(rng, 2, 0.5);
        const std::vector<Eigen::Vector2d> warm(2, Eigen::Vector2d::Zero());
        const auto sol = optimize(inst.x0, inst.ref, inst.cfg, warm);
        const auto& trace = sol.diagnostics.cost_trace;
        for (std::size_t k = 1; k < trace.size(); ++k) {
            REQUIRE(trace[k] <= trace[k - 1]);
        }
        const double grid = elmpc::testing::grid_search_two_step(inst, 1e-3);
        CHECK(std::abs(sol.diagnostics.final_cost - grid) <= 1e-6);
    }
}

TEST_CASE("optimizer rejects short reference and non-finite cost") {
    MpcConfig cfg;
    const std::vector<Eigen::Vector2d> warm(20, Eigen::Vector2d::Zero());
    CHECK_THROWS_AS(optimize(UavState{}, constant_ref({0, 0}, 5), cfg, warm), elmpc::ConfigError);
    const double inf = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(optimize(UavState{{inf, 0}, {0, 0}}, constant_ref({0, 0}, 20), cfg, warm),
                    elmpc::DivergenceError);
}

TEST_CASE("analytic gradient matches central differences") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> d(-2.0, 2.0);
    MpcConfig cfg;
    for (int i = 0; i < 10; ++i) {
        std::vector<Eigen::Vector2d> u;
        std::vector<ReferencePoint> ref;
        for (int k = 0; k < cfg.horizon; ++k) {
            u.emplace_back(d(rng), d(rng));
            ref.push_back(ReferencePoint{{d(rng), d(rng)}, {d(rng), d(rng)}});
        }
        const UavState x0{{d(rng), d(rng)}, {d(rng), d(rng)}};
        CHECK(elmpc::testing::gradient_fd_error(x0, u, ref, cfg) <= 1e-5);
    }
}

TEST_CASE("warm start follows horizon and bound changes") {
    MpcConfig cfg;
    MpcOptimizer opt(cfg);
    const auto ref = constant_ref({10.0, 0.0}, 40);
    opt.solve(UavState{}, ref, cfg);
    cfg.horizon = 8;
    cfg.u_bound = 0.1;
    opt.conform(cfg);
    CHECK(opt.warm_start().size() == 8);
    for (const auto& u : opt.warm_start()) CHECK(u.cwiseAbs().maxCoeff() <= 0.1);
    cfg.horizon = 30;
    opt.conform(cfg);
    CHECK(opt.warm_start().size() == 30);
    CHECK(opt.warm_start().back() == Eigen::Vector2d::Zero());
}

TEST_CASE("noiseless Kalman filter tracks the truth") {
    MpcConfig cfg;
    PlantParams params;
    params.drag = cfg.drag;
    NoiseStream noise(1);
    UavState truth{{0.0, 0.0}, {1.0, 0.5}};
    Estimate est{truth.stacked(), Eigen::Matrix4d::Zero()};
    const Eigen::Matrix4d r = Eigen::Matrix4d::Zero();
    for (int k = 0; k < 200; ++k) {
        const ControlInput u{{std::cos(0.05 * k), std::sin(0.03 * k)}};
        truth = step_plant(truth, u, params, cfg.ts, noise);
        est = kalman_step(est, u, truth.stacked(), cfg, r);
        REQUIRE((est.mean - truth.stacked()).norm() <= 1e-9);
    }
}

TEST_CASE("inflated Q gives a larger steady-state covariance") {
    auto run = [](double scale) {
        MpcConfig cfg;
        cfg.set_q_scale(scale);
        PlantParams params;
        params.process_noise_std = 0.2;
        NoiseStream noise(7), meas(8);
        const Eigen::Matrix4d r = diag4(1e-4, 1e-4, 1e-2, 1e-2);
        UavState truth;
        Estimate est{truth.stacked(), Eigen::Matrix4d::Identity() * 1e-3};
        for (int k = 0; k < 500; ++k) {
            truth = step_plant(truth, ControlInput{}, params, cfg.ts, noise);
            Eigen::Vector4d y = truth.stacked();
            for (int i = 0; i < 4; ++i) y[i] += meas.gaussian(std::sqrt(r(i, i)));
            est = kalman_step(est, ControlInput{}, y, cfg, r);
        }
        return est.covariance.trace();
    };
    CHECK(run(10.0) > run(1.0));
}

TEST_CASE("predict-only covariance trace never shrinks") {
    MpcConfig cfg;
    Estimate est{Eigen::Vector4d::Zero(), Eigen::Matrix4d::Identity() * 1e-2};
    double prev = est.covariance.trace();
    for (int k = 0; k < 100; ++k) {
        est = kalman_step(est, ControlInput{}, std::nullopt, cfg, Eigen::Matrix4d::Zero());
        const double tr = est.covariance.trace();
        REQUIRE(tr >= prev);
        prev = tr;
    }
}

TEST_CASE("posterior covariance stays symmetric PSD") {
    MpcConfig cfg;
    std::mt19937_64 rng(2);
    std::normal_distribution<double> n(0.0, 1.0);
    Estimate est{Eigen::Vector4d::Zero(), Eigen::Matrix4d::Identity()};
    const Eigen::Matrix4d r = diag4(1e-6, 1e-6, 1e-8, 1e-8);
    for (int k = 0; k < 1000; ++k) {
        const Eigen::Vector4d y(n(rng), n(rng), n(rng), n(rng));
        est = kalman_step(est, ControlInput{{n(rng), n(rng)}}, y, cfg, r);
        REQUIRE(est.covariance == est.covariance.transpose());
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(est.covariance);
        REQUIRE(es.eigenvalues().minCoeff() >= -1e-10);
    }
}

TEST_CASE("degenerate innovation covariance is an error") {
    Estimate est{Eigen::Vector4d::Zero(), Eigen::Matrix4d::Zero()};
    CHECK_THROWS_AS(kalman_update(est, Eigen::Vector4d::Zero(), Eigen::Matrix4d::Zero()),
                    elmpc::DegeneracyError);
}

TEST_CASE("features at hover on the reference are zero") {
    const ReferencePoint ref{{1.0, 2.0}, {0.0, 0.0}};
    OptimizerDiagnostics diag;
    diag.warm_terminal_cost = 0.0;
    const auto io = extract_io(UavState{{1.0, 2.0}, {0.0, 0.0}}, ref, ControlInput{}, diag);
    CHECK(io.input[0] == 0.0);
    CHECK(io.input[1] == 0.0);
    CHECK(io.input[2] == doctest::Approx(0.0));
    CHECK(io.action[0] == 0.0);
    const auto t = make_triple(io, StateFeatures{1.0, 2.0, 3.0}, 7);
    CHECK(t.s_next[2] == 3.0);
    CHECK(t.cycle == 7);
}

TEST_CASE("config validation enforces floors") {
    MpcConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    auto bad = cfg;
    bad.horizon = 3;
    CHECK_THROWS_AS(bad.validate(), elmpc::ConfigError);
    bad = cfg;
    bad.ts = 0.01;
    CHECK_THROWS_AS(bad.validate(), elmpc::ConfigError);
    bad = cfg;
    bad.u_bound = 0.0;
    CHECK_THROWS_AS(bad.validate(), elmpc::ConfigError);
    bad = cfg;
    bad.q[2] = 0.0;
    CHECK_THROWS_AS(bad.validate(), elmpc::ConfigError);
    bad = cfg;
    bad.drag = -0.1;
    CHECK_THROWS_AS(bad.validate(), elmpc::ConfigError);
}

TEST_CASE("trajectory interpolation and resampling") {
    std::vector<ReferencePoint> pts;
    for (int i = 0; i < 11; ++i) {
        pts.push_back(ReferencePoint{{0.1 * i * i, -0.3 * i}, {0.2 * i, -0.3}});
    }
    const Trajectory traj(0.05, pts);
    const auto half = traj.resample(0.025);
    REQUIRE(half.size() == 21);
    for (std::size_t i = 0; i < traj.size(); ++i) {
        CHECK(half[2 * i].position == traj[i].position);
        CHECK(half[2 * i].velocity == traj[i].velocity);
    }
    const auto mid = traj.at_time(0.075);
    CHECK(mid.position.x() == doctest::Approx(0.5 * (traj[1].position.x() + traj[2].position.x())));
    CHECK(traj.at_time(10.0).position == traj[10].position);
    CHECK(traj.at_time(-1.0).position == traj[0].position);
    const auto w = traj.window(0.0, 0.05, 3);
    REQUIRE(w.size() == 3);
    CHECK(w[0].position.x() == doctest::Approx(traj[1].position.x()));
    CHECK_THROWS_AS(Trajectory(0.0, pts), elmpc::ConfigError);
}
