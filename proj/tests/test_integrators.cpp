// Copyright romkit developers. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "romkit/models/burgers.hpp"
#include "romkit/snapshots.hpp"
#include "support/callback_model.hpp"

using namespace romkit;
using romkit::testing::CallbackModel;
using romkit::testing::scalar_model;

namespace {

const ParameterPoint kNoParams{};

}  // namespace

TEST_CASE("zero velocity: every scheme keeps the state fixed") {
    const CallbackModel model = scalar_model(
        1.5, [](double) { return 0.0; }, [](double) { return 0.0; });
    for (SchemeId scheme : all_schemes()) {
        const Trajectory traj = integrate(model, scheme, {0.1, 5}, kNoParams, {});
        CHECK((traj.states.array() - 1.5).abs().maxCoeff() < 1e-14);
        if (!scheme_is_explicit(scheme)) {
            // Newton converges without any update
            for (int c : traj.newton_counts) CHECK(c <= 1);
        }
    }
}

TEST_CASE("forward Euler: linear decay closed form") {
    const CallbackModel model = scalar_model(
        1.0, [](double u) { return -u; }, [](double) { return -1.0; });
    const Trajectory traj = integrate(model, SchemeId::ForwardEuler, {0.1, 1}, kNoParams, {});
    CHECK(traj.states(0, 1) == doctest::Approx(0.9).epsilon(1e-14));
}

TEST_CASE("backward Euler: linear implicit closed form") {
    const CallbackModel model = scalar_model(
        1.0, [](double u) { return -u; }, [](double) { return -1.0; });
    const Trajectory traj = integrate(model, SchemeId::BackwardEuler, {0.1, 1}, kNoParams, {});
    CHECK(traj.states(0, 1) == doctest::Approx(1.0 / 1.1).epsilon(1e-10));
}

TEST_CASE("backward Euler: quadratic velocity solved by Newton") {
    // u1 solves 0.5 x^2 + x - 1 = 0 for f = -u^2, dt = 0.5, u0 = 1
    const CallbackModel model = scalar_model(
        1.0, [](double u) { return -u * u; }, [](double u) { return -2.0 * u; });
    const Trajectory traj = integrate(model, SchemeId::BackwardEuler, {0.5, 1}, kNoParams, {});
    const double expected = -1.0 + std::sqrt(3.0);  // positive root of 0.5x^2 + x - 1
    CHECK(traj.states(0, 1) == doctest::Approx(expected).epsilon(5e-8));
    CHECK(traj.states(0, 1) == doctest::Approx(0.7320508).epsilon(1e-7));
}

TEST_CASE("AB2: scalar recurrence oracle") {
    const double dt = 0.05;
    const CallbackModel model = scalar_model(
        1.0, [](double u) { return -u; }, [](double) { return -1.0; });
    const Trajectory traj = integrate(model, SchemeId::AdamsBashforth2, {dt, 3}, kNoParams, {});
    // independent recurrence: u1 by FE startup, then
    // u_n = u_{n-1} + dt(1.5 f_{n-1} - 0.5 f_{n-2})
    const double u0 = 1.0;
    const double u1 = u0 + dt * (-u0);
    const double u2 = u1 + dt * (1.5 * (-u1) - 0.5 * (-u0));
    const double u3 = u2 + dt * (1.5 * (-u2) - 0.5 * (-u1));
    CHECK(traj.states(0, 1) == doctest::Approx(u1).epsilon(1e-14));
    CHECK(traj.states(0, 2) == doctest::Approx(u2).epsilon(1e-14));
    CHECK(traj.states(0, 3) == doctest::Approx(u3).epsilon(1e-14));
}

TEST_CASE("residual: exact step gives a zero residual") {
    const auto model = burgers_model(10);
    const ParameterPoint mu{1.3, 0.02};
    const TimeGrid grid{0.01, 1};
    for (SchemeId scheme : {SchemeId::BackwardEuler, SchemeId::AdamsMoulton2}) {
        const Trajectory traj = integrate(*model, scheme, grid, mu, {});
        const std::vector<Vector> history = {traj.states.col(0)};
        const auto eval =
            residual(*model, scheme, grid.dt, grid.dt, traj.states.col(1), history, mu);
        CHECK(eval.value.norm() < 1e-8 * traj.states.col(1).norm());
    }
}

TEST_CASE("residual: backward Euler at the previous state is -dt*f") {
    const auto model = burgers_model(10);
    const ParameterPoint mu{1.3, 0.02};
    const double dt = 0.02;
    const Vector u = model->initial_state(mu);
    const auto eval = residual(*model, SchemeId::BackwardEuler, dt, dt, u, {u}, mu);
    const Vector expected = -dt * model->velocity(u, dt, mu);
    CHECK((eval.value - expected).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("residual: BDF2 coefficients against a symbolic expansion oracle") {
    // Taylor expanding u^{n-k} = u - k dt u' + (k dt)^2/2 u'' in
    // r = u^n + a1 u^{n-1} + a2 u^{n-2} - dt b u' and zeroing the first three
    // orders gives a 3x3 linear system for (a1, a2, b).
    Eigen::Matrix3d system;
    system << 1.0, 1.0, 0.0,  // dt^0: 1 + a1 + a2 = 0
        -1.0, -2.0, -1.0,     // dt^1: -a1 - 2 a2 - b = 0
        0.5, 2.0, 0.0;        // dt^2: a1/2 + 2 a2 = 0
    const Eigen::Vector3d rhs(-1.0, 0.0, 0.0);
    const Eigen::Vector3d sol = system.partialPivLu().solve(rhs);
    const ResidualCoeffs c = scheme_residual_coeffs(SchemeId::BDF2);
    CHECK(c.a[1] == doctest::Approx(sol[0]).epsilon(1e-14));
    CHECK(c.a[2] == doctest::Approx(sol[1]).epsilon(1e-14));
    CHECK(c.b[0] == doctest::Approx(sol[2]).epsilon(1e-14));
    CHECK(c.a[1] == doctest::Approx(-4.0 / 3.0));
    CHECK(c.a[2] == doctest::Approx(1.0 / 3.0));
    CHECK(c.b[0] == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("residual jacobian matches finite differences") {
    const auto model = burgers_model(12);
    const ParameterPoint mu{1.4, 0.023};
    const double dt = 0.01;
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> dist(0.9, 1.5);
    for (SchemeId scheme : {SchemeId::BackwardEuler, SchemeId::AdamsMoulton2, SchemeId::BDF2}) {
        Vector u(12), h1(12), h2(12);
        for (int i = 0; i < 12; ++i) {
            u[i] = dist(rng);
            h1[i] = dist(rng);
            h2[i] = dist(rng);
        }
        const std::vector<Vector> history = {h1, h2};
        const auto eval = residual(*model, scheme, dt, 3 * dt, u, history, mu);
        Matrix fd(12, 12);
        for (int j = 0; j < 12; ++j) {
            const double h = 1e-7;
            Vector up = u, dn = u;
            up[j] += h;
            dn[j] -= h;
            fd.col(j) = (residual(*model, scheme, dt, 3 * dt, up, history, mu).value -
                         residual(*model, scheme, dt, 3 * dt, dn, history, mu).value) /
                        (2 * h);
        }
        const double rel = (Matrix(eval.jacobian_wrt_current) - fd).cwiseAbs().maxCoeff() /
                           fd.cwiseAbs().maxCoeff();
        CHECK(rel < 1e-5);
    }
}

TEST_CASE("order of accuracy on a smooth scalar ODE") {
    // du/dt = -u + sin(2t), u(0) = 1; reference from a very fine RK2 run
    Vector u0(1);
    u0[0] = 1.0;
    const CallbackModel model(
        1, u0,
        [](const Vector& u, double t, const ParameterPoint&) {
            Vector f(1);
            f[0] = -u[0] + std::sin(2.0 * t);
            return f;
        },
        [](const Vector&, double, const ParameterPoint&) {
            Matrix j(1, 1);
            j(0, 0) = -1.0;
            return j;
        });
    const double total_time = 1.0;
    const int n_ref = 16384;
    const Trajectory ref =
        integrate(model, SchemeId::MidpointRK2, {total_time / n_ref, n_ref}, kNoParams, {});
    const double u_ref = ref.states(0, n_ref);

    auto error_at = [&](SchemeId scheme, int n) {
        const Trajectory t = integrate(model, scheme, {total_time / n, n}, kNoParams, {});
        return std::abs(t.states(0, n) - u_ref);
    };
    auto observed_rate = [&](SchemeId scheme) {
        return std::log2(error_at(scheme, 128) / error_at(scheme, 256));
    };
    CHECK(std::abs(observed_rate(SchemeId::ForwardEuler) - 1.0) < 0.2);
    CHECK(std::abs(observed_rate(SchemeId::BackwardEuler) - 1.0) < 0.2);
    CHECK(std::abs(observed_rate(SchemeId::AdamsBashforth2) - 2.0) < 0.2);
    CHECK(std::abs(observed_rate(SchemeId::AdamsMoulton2) - 2.0) < 0.2);
    CHECK(std::abs(observed_rate(SchemeId::BDF2) - 2.0) < 0.2);
    CHECK(std::abs(observed_rate(SchemeId::MidpointRK2) - 2.0) < 0.2);
}

TEST_CASE("newton failure carries the last iterate") {
    const CallbackModel model = scalar_model(
        0.0, [](double u) { return 1e8 * (1.0 + u * u); },
        [](double u) { return 1e8 * 2.0 * u; });
    CHECK_THROWS_AS(integrate(model, SchemeId::BackwardEuler, {1.0, 1}, kNoParams, {}),
                    SolverFailure);
}

TEST_CASE("subspace inclusion: nonlinear snapshots lie in the M-scaled solution span") {
    const auto model = burgers_model(24);
    const ParameterPoint mu{1.3, 0.021};
    const TimeGrid grid{5e-3, 16};
    for (SchemeId scheme : all_schemes()) {
        const auto trajs = run_training_foms(*model, scheme, grid, {mu});
        const SnapshotSet sol = solution_snapshots(trajs);
        const SnapshotSet f = nonlinear_term_snapshots(*model, trajs, {mu});
        // identity mass here: span(M u) = span(u)
        Eigen::HouseholderQR<Matrix> qr(sol.matrix);
        const Matrix q =
            qr.householderQ() *
            Matrix::Identity(sol.n_rows(), std::min(sol.n_rows(), sol.n_cols()));
        for (int c = 0; c < f.n_cols(); ++c) {
            const Vector v = f.matrix.col(c);
            const double rel = (v - q * (q.transpose() * v)).norm() / v.norm();
            CHECK(rel < 1e-8);
        }
        const int n_expected =
            static_cast<int>(nonlinear_snapshot_half_indices(scheme, grid.n_steps).size());
        CHECK(f.n_cols() == n_expected);
    }
}

TEST_CASE("RK2 records half-step states for snapshot collection") {
    const auto model = burgers_model(10);
    const ParameterPoint mu{1.2, 0.02};
    const Trajectory traj = integrate(*model, SchemeId::MidpointRK2, {0.01, 5}, mu, {});
    CHECK(traj.half_states.cols() == 5);
    const SnapshotSet sol = solution_snapshots({traj});
    CHECK(sol.n_cols() == 11);  // u^0..u^5 plus five half states
}
