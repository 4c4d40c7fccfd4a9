// Copyright romkit developers. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include "romkit/integrators.hpp"

#include <Eigen/SparseLU>

namespace romkit {

bool scheme_is_explicit(SchemeId scheme) {
    switch (scheme) {
        case SchemeId::ForwardEuler:
        case SchemeId::AdamsBashforth2:
        case SchemeId::MidpointRK2:
            return true;
        default:
            return false;
    }
}

int scheme_history_size(SchemeId scheme) {
    switch (scheme) {
        case SchemeId::AdamsBashforth2:
        case SchemeId::BDF2:
            return 2;
        default:
            return 1;
    }
}

std::string scheme_name(SchemeId scheme) {
    switch (scheme) {
        case SchemeId::ForwardEuler: return "forward_euler";
        case SchemeId::BackwardEuler: return "backward_euler";
        case SchemeId::AdamsBashforth2: return "adams_bashforth2";
        case SchemeId::AdamsMoulton2: return "adams_moulton2";
        case SchemeId::BDF2: return "bdf2";
        case SchemeId::MidpointRK2: return "midpoint_rk2";
    }
    return "unknown";
}

SchemeId scheme_from_name(const std::string& name) {
    for (SchemeId s : all_schemes()) {
        if (scheme_name(s) == name) return s;
    }
    throw Error("unknown scheme name: " + name);
}

const std::vector<SchemeId>& all_schemes() {
    static const std::vector<SchemeId> schemes = {
        SchemeId::ForwardEuler,    SchemeId::BackwardEuler, SchemeId::AdamsBashforth2,
        SchemeId::AdamsMoulton2,   SchemeId::BDF2,          SchemeId::MidpointRK2,
    };
    return schemes;
}

ResidualCoeffs scheme_residual_coeffs(SchemeId scheme) {
    switch (scheme) {
        case SchemeId::ForwardEuler:
            return {{1.0, -1.0}, {0.0, 1.0}};
        case SchemeId::BackwardEuler:
            return {{1.0, -1.0}, {1.0, 0.0}};
        case SchemeId::AdamsBashforth2:
            return {{1.0, -1.0, 0.0}, {0.0, 1.5, -0.5}};
        case SchemeId::AdamsMoulton2:
            return {{1.0, -1.0}, {0.5, 0.5}};
        case SchemeId::BDF2:
            return {{1.0, -4.0 / 3.0, 1.0 / 3.0}, {2.0 / 3.0, 0.0, 0.0}};
        case SchemeId::MidpointRK2:
            throw Error("midpoint RK2 advances through two stages and has no one-step residual");
    }
    throw Error("unknown scheme");
}

ResidualEvaluation residual(const SemiDiscreteModel& model, SchemeId scheme, double dt,
                            double t_n, const Vector& candidate,
                            const std::vector<Vector>& history, const ParameterPoint& mu) {
    const ResidualCoeffs c = scheme_residual_coeffs(scheme);
    if (static_cast<int>(history.size()) < static_cast<int>(c.a.size()) - 1) {
        throw Error("residual: history shorter than the scheme requires");
    }
    Vector combo = c.a[0] * candidate;
    for (std::size_t k = 1; k < c.a.size(); ++k) {
        if (c.a[k] != 0.0) combo += c.a[k] * history[k - 1];
    }
    Vector value = model.apply_mass(combo);
    for (std::size_t k = 0; k < c.b.size(); ++k) {
        if (c.b[k] == 0.0) continue;
        const Vector& state = (k == 0) ? candidate : history[k - 1];
        value -= dt * c.b[k] * model.velocity(state, t_n - static_cast<double>(k) * dt, mu);
    }
    SpMat jac = c.a[0] * model.mass_matrix();
    if (c.b[0] != 0.0) {
        jac = jac - SpMat(dt * c.b[0] * model.velocity_jacobian(candidate, t_n, mu));
    }
    return {std::move(value), std::move(jac)};
}

ExplicitStepResult step_explicit(const SemiDiscreteModel& model, SchemeId scheme, double dt,
                                 double t_prev, const std::vector<Vector>& history,
                                 const ParameterPoint& mu) {
    const Vector& prev = history[0];
    if (scheme == SchemeId::MidpointRK2) {
        Vector rhs = model.apply_mass(prev) + 0.5 * dt * model.velocity(prev, t_prev, mu);
        Vector half = model.solve_mass(rhs);
        Vector rhs2 =
            model.apply_mass(prev) + dt * model.velocity(half, t_prev + 0.5 * dt, mu);
        ExplicitStepResult result;
        result.state = model.solve_mass(rhs2);
        result.half_state = std::move(half);
        return result;
    }
    const ResidualCoeffs c = scheme_residual_coeffs(scheme);
    Vector rhs = model.apply_mass(prev);
    for (std::size_t k = 1; k < c.b.size(); ++k) {
        if (c.b[k] == 0.0) continue;
        const Vector& state = history[k - 1];
        rhs += dt * c.b[k] * model.velocity(state, t_prev - static_cast<double>(k - 1) * dt, mu);
    }
    ExplicitStepResult result;
    result.state = model.solve_mass(rhs);
    return result;
}

ImplicitStepResult step_implicit(const SemiDiscreteModel& model, SchemeId scheme, double dt,
                                 double t_prev, const std::vector<Vector>& history,
                                 const ParameterPoint& mu, const NewtonOptions& opts) {
    const double t_n = t_prev + dt;
    ImplicitStepResult result;
    result.state = history[0];  // Newton initial guess
    ResidualEvaluation eval = residual(model, scheme, dt, t_n, result.state, history, mu);
    const double tol = opts.rel_tol * eval.value.norm() + opts.abs_tol;
    Eigen::SparseLU<SpMat> lu;
    for (int it = 0;; ++it) {
        const double norm = eval.value.norm();
        if (norm <= tol) break;
        if (it >= opts.max_iterations) {
            throw SolverFailure("Newton did not converge in " +
                                    std::to_string(opts.max_iterations) +
                                    " iterations (|r| = " + std::to_string(norm) + ")",
                                result.state, norm);
        }
        lu.compute(eval.jacobian_wrt_current);
        if (lu.info() != Eigen::Success) {
            throw SolverFailure("Newton Jacobian factorization failed", result.state, norm);
        }
        const Vector delta = lu.solve(-eval.value);
        // full step first; backtrack only when it leaves the physical region
        // or fails to reduce the residual (shock-capturing runs need this)
        double alpha = 1.0;
        bool accepted = false;
        for (int ls = 0; ls < 12 && !accepted; ++ls, alpha *= 0.5) {
            const Vector trial = result.state + alpha * delta;
            try {
                ResidualEvaluation trial_eval =
                    residual(model, scheme, dt, t_n, trial, history, mu);
                if (trial_eval.value.norm() < norm || trial_eval.value.norm() <= tol) {
                    result.state = trial;
                    eval = std::move(trial_eval);
                    accepted = true;
                }
            } catch (const Error&) {
                // nonphysical trial state: halve the step
            }
        }
        if (!accepted) {
            throw SolverFailure("Newton line search failed (|r| = " + std::to_string(norm) +
                                    ")",
                                result.state, norm);
        }
        ++result.newton_iterations;
        if (opts.record_iterates) result.iterates.push_back(result.state);
    }
    return result;
}

Trajectory integrate(const SemiDiscreteModel& model, SchemeId scheme, const TimeGrid& grid,
                     const ParameterPoint& mu, const IntegrateOptions& opts) {
    const int n = model.n_space();
    Trajectory traj;
    traj.dt = grid.dt;
    traj.scheme = scheme;
    traj.states.resize(n, grid.n_steps + 1);
    if (scheme == SchemeId::MidpointRK2) traj.half_states.resize(n, grid.n_steps);
    traj.newton_counts.assign(static_cast<std::size_t>(grid.n_steps), 0);
    if (opts.record_newton_iterates) {
        traj.newton_iterates.resize(static_cast<std::size_t>(grid.n_steps));
    }

    traj.states.col(0) = model.initial_state(mu);
    const bool implicit = !scheme_is_explicit(scheme);
    NewtonOptions newton = opts.newton;
    newton.record_iterates = opts.record_newton_iterates;

    std::vector<Vector> history;
    for (int step = 1; step <= grid.n_steps; ++step) {
        const double t_prev = (step - 1) * grid.dt;
        // multistep startup: FE for AB2, BE for BDF2
        SchemeId effective = scheme;
        if (step == 1 && scheme == SchemeId::AdamsBashforth2) effective = SchemeId::ForwardEuler;
        if (step == 1 && scheme == SchemeId::BDF2) effective = SchemeId::BackwardEuler;

        history.clear();
        history.push_back(traj.states.col(step - 1));
        if (scheme_history_size(effective) > 1) history.push_back(traj.states.col(step - 2));

        if (implicit) {
            ImplicitStepResult r =
                step_implicit(model, effective, grid.dt, t_prev, history, mu, newton);
            traj.states.col(step) = r.state;
            traj.newton_counts[static_cast<std::size_t>(step - 1)] = r.newton_iterations;
            if (opts.record_newton_iterates) {
                traj.newton_iterates[static_cast<std::size_t>(step - 1)] = std::move(r.iterates);
            }
        } else {
            ExplicitStepResult r =
                step_explicit(model, effective, grid.dt, t_prev, history, mu);
            traj.states.col(step) = r.state;
            if (r.half_state) traj.half_states.col(step - 1) = *r.half_state;
        }

        if (!traj.states.col(step).allFinite()) {
            throw Error("integrate: non-finite state at step " + std::to_string(step));
        }
    }
    return traj;
}

std::vector<int> nonlinear_snapshot_half_indices(SchemeId scheme, int n_steps) {
    std::vector<int> idx;
    switch (scheme) {
        case SchemeId::ForwardEuler:
        case SchemeId::AdamsBashforth2:
            for (int k = 0; k < n_steps; ++k) idx.push_back(2 * k);
            break;
        case SchemeId::BackwardEuler:
            for (int k = 1; k <= n_steps; ++k) idx.push_back(2 * k);
            break;
        case SchemeId::AdamsMoulton2:
            for (int k = 0; k <= n_steps; ++k) idx.push_back(2 * k);
            break;
        case SchemeId::BDF2:
            for (int k = 1; k <= n_steps; ++k) idx.push_back(2 * k);
            break;
        case SchemeId::MidpointRK2:
            for (int k = 0; k < n_steps; ++k) {
                idx.push_back(2 * k);      // f at u^k
                idx.push_back(2 * k + 1);  // f at u^{k+1/2}
            }
            break;
    }
    return idx;
}

}  // namespace romkit
