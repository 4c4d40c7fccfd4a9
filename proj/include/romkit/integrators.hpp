// Copyright romkit developers. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#ifndef ROMKIT_INTEGRATORS_HPP
#define ROMKIT_INTEGRATORS_HPP

#include <optional>
#include <string>
#include <vector>

#include "romkit/model.hpp"

namespace romkit {

enum class SchemeId {
    ForwardEuler,
    BackwardEuler,
    AdamsBashforth2,
    AdamsMoulton2,
    BDF2,
    MidpointRK2,
};

bool scheme_is_explicit(SchemeId scheme);
/// Number of past states the scheme consumes (1 or 2).
int scheme_history_size(SchemeId scheme);
std::string scheme_name(SchemeId scheme);
SchemeId scheme_from_name(const std::string& name);
const std::vector<SchemeId>& all_schemes();

/// Uniform time grid; dt * n_steps is the final time.
struct TimeGrid {
    double dt = 0.0;
    int n_steps = 0;

    double final_time() const { return dt * n_steps; }
};

/// One-step residual r^n = sum_k a_k M u^{n-k} - dt sum_k b_k f(u^{n-k}).
/// a[0], b[0] refer to the candidate state u^n. Not defined for the
/// midpoint RK2 scheme, whose stages are handled explicitly.
struct ResidualCoeffs {
    std::vector<double> a;
    std::vector<double> b;
};
ResidualCoeffs scheme_residual_coeffs(SchemeId scheme);

struct ResidualEvaluation {
    Vector value;
    SpMat jacobian_wrt_current;
};

/// Residual of `candidate` at time t_n given history = [u^{n-1}, u^{n-2}].
ResidualEvaluation residual(const SemiDiscreteModel& model, SchemeId scheme, double dt,
                            double t_n, const Vector& candidate,
                            const std::vector<Vector>& history, const ParameterPoint& mu);

struct NewtonOptions {
    double rel_tol = 1e-8;
    double abs_tol = 1e-12;
    int max_iterations = 20;
    bool record_iterates = false;
};

/// Thrown when Newton (or Gauss-Newton) fails; carries the last iterate.
class SolverFailure : public Error {
public:
    SolverFailure(const std::string& what, Vector last_iterate, double residual_norm)
        : Error(what), last_iterate(std::move(last_iterate)), residual_norm(residual_norm) {}

    Vector last_iterate;
    double residual_norm;
};

struct ExplicitStepResult {
    Vector state;
    std::optional<Vector> half_state;  // midpoint RK2 only
};

struct ImplicitStepResult {
    Vector state;
    int newton_iterations = 0;
    std::vector<Vector> iterates;  // filled when requested
};

/// Advance one step of an explicit scheme from t_prev; history as above.
ExplicitStepResult step_explicit(const SemiDiscreteModel& model, SchemeId scheme, double dt,
                                 double t_prev, const std::vector<Vector>& history,
                                 const ParameterPoint& mu);

/// Advance one step of an implicit scheme with Newton's method started from
/// the previous state.
ImplicitStepResult step_implicit(const SemiDiscreteModel& model, SchemeId scheme, double dt,
                                 double t_prev, const std::vector<Vector>& history,
                                 const ParameterPoint& mu, const NewtonOptions& opts = {});

struct Trajectory {
    Matrix states;       // n_space x (n_steps + 1)
    Matrix half_states;  // n_space x n_steps for midpoint RK2, else empty
    std::vector<int> newton_counts;
    std::vector<std::vector<Vector>> newton_iterates;  // per step, optional
    double dt = 0.0;
    SchemeId scheme = SchemeId::ForwardEuler;

    int n_steps() const { return static_cast<int>(states.cols()) - 1; }
};

struct IntegrateOptions {
    NewtonOptions newton;
    bool record_newton_iterates = false;
};

/// Time-march the full trajectory. Multistep schemes start with their
/// one-step counterpart (FE for AB2, BE for BDF2).
Trajectory integrate(const SemiDiscreteModel& model, SchemeId scheme, const TimeGrid& grid,
                     const ParameterPoint& mu, const IntegrateOptions& opts = {});

/// Time-step indices n whose nonlinear-term snapshot f^n participates in
/// the scheme's subspace inclusion relation; step index in units of half
/// steps (2n means u^n, 2n+1 means u^{n+1/2}).
std::vector<int> nonlinear_snapshot_half_indices(SchemeId scheme, int n_steps);

}  // namespace romkit

#endif
