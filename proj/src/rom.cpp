// Copyright romkit developers. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include "romkit/rom.hpp"

#include <Eigen/Cholesky>
#include <Eigen/QR>
#include <cmath>
#include <deque>

#include "romkit/detail/parallel.hpp"

namespace romkit {

std::string rom_method_name(RomMethod method) {
    switch (method) {
        case RomMethod::galerkin: return "galerkin";
        case RomMethod::deim: return "deim";
        case RomMethod::deim_sns: return "deim_sns";
        case RomMethod::lspg: return "lspg";
        case RomMethod::gnat: return "gnat";
        case RomMethod::gnat_sns: return "gnat_sns";
    }
    return "unknown";
}

RomMethod rom_method_from_name(const std::string& name) {
    for (RomMethod m : {RomMethod::galerkin, RomMethod::deim, RomMethod::deim_sns,
                        RomMethod::lspg, RomMethod::gnat, RomMethod::gnat_sns}) {
        if (rom_method_name(m) == name) return m;
    }
    throw Error("unknown ROM method: " + name);
}

Matrix lift(const Basis& basis, const Matrix& generalized, const Vector& u0) {
    Matrix lifted = basis.columns * generalized;
    lifted.colwise() += u0;
    return lifted;
}

namespace {

bool method_is_hyper_reduced(RomMethod m) {
    return m == RomMethod::deim || m == RomMethod::deim_sns || m == RomMethod::gnat ||
           m == RomMethod::gnat_sns;
}

void validate_problem(const SpatialRomProblem& p) {
    if (!p.model) throw Error("spatial ROM: missing model");
    const int n_s = p.phi.n_cols();
    const int big_n = p.model->n_space();
    if (p.phi.n_rows() != big_n) throw Error("spatial ROM: basis row count mismatch");
    if (method_is_hyper_reduced(p.method)) {
        if (!p.projector) throw Error("spatial ROM: hyper-reduced method needs a projector");
        const int n_b = p.projector->n_cols();
        const int n_z = p.projector->plan.n_z();
        if (!(n_s <= n_b && n_b <= n_z && n_z <= big_n)) {
            throw Error("spatial ROM: dimension chain n_s <= n_basis <= n_z <= N_s violated");
        }
        if ((p.method == RomMethod::deim || p.method == RomMethod::deim_sns) && n_z != n_b) {
            throw Error("spatial ROM: DEIM interpolation requires n_z == n_basis");
        }
    }
    if (p.method == RomMethod::lspg && scheme_is_explicit(p.scheme)) {
        throw Error("LSPG with an explicit scheme reduces to the Galerkin projection; "
                    "use method=galerkin");
    }
    if (p.phi_e) {
        if (p.phi_e->n_cols() < n_s) throw Error("spatial ROM: phi_e narrower than phi");
    }
}

// ---------------------------------------------------------------------------
// Galerkin-type methods advance a dense reduced ODE; the nonlinear term is
// evaluated either in full (galerkin) or through an oblique projector at
// sampled rows only (deim, deim_sns).
class ReducedOde final : public SemiDiscreteModel {
public:
    ReducedOde(const SpatialRomProblem& p, const ParameterPoint& mu)
        : fom_(p.model), method_(p.method), phi_(p.phi.columns), u0_(p.model->initial_state(mu)) {
        const int n_s = static_cast<int>(phi_.cols());
        configure(n_s, fom_->param_domain());

        if (method_ == RomMethod::galerkin || method_ == RomMethod::deim) {
            Matrix reduced_mass;
            if (fom_->has_identity_mass()) {
                reduced_mass = phi_.transpose() * phi_;
            } else {
                reduced_mass = phi_.transpose() * (fom_->mass_matrix() * phi_);
            }
            SpMat sparse = reduced_mass.sparseView(1.0, 0.0);
            set_mass_matrix(std::move(sparse));
        } else {
            // deim_sns: the reduced mass cancels against the SNS basis
            set_identity_mass();
        }

        if (method_is_hyper_reduced(method_)) {
            proj_ = &*p.projector;
            sample_rows_ = proj_->plan.indices;
            stencil_rows_ = fom_->stencil_union(sample_rows_);
            phi_stencil_.resize(static_cast<Eigen::Index>(stencil_rows_.size()), phi_.cols());
            u0_stencil_.resize(static_cast<Eigen::Index>(stencil_rows_.size()));
            for (std::size_t i = 0; i < stencil_rows_.size(); ++i) {
                phi_stencil_.row(static_cast<Eigen::Index>(i)) = phi_.row(stencil_rows_[i]);
                u0_stencil_[static_cast<Eigen::Index>(i)] = u0_[stencil_rows_[i]];
            }
        }
        if (method_ == RomMethod::deim) {
            d_mat_ = phi_.transpose() * proj_->basis.columns;
        }
        if (method_ == RomMethod::deim_sns) {
            const int n_b = proj_->n_cols();
            left_factor_ = Matrix::Zero(n_s, n_b);
            left_factor_.leftCols(n_s).setIdentity();
            if (n_b > n_s) {
                // extended variant: [I | (Phi^T M Phi)^{-1} (Phi^T M Phi_E)]
                if (!p.phi_e || p.phi_e->n_cols() != n_b) {
                    throw Error("deim_sns extended variant needs phi_e matching the projector");
                }
                const Matrix& phi_e = p.phi_e->columns;
                Matrix m_phi_e = fom_->has_identity_mass()
                                     ? phi_e.rightCols(n_b - n_s)
                                     : Matrix(fom_->mass_matrix() * phi_e.rightCols(n_b - n_s));
                Matrix m_phi = fom_->has_identity_mass() ? phi_ : Matrix(fom_->mass_matrix() * phi_);
                const Matrix gram = phi_.transpose() * m_phi;
                left_factor_.rightCols(n_b - n_s) =
                    gram.ldlt().solve(phi_.transpose() * m_phi_e);
            }
        }
    }

    Vector initial_state(const ParameterPoint&) const override {
        return Vector::Zero(n_space());
    }

    void velocity_rows(const Vector& uhat, double t, const ParameterPoint& mu,
                       std::span<const int> rows, Eigen::Ref<Vector> out) const override {
        counters().add_velocity_call();
        counters().add_velocity_rows(static_cast<std::int64_t>(rows.size()));
        const Vector g = reduced_velocity(uhat, t, mu);
        for (std::size_t k = 0; k < rows.size(); ++k) out[static_cast<Eigen::Index>(k)] = g[rows[k]];
    }

    JacobianRows jacobian_rows(const Vector& uhat, double t, const ParameterPoint& mu,
                               std::span<const int> rows) const override {
        counters().add_jacobian_rows(static_cast<std::int64_t>(rows.size()));
        const Matrix dg = reduced_jacobian(uhat, t, mu);
        JacobianRows jr;
        jr.offsets.push_back(0);
        for (int r : rows) {
            for (int c = 0; c < n_space(); ++c) {
                jr.cols.push_back(c);
                jr.vals.push_back(dg(r, c));
            }
            jr.offsets.push_back(static_cast<int>(jr.cols.size()));
        }
        return jr;
    }

    void stencil(int, std::vector<int>& out) const override {
        out.resize(static_cast<std::size_t>(n_space()));
        for (int i = 0; i < n_space(); ++i) out[static_cast<std::size_t>(i)] = i;
    }

private:
    Vector sampled_f(const Vector& uhat, double t, const ParameterPoint& mu) const {
        Vector u = Vector::Zero(fom_->n_space());
        const Vector vals = u0_stencil_ + phi_stencil_ * uhat;
        for (std::size_t i = 0; i < stencil_rows_.size(); ++i) {
            u[stencil_rows_[i]] = vals[static_cast<Eigen::Index>(i)];
        }
        Vector f_z(static_cast<Eigen::Index>(sample_rows_.size()));
        fom_->velocity_rows(u, t, mu, sample_rows_, f_z);
        return f_z;
    }

    Matrix sampled_jacobian_times_phi(const Vector& uhat, double t,
                                      const ParameterPoint& mu) const {
        Vector u = Vector::Zero(fom_->n_space());
        const Vector vals = u0_stencil_ + phi_stencil_ * uhat;
        for (std::size_t i = 0; i < stencil_rows_.size(); ++i) {
            u[stencil_rows_[i]] = vals[static_cast<Eigen::Index>(i)];
        }
        const JacobianRows jr = fom_->jacobian_rows(u, t, mu, sample_rows_);
        Matrix out = Matrix::Zero(static_cast<Eigen::Index>(sample_rows_.size()), phi_.cols());
        for (int r = 0; r < jr.n_rows(); ++r) {
            for (int k = jr.offsets[static_cast<std::size_t>(r)];
                 k < jr.offsets[static_cast<std::size_t>(r) + 1]; ++k) {
                out.row(r) += jr.vals[static_cast<std::size_t>(k)] *
                              phi_.row(jr.cols[static_cast<std::size_t>(k)]);
            }
        }
        return out;
    }

    Vector reduced_velocity(const Vector& uhat, double t, const ParameterPoint& mu) const {
        switch (method_) {
            case RomMethod::galerkin: {
                const Vector u = u0_ + phi_ * uhat;
                return phi_.transpose() * fom_->velocity(u, t, mu);
            }
            case RomMethod::deim:
                return d_mat_ * proj_->solve_small(sampled_f(uhat, t, mu));
            case RomMethod::deim_sns:
                return left_factor_ * proj_->solve_small(sampled_f(uhat, t, mu));
            default:
                throw Error("reduced_velocity: not a Galerkin-type method");
        }
    }

    Matrix reduced_jacobian(const Vector& uhat, double t, const ParameterPoint& mu) const {
        switch (method_) {
            case RomMethod::galerkin: {
                const Vector u = u0_ + phi_ * uhat;
                const SpMat jac = fom_->velocity_jacobian(u, t, mu);
                return phi_.transpose() * (jac * phi_);
            }
            case RomMethod::deim:
                return d_mat_ * proj_->solve_small(sampled_jacobian_times_phi(uhat, t, mu));
            case RomMethod::deim_sns:
                return left_factor_ *
                       proj_->solve_small(sampled_jacobian_times_phi(uhat, t, mu));
            default:
                throw Error("reduced_jacobian: not a Galerkin-type method");
        }
    }

    const SemiDiscreteModel* fom_;
    RomMethod method_;
    Matrix phi_;
    Vector u0_;
    const ObliqueProjector* proj_ = nullptr;
    std::vector<int> sample_rows_;
    std::vector<int> stencil_rows_;
    Matrix phi_stencil_;
    Vector u0_stencil_;
    Matrix d_mat_;
    Matrix left_factor_;
};

RomTrajectory run_galerkin_type(const SpatialRomProblem& p, const ParameterPoint& mu) {
    ReducedOde reduced(p, mu);
    IntegrateOptions opts;
    opts.newton = p.newton;
    Trajectory traj = integrate(reduced, p.scheme, p.grid, mu, opts);
    RomTrajectory out;
    out.generalized = std::move(traj.states);
    out.generalized_half = std::move(traj.half_states);
    out.newton_counts = std::move(traj.newton_counts);
    return out;
}

// ---------------------------------------------------------------------------
// LSPG / GNAT: Gauss-Newton on the (sampled) time-discrete residual.
class PetrovGalerkinSolver {
public:
    PetrovGalerkinSolver(const SpatialRomProblem& p, const ParameterPoint& mu)
        : p_(p), mu_(mu), model_(*p.model), whiten_(p.method != RomMethod::lspg) {
        u0_ = model_.initial_state(mu);
        const Matrix& phi = p_.phi.columns;
        Matrix b_full = model_.has_identity_mass() ? phi : Matrix(model_.mass_matrix() * phi);

        if (whiten_) {
            proj_ = &*p_.projector;
            rows_ = proj_->plan.indices;
        } else {
            rows_.resize(static_cast<std::size_t>(model_.n_space()));
            for (int i = 0; i < model_.n_space(); ++i) rows_[static_cast<std::size_t>(i)] = i;
        }
        stencil_ = model_.stencil_union(rows_);
        phi_stencil_.resize(static_cast<Eigen::Index>(stencil_.size()), phi.cols());
        u0_stencil_.resize(static_cast<Eigen::Index>(stencil_.size()));
        for (std::size_t i = 0; i < stencil_.size(); ++i) {
            phi_stencil_.row(static_cast<Eigen::Index>(i)) = phi.row(stencil_[i]);
            u0_stencil_[static_cast<Eigen::Index>(i)] = u0_[stencil_[i]];
        }
        b_z_.resize(static_cast<Eigen::Index>(rows_.size()), phi.cols());
        for (std::size_t i = 0; i < rows_.size(); ++i) {
            b_z_.row(static_cast<Eigen::Index>(i)) = b_full.row(rows_[i]);
        }
        // constant-Jacobian factor for the linear (explicit-in-f) solves
        const Matrix g0 = whitened(b_z_);
        g0_ = g0;
        normal_llt_.compute(Matrix(g0.transpose() * g0));
        u_buffer_ = Vector::Zero(model_.n_space());
    }

    RomTrajectory run() {
        const int n_s = static_cast<int>(p_.phi.columns.cols());
        const int n_steps = p_.grid.n_steps;
        const bool rk2 = p_.scheme == SchemeId::MidpointRK2;
        RomTrajectory traj;
        traj.generalized = Matrix::Zero(n_s, n_steps + 1);
        if (rk2) traj.generalized_half = Matrix::Zero(n_s, n_steps);
        traj.newton_counts.assign(static_cast<std::size_t>(n_steps), 0);

        // sampled nonlinear-term history cache (f at uhat^{n-1}, uhat^{n-2})
        const bool needs_history = p_.scheme == SchemeId::ForwardEuler ||
                                   p_.scheme == SchemeId::AdamsBashforth2 ||
                                   p_.scheme == SchemeId::AdamsMoulton2 || rk2;
        std::deque<Vector> f_hist;
        if (needs_history) f_hist.push_front(sampled_f(Vector::Zero(n_s), 0.0));

        const double dt = p_.grid.dt;
        for (int step = 1; step <= n_steps; ++step) {
            const double t_n = step * dt;
            const Vector u_prev = traj.generalized.col(step - 1);
            int iterations = 0;
            current_step_ = step;

            if (rk2) {
                // two linear stages: midpoint then full step
                Vector lin = -u_prev;
                Vector known = f_hist.front();
                Vector u_half =
                    solve_linear_stage(u_prev, lin, 0.5 * dt, known);
                traj.generalized_half.col(step - 1) = u_half;
                Vector f_half = sampled_f(u_half, t_n - 0.5 * dt);
                traj.generalized.col(step) = solve_linear_stage(u_prev, lin, dt, f_half);
                iterations = 2;
            } else {
                const ResidualCoeffs c = scheme_residual_coeffs(
                    effective_scheme(p_.scheme, step));
                Vector lin = Vector::Zero(n_s);
                for (std::size_t k = 1; k < c.a.size(); ++k) {
                    if (c.a[k] != 0.0) lin += c.a[k] * traj.generalized.col(step - static_cast<int>(k));
                }
                Vector known = Vector::Zero(static_cast<Eigen::Index>(rows_.size()));
                for (std::size_t k = 1; k < c.b.size(); ++k) {
                    if (c.b[k] != 0.0) known += c.b[k] * f_hist[k - 1];
                }
                if (c.b[0] == 0.0) {
                    traj.generalized.col(step) = solve_linear_stage(u_prev, lin, dt, known);
                    iterations = 1;
                } else {
                    traj.generalized.col(step) =
                        gauss_newton(u_prev, lin, c.b[0], known, dt, t_n, &iterations);
                }
            }

            if (needs_history) {
                f_hist.push_front(sampled_f(traj.generalized.col(step), t_n));
                while (f_hist.size() > 2) f_hist.pop_back();
            }
            traj.newton_counts[static_cast<std::size_t>(step - 1)] = iterations;
        }
        return traj;
    }

private:
    static SchemeId effective_scheme(SchemeId scheme, int step) {
        if (step == 1 && scheme == SchemeId::AdamsBashforth2) return SchemeId::ForwardEuler;
        if (step == 1 && scheme == SchemeId::BDF2) return SchemeId::BackwardEuler;
        return scheme;
    }

    Vector whitened(const Vector& v) const { return whiten_ ? proj_->solve_small(v) : v; }
    Matrix whitened(const Matrix& m) const { return whiten_ ? proj_->solve_small(m) : m; }

    Vector sampled_f(const Vector& uhat, double t) {
        const Vector vals = u0_stencil_ + phi_stencil_ * uhat;
        for (std::size_t i = 0; i < stencil_.size(); ++i) {
            u_buffer_[stencil_[i]] = vals[static_cast<Eigen::Index>(i)];
        }
        Vector f_z(static_cast<Eigen::Index>(rows_.size()));
        model_.velocity_rows(u_buffer_, t, mu_, rows_, f_z);
        return f_z;
    }

    Matrix sampled_jacobian_times_phi(const Vector& uhat, double t) {
        const Vector vals = u0_stencil_ + phi_stencil_ * uhat;
        for (std::size_t i = 0; i < stencil_.size(); ++i) {
            u_buffer_[stencil_[i]] = vals[static_cast<Eigen::Index>(i)];
        }
        const JacobianRows jr = model_.jacobian_rows(u_buffer_, t, mu_, rows_);
        Matrix out = Matrix::Zero(static_cast<Eigen::Index>(rows_.size()), p_.phi.columns.cols());
        for (int r = 0; r < jr.n_rows(); ++r) {
            for (int k = jr.offsets[static_cast<std::size_t>(r)];
                 k < jr.offsets[static_cast<std::size_t>(r) + 1]; ++k) {
                out.row(r) += jr.vals[static_cast<std::size_t>(k)] *
                              p_.phi.columns.row(jr.cols[static_cast<std::size_t>(k)]);
            }
        }
        return out;
    }

    void log_residual(const Vector& r_z, int iteration) {
        if (p_.residual_log && !whiten_) {
            p_.residual_log->push_back({r_z, current_step_, iteration});
        }
    }

    // Minimizes |W(B_z (u - u_prev + lin + u_prev... ))| for the stages whose
    // nonlinear term is already known: residual = B_z(u + lin) - tau * known.
    Vector solve_linear_stage(const Vector& u_prev, const Vector& lin, double tau,
                              const Vector& known) {
        const Vector eta_const = whitened(Vector(b_z_ * (u_prev + lin) - tau * known));
        const Vector delta = normal_llt_.solve(g0_.transpose() * eta_const);
        Vector u = u_prev - delta;
        if (p_.residual_log && !whiten_) {
            const Vector r = b_z_ * (u + lin) - tau * known;
            log_residual(r, 1);
        }
        return u;
    }

    Vector gauss_newton(const Vector& u_start, const Vector& lin, double b0, const Vector& known,
                        double dt, double t_n, int* iterations) {
        Vector u = u_start;
        auto eval_eta = [&](const Vector& cand, Vector* raw) {
            const Vector f_z = sampled_f(cand, t_n);
            const Vector r_z = b_z_ * (cand + lin) - dt * (b0 * f_z + known);
            if (raw) *raw = r_z;
            return whitened(r_z);
        };
        Vector r_z;
        Vector eta = eval_eta(u, &r_z);
        log_residual(r_z, 0);
        double norm = eta.norm();
        double prev_norm = std::numeric_limits<double>::infinity();
        for (int it = 0;; ++it) {
            if (norm <= p_.newton.abs_tol) break;
            if (it > 0 && std::abs(prev_norm - norm) < 1e-10) break;
            if (it >= p_.newton.max_iterations) {
                throw SolverFailure("Gauss-Newton stagnation after " +
                                        std::to_string(p_.newton.max_iterations) +
                                        " iterations (|r| = " + std::to_string(norm) + ")",
                                    u, norm);
            }
            const Matrix e = b_z_ - (dt * b0) * sampled_jacobian_times_phi(u, t_n);
            const Matrix g = whitened(e);
            Matrix normal = g.transpose() * g;
            Eigen::LLT<Matrix> llt(normal);
            Vector delta;
            if (llt.info() == Eigen::Success) {
                delta = llt.solve(-(g.transpose() * eta));
            } else {
                delta = g.colPivHouseholderQr().solve(-eta);
            }
            // full step first; backtrack on nonphysical states or residual growth
            prev_norm = norm;
            double alpha = 1.0;
            bool accepted = false;
            for (int ls = 0; ls < 12 && !accepted; ++ls, alpha *= 0.5) {
                const Vector trial = u + alpha * delta;
                try {
                    Vector trial_raw;
                    const Vector trial_eta = eval_eta(trial, &trial_raw);
                    if (trial_eta.norm() < norm || trial_eta.norm() <= p_.newton.abs_tol) {
                        u = trial;
                        eta = trial_eta;
                        norm = eta.norm();
                        r_z = std::move(trial_raw);
                        accepted = true;
                    }
                } catch (const Error&) {
                    // nonphysical trial: halve the step
                }
            }
            if (!accepted) {
                throw SolverFailure("Gauss-Newton line search failed (|r| = " +
                                        std::to_string(norm) + ")",
                                    u, norm);
            }
            ++(*iterations);
            log_residual(r_z, *iterations);
            if ((alpha * 2.0) * delta.norm() <= p_.newton.rel_tol * (1.0 + u.norm())) break;
        }
        return u;
    }

    const SpatialRomProblem& p_;
    ParameterPoint mu_;
    const SemiDiscreteModel& model_;
    bool whiten_;
    const ObliqueProjector* proj_ = nullptr;
    Vector u0_;
    std::vector<int> rows_;
    std::vector<int> stencil_;
    Matrix phi_stencil_;
    Vector u0_stencil_;
    Matrix b_z_;
    Matrix g0_;
    Eigen::LLT<Matrix> normal_llt_;
    Vector u_buffer_;
    int current_step_ = 0;
};

}  // namespace

RomTrajectory run_spatial_rom(const SpatialRomProblem& problem, const ParameterPoint& mu) {
    validate_problem(problem);
    switch (problem.method) {
        case RomMethod::galerkin:
        case RomMethod::deim:
        case RomMethod::deim_sns:
            return run_galerkin_type(problem, mu);
        case RomMethod::lspg:
        case RomMethod::gnat:
        case RomMethod::gnat_sns: {
            PetrovGalerkinSolver solver(problem, mu);
            return solver.run();
        }
    }
    throw Error("unknown ROM method");
}

namespace {

// Residuals of the explicit Galerkin reference, recomputed from the stored
// generalized trajectory (the LSPG equivalence for explicit schemes).
std::vector<ResidualRecord> explicit_reference_residuals(const SemiDiscreteModel& model,
                                                         const Basis& phi, SchemeId scheme,
                                                         const TimeGrid& grid,
                                                         const RomTrajectory& traj,
                                                         const ParameterPoint& mu) {
    const Vector u0 = model.initial_state(mu);
    const Matrix b_full =
        model.has_identity_mass() ? phi.columns : Matrix(model.mass_matrix() * phi.columns);
    std::vector<ResidualRecord> records;
    const double dt = grid.dt;

    auto lifted = [&](const Vector& uhat) { return Vector(u0 + phi.columns * uhat); };

    if (scheme == SchemeId::MidpointRK2) {
        for (int step = 1; step <= grid.n_steps; ++step) {
            const Vector up = traj.generalized.col(step - 1);
            const Vector uh = traj.generalized_half.col(step - 1);
            const Vector un = traj.generalized.col(step);
            const double t_prev = (step - 1) * dt;
            const Vector f_prev = model.velocity(lifted(up), t_prev, mu);
            const Vector f_half = model.velocity(lifted(uh), t_prev + 0.5 * dt, mu);
            records.push_back({Vector(b_full * (uh - up) - 0.5 * dt * f_prev), step, 0});
            records.push_back({Vector(b_full * (un - up) - dt * f_half), step, 1});
        }
        return records;
    }

    Vector f_prev = model.velocity(lifted(traj.generalized.col(0)), 0.0, mu);
    Vector f_prev2;
    for (int step = 1; step <= grid.n_steps; ++step) {
        const SchemeId eff = (step == 1 && scheme == SchemeId::AdamsBashforth2)
                                 ? SchemeId::ForwardEuler
                                 : scheme;
        const ResidualCoeffs c = scheme_residual_coeffs(eff);
        Vector r = b_full * (traj.generalized.col(step) + -1.0 * traj.generalized.col(step - 1));
        if (c.a.size() > 2 && c.a[2] != 0.0) {
            r += b_full * (c.a[2] * traj.generalized.col(step - 2));
            r += (1.0 + c.a[1]) * (b_full * traj.generalized.col(step - 1));
        }
        if (c.b.size() > 1 && c.b[1] != 0.0) r -= dt * c.b[1] * f_prev;
        if (c.b.size() > 2 && c.b[2] != 0.0) r -= dt * c.b[2] * f_prev2;
        records.push_back({std::move(r), step, 0});
        f_prev2 = f_prev;
        f_prev = model.velocity(lifted(traj.generalized.col(step)), step * dt, mu);
    }
    return records;
}

}  // namespace

SnapshotSet collect_residual_snapshots(const SemiDiscreteModel& model, const Basis& phi,
                                       SchemeId scheme, const TimeGrid& grid,
                                       const std::vector<ParameterPoint>& training,
                                       const NewtonOptions& newton, int threads) {
    std::vector<std::vector<ResidualRecord>> logs(training.size());
    detail::parallel_for(static_cast<int>(training.size()), threads, [&](int k) {
        const ParameterPoint& mu = training[static_cast<std::size_t>(k)];
        if (scheme_is_explicit(scheme)) {
            SpatialRomProblem p;
            p.model = &model;
            p.method = RomMethod::galerkin;
            p.scheme = scheme;
            p.grid = grid;
            p.phi = phi;
            p.newton = newton;
            const RomTrajectory traj = run_spatial_rom(p, mu);
            logs[static_cast<std::size_t>(k)] =
                explicit_reference_residuals(model, phi, scheme, grid, traj, mu);
        } else {
            SpatialRomProblem p;
            p.model = &model;
            p.method = RomMethod::lspg;
            p.scheme = scheme;
            p.grid = grid;
            p.phi = phi;
            p.newton = newton;
            p.residual_log = &logs[static_cast<std::size_t>(k)];
            run_spatial_rom(p, mu);
        }
    });

    SnapshotSet set;
    set.kind = SnapshotKind::residual;
    std::size_t total = 0;
    for (const auto& log : logs) total += log.size();
    set.matrix.resize(model.n_space(), static_cast<Eigen::Index>(total));
    Eigen::Index col = 0;
    for (std::size_t k = 0; k < logs.size(); ++k) {
        for (const auto& rec : logs[k]) {
            set.matrix.col(col++) = rec.value;
            set.provenance.push_back({static_cast<int>(k), 2 * rec.step, rec.newton_iteration});
        }
    }
    return set;
}

}  // namespace romkit
