// Copyright romkit developers. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include "romkit/spacetime.hpp"

#include <Eigen/Cholesky>
#include <Eigen/QR>
#include <cmath>

#include "romkit/detail/parallel.hpp"

namespace romkit {

Matrix st_abe_apply(const SemiDiscreteModel& model, const Vector& u0, const Matrix& blocks) {
    Matrix out(blocks.rows(), blocks.cols());
    for (Eigen::Index b = 0; b < blocks.cols(); ++b) {
        const Vector prev = (b == 0) ? u0 : Vector(blocks.col(b - 1));
        out.col(b) = model.apply_mass(Vector(blocks.col(b) - prev));
    }
    return out;
}

Matrix st_residual_blocks(const SemiDiscreteModel& model, const TimeGrid& grid,
                          const ParameterPoint& mu, const Vector& u0, const Matrix& u_blocks) {
    Matrix r(u_blocks.rows(), u_blocks.cols());
    for (Eigen::Index b = 0; b < u_blocks.cols(); ++b) {
        const Vector prev = (b == 0) ? u0 : Vector(u_blocks.col(b - 1));
        const double t_n = (static_cast<double>(b) + 1.0) * grid.dt;
        r.col(b) = model.apply_mass(Vector(u_blocks.col(b) - prev)) -
                   grid.dt * model.velocity(u_blocks.col(b), t_n, mu);
    }
    return r;
}

Matrix st_apply_all_blocks(const SpaceTimeBasis& basis, const Vector& x) {
    const Matrix coeff = basis.scatter_coefficients(x);
    return basis.spatial * (coeff * basis.temporal.transpose());
}

SpaceTimeBasis spatial_as_space_time(const Basis& phi) {
    SpaceTimeBasis st;
    st.spatial = phi.columns;
    st.temporal = Matrix::Ones(1, 1);
    st.spatial_sv = Vector::Ones(phi.n_cols());
    st.temporal_sv = Vector::Ones(1);
    for (int i = 0; i < phi.n_cols(); ++i) st.pairs.emplace_back(i, 0);
    return st;
}

// Per-block columns of the basis: column k of the block is
// T(b, j_k) * S(:, i_k) for pair k = (i_k, j_k).
namespace {
void factored_time_block(const Matrix& spatial, const Matrix& temporal,
                         const std::vector<std::pair<int, int>>& pairs, int step, bool abe,
                         int prev_step_sign, Matrix& out) {
    out.resize(spatial.rows(), static_cast<Eigen::Index>(pairs.size()));
    for (std::size_t k = 0; k < pairs.size(); ++k) {
        const auto [i, j] = pairs[k];
        double w = temporal(step, j);
        if (abe && step > 0) w -= prev_step_sign * temporal(step - 1, j);
        out.col(static_cast<Eigen::Index>(k)) = w * spatial.col(i);
    }
}
}  // namespace

StResidualBasis StResidualBasis::dense(Matrix columns, int n_space, int n_steps) {
    StResidualBasis b;
    b.kind_ = Kind::dense;
    b.n_space_ = n_space;
    b.n_steps_ = n_steps;
    b.n_cols_ = static_cast<int>(columns.cols());
    if (columns.rows() != static_cast<Eigen::Index>(n_space) * n_steps) {
        throw Error("StResidualBasis::dense: row count mismatch");
    }
    b.dense_ = std::move(columns);
    return b;
}

StResidualBasis StResidualBasis::factored(const SpaceTimeBasis& basis) {
    StResidualBasis b;
    b.kind_ = Kind::factored;
    b.basis_ = basis;
    b.n_space_ = basis.n_space();
    b.n_steps_ = basis.n_steps();
    b.n_cols_ = basis.n_cols();
    return b;
}

StResidualBasis StResidualBasis::abe_factored(const SemiDiscreteModel& model,
                                              const SpaceTimeBasis& basis) {
    StResidualBasis b;
    b.kind_ = Kind::abe_factored;
    b.basis_ = basis;
    b.mass_spatial_ = model.has_identity_mass() ? basis.spatial
                                                : Matrix(model.mass_matrix() * basis.spatial);
    b.n_space_ = basis.n_space();
    b.n_steps_ = basis.n_steps();
    b.n_cols_ = basis.n_cols();
    return b;
}

void StResidualBasis::time_block(int step, Matrix& out) const {
    switch (kind_) {
        case Kind::dense:
            out = dense_.middleRows(static_cast<Eigen::Index>(step) * n_space_, n_space_);
            return;
        case Kind::factored:
            factored_time_block(basis_.spatial, basis_.temporal, basis_.pairs, step, false, 0, out);
            return;
        case Kind::abe_factored:
            factored_time_block(mass_spatial_, basis_.temporal, basis_.pairs, step, true, 1, out);
            return;
    }
}

Matrix StResidualBasis::gather_rows(const std::vector<int>& stacked_rows) const {
    Matrix out(static_cast<Eigen::Index>(stacked_rows.size()), n_cols_);
    Matrix block;
    int cached_step = -1;
    for (std::size_t i = 0; i < stacked_rows.size(); ++i) {
        const int step = stacked_rows[i] / n_space_;
        const int space = stacked_rows[i] % n_space_;
        if (step != cached_step) {
            time_block(step, block);
            cached_step = step;
        }
        out.row(static_cast<Eigen::Index>(i)) = block.row(space);
    }
    return out;
}

SamplingPlan st_gnat_sampling(const StResidualBasis& basis, int n_z) {
    const int n = basis.n_cols();
    if (n_z < n || static_cast<long>(n_z) > basis.n_rows()) {
        throw Error("st_gnat_sampling: n_z must satisfy basis width <= n_z <= rows");
    }
    SamplingPlan plan;
    plan.method = SamplingMethod::gnat_greedy;
    std::vector<bool> taken;  // per candidate block, rebuilt lazily
    Matrix chosen_rows(0, n);
    Matrix block;
    const int n_steps = basis.n_steps();

    std::vector<int> fit_cols;
    for (int it = 0; it < n_z; ++it) {
        const int c = it % n;
        const bool first_pass = it < n;
        fit_cols.clear();
        if (first_pass) {
            for (int j = 0; j < c; ++j) fit_cols.push_back(j);
        } else {
            for (int j = 0; j < n; ++j) {
                if (j != c) fit_cols.push_back(j);
            }
        }
        Vector x;
        if (!fit_cols.empty() && chosen_rows.rows() > 0) {
            Matrix a(chosen_rows.rows(), static_cast<Eigen::Index>(fit_cols.size()));
            for (std::size_t j = 0; j < fit_cols.size(); ++j) {
                a.col(static_cast<Eigen::Index>(j)) = chosen_rows.col(fit_cols[j]);
            }
            x = a.colPivHouseholderQr().solve(Vector(chosen_rows.col(c)));
        }

        // round-robin over stratified time blocks
        const int step = static_cast<int>((static_cast<long>(it) * n_steps) / n_z);
        basis.time_block(step, block);
        Vector r = block.col(c);
        for (std::size_t j = 0; j < fit_cols.size(); ++j) {
            if (x.size()) r -= x[static_cast<Eigen::Index>(j)] * block.col(fit_cols[j]);
        }
        int best = -1;
        double best_val = -1.0;
        for (int k = 0; k < basis.n_space(); ++k) {
            const int global = step * basis.n_space() + k;
            if (std::find(plan.indices.begin(), plan.indices.end(), global) !=
                plan.indices.end()) {
                continue;
            }
            const double a = std::abs(r[k]);
            if (a > best_val) {
                best_val = a;
                best = global;
            }
        }
        if (best < 0) throw Error("st_gnat_sampling: time block exhausted");
        plan.indices.push_back(best);
        Matrix grown(chosen_rows.rows() + 1, n);
        grown.topRows(chosen_rows.rows()) = chosen_rows;
        grown.bottomRows(1) = block.row(best % basis.n_space());
        chosen_rows = std::move(grown);
    }
    return plan;
}

namespace {

struct StWhitener {
    Matrix q, r;
    double condition = 0.0;

    Vector solve(const Vector& v) const {
        return r.triangularView<Eigen::Upper>().solve(q.transpose() * v);
    }
    Matrix solve(const Matrix& m) const {
        return r.triangularView<Eigen::Upper>().solve(q.transpose() * m);
    }
};

StWhitener build_whitener(const Matrix& sampled_basis_rows) {
    Eigen::JacobiSVD<Matrix> svd(sampled_basis_rows);
    const double smin = svd.singularValues().minCoeff();
    if (smin <= 0.0) throw Error("st_gnat: sampled residual basis is rank deficient");
    StWhitener w;
    w.condition = svd.singularValues().maxCoeff() / smin;
    if (w.condition > 1e12) {
        throw Error("st_gnat: cond(Z^T Phi_r) exceeds 1e12");
    }
    Eigen::HouseholderQR<Matrix> qr(sampled_basis_rows);
    w.q = qr.householderQ() *
          Matrix::Identity(sampled_basis_rows.rows(), sampled_basis_rows.cols());
    w.r = qr.matrixQR()
              .topRows(sampled_basis_rows.cols())
              .triangularView<Eigen::Upper>();
    return w;
}

}  // namespace

Matrix st_jacobian_dense(const SpaceTimeProblem& problem, const ParameterPoint& mu,
                         const Matrix& u_blocks) {
    const SemiDiscreteModel& model = *problem.model;
    const SpaceTimeBasis& phi = *problem.phi;
    const int n_space = phi.n_space();
    const int n_steps = phi.n_steps();
    const int n_st = phi.n_cols();
    Matrix jac(static_cast<Eigen::Index>(n_space) * n_steps, n_st);
    Matrix block, prev_block;
    for (int b = 0; b < n_steps; ++b) {
        factored_time_block(phi.spatial, phi.temporal, phi.pairs, b, false, 0, block);
        Matrix contrib = model.has_identity_mass() ? block : Matrix(model.mass_matrix() * block);
        if (b > 0) {
            contrib -= model.has_identity_mass() ? prev_block
                                                 : Matrix(model.mass_matrix() * prev_block);
        }
        const double t_n = (b + 1.0) * problem.grid.dt;
        const SpMat jf = model.velocity_jacobian(u_blocks.col(b), t_n, mu);
        contrib -= problem.grid.dt * (jf * block);
        jac.middleRows(static_cast<Eigen::Index>(b) * n_space, n_space) = contrib;
        prev_block = block;
    }
    return jac;
}

Vector st_lspg_solve(const SpaceTimeProblem& problem, const ParameterPoint& mu,
                     StSolveStats* stats, std::vector<Vector>* residual_log) {
    const SemiDiscreteModel& model = *problem.model;
    const SpaceTimeBasis& phi = *problem.phi;
    const Vector u0 = model.initial_state(mu);
    Vector x = Vector::Zero(phi.n_cols());

    Matrix u_blocks = Matrix((st_apply_all_blocks(phi, x)).colwise() + u0);
    Matrix r = st_residual_blocks(model, problem.grid, mu, u0, u_blocks);
    if (residual_log) residual_log->push_back(Vector(r.reshaped()));
    double norm = r.norm();
    double prev_norm = std::numeric_limits<double>::infinity();
    int iterations = 0;
    for (int it = 0;; ++it) {
        if (norm <= problem.gauss_newton.abs_tol) break;
        if (it > 0 && std::abs(prev_norm - norm) < 1e-10) break;
        if (it >= problem.gauss_newton.max_iterations) {
            throw SolverFailure("ST-LSPG Gauss-Newton stagnation (|r| = " +
                                    std::to_string(norm) + ")",
                                x, norm);
        }
        const Matrix jac = st_jacobian_dense(problem, mu, u_blocks);
        const Vector rhs = jac.transpose() * r.reshaped();
        Matrix normal = jac.transpose() * jac;
        Eigen::LLT<Matrix> llt(normal);
        Vector delta;
        if (llt.info() == Eigen::Success) {
            delta = llt.solve(-rhs);
        } else {
            delta = jac.colPivHouseholderQr().solve(-Vector(r.reshaped()));
        }
        prev_norm = norm;
        double alpha = 1.0;
        bool accepted = false;
        for (int ls = 0; ls < 12 && !accepted; ++ls, alpha *= 0.5) {
            const Vector trial = x + alpha * delta;
            try {
                Matrix trial_blocks =
                    Matrix((st_apply_all_blocks(phi, trial)).colwise() + u0);
                Matrix trial_r =
                    st_residual_blocks(model, problem.grid, mu, u0, trial_blocks);
                const double trial_norm = trial_r.norm();
                if (trial_norm < norm || trial_norm <= problem.gauss_newton.abs_tol) {
                    x = trial;
                    u_blocks = std::move(trial_blocks);
                    r = std::move(trial_r);
                    norm = trial_norm;
                    accepted = true;
                }
            } catch (const Error&) {
                // nonphysical trial: halve the step
            }
        }
        if (!accepted) {
            throw SolverFailure("ST-LSPG line search failed (|r| = " + std::to_string(norm) +
                                    ")",
                                x, norm);
        }
        ++iterations;
        if (residual_log) residual_log->push_back(Vector(r.reshaped()));
        if ((alpha * 2.0) * delta.norm() <= problem.gauss_newton.rel_tol * (1.0 + x.norm())) {
            break;
        }
    }
    if (stats) stats->gauss_newton_iterations = iterations;
    return x;
}

namespace {

// Sampled-row bookkeeping for the hyper-reduced space-time solve: rows are
// grouped by time block; the state is reconstructed only on the union of
// the stencils of the sampled spatial rows of each block (and the block
// before it, for the subdiagonal mass term).
class SampledStResidual {
public:
    SampledStResidual(const SpaceTimeProblem& problem, const SamplingPlan& plan,
                      const ParameterPoint& mu)
        : model_(*problem.model), phi_(*problem.phi), grid_(problem.grid), mu_(mu) {
        u0_ = model_.initial_state(mu);
        identity_mass_ = model_.has_identity_mass();
        if (!identity_mass_) {
            mass_rows_ = SpMat(model_.mass_matrix());
            mass_rows_ = mass_rows_.transpose();  // column j holds row j of M
        }
        const int n_space = phi_.n_space();
        for (std::size_t i = 0; i < plan.indices.size(); ++i) {
            const int step = plan.indices[i] / n_space;
            const int space = plan.indices[i] % n_space;
            auto& group = groups_[step];
            group.spaces.push_back(space);
            group.out_positions.push_back(static_cast<int>(i));
        }
        for (auto& [step, group] : groups_) {
            std::vector<int> state_rows;  // rows of u^step we need
            for (int space : group.spaces) {
                std::vector<int> st;
                model_.stencil(space, st);
                state_rows.insert(state_rows.end(), st.begin(), st.end());
                if (!identity_mass_) {
                    for (SpMat::InnerIterator it(mass_rows_, space); it; ++it) {
                        state_rows.push_back(static_cast<int>(it.row()));
                    }
                }
            }
            std::sort(state_rows.begin(), state_rows.end());
            state_rows.erase(std::unique(state_rows.begin(), state_rows.end()),
                             state_rows.end());
            group.state_rows = std::move(state_rows);
            // mass rows also touch the previous block
            if (!identity_mass_) {
                std::vector<int> prev_rows;
                for (int space : group.spaces) {
                    for (SpMat::InnerIterator it(mass_rows_, space); it; ++it) {
                        prev_rows.push_back(static_cast<int>(it.row()));
                    }
                }
                std::sort(prev_rows.begin(), prev_rows.end());
                prev_rows.erase(std::unique(prev_rows.begin(), prev_rows.end()), prev_rows.end());
                group.prev_rows = std::move(prev_rows);
            } else {
                group.prev_rows = group.spaces;
                std::sort(group.prev_rows.begin(), group.prev_rows.end());
                group.prev_rows.erase(
                    std::unique(group.prev_rows.begin(), group.prev_rows.end()),
                    group.prev_rows.end());
            }
        }
        n_samples_ = static_cast<int>(plan.indices.size());
        u_buffer_ = Vector::Zero(model_.n_space());
    }

    int n_samples() const { return n_samples_; }

    // Evaluates sampled residual rows and, optionally, their Jacobian with
    // respect to the generalized coordinates.
    void evaluate(const Vector& x, Vector& r_z, Matrix* jac_z) {
        const Matrix coeff = phi_.scatter_coefficients(x);  // n_s x n_t
        r_z.resize(n_samples_);
        if (jac_z) jac_z->setZero(n_samples_, phi_.n_cols());

        for (auto& [step, group] : groups_) {
            const Vector tcol = phi_.temporal.row(step).transpose();
            const Vector c_step = coeff * tcol;
            Vector c_prev;
            if (step > 0) c_prev = coeff * Vector(phi_.temporal.row(step - 1).transpose());

            // state values on the union stencil of this block
            for (int row : group.state_rows) {
                u_buffer_[row] = u0_[row] + phi_.spatial.row(row).dot(c_step);
            }
            Vector f_rows(static_cast<Eigen::Index>(group.spaces.size()));
            const double t_n = (step + 1.0) * grid_.dt;
            model_.velocity_rows(u_buffer_, t_n, mu_, group.spaces, f_rows);
            JacobianRows jr;
            if (jac_z) jr = model_.jacobian_rows(u_buffer_, t_n, mu_, group.spaces);

            for (std::size_t s = 0; s < group.spaces.size(); ++s) {
                const int space = group.spaces[s];
                const int pos = group.out_positions[s];
                double mass_part = 0.0;
                if (identity_mass_) {
                    const double u_here = u0_[space] + phi_.spatial.row(space).dot(c_step);
                    const double u_prev =
                        step == 0 ? u0_[space]
                                  : u0_[space] + phi_.spatial.row(space).dot(c_prev);
                    mass_part = u_here - u_prev;
                } else {
                    for (SpMat::InnerIterator it(mass_rows_, space); it; ++it) {
                        const int l = static_cast<int>(it.row());
                        const double u_here = u0_[l] + phi_.spatial.row(l).dot(c_step);
                        const double u_prev =
                            step == 0 ? u0_[l] : u0_[l] + phi_.spatial.row(l).dot(c_prev);
                        mass_part += it.value() * (u_here - u_prev);
                    }
                }
                r_z[pos] = mass_part - grid_.dt * f_rows[static_cast<Eigen::Index>(s)];

                if (jac_z) {
                    auto add_pair_row = [&](int l, double w_now, double w_prev) {
                        for (int k = 0; k < phi_.n_cols(); ++k) {
                            const auto [i, j] = phi_.pairs[static_cast<std::size_t>(k)];
                            double w = w_now * phi_.temporal(step, j);
                            if (step > 0) w -= w_prev * phi_.temporal(step - 1, j);
                            (*jac_z)(pos, k) += w * phi_.spatial(l, i);
                        }
                    };
                    if (identity_mass_) {
                        add_pair_row(space, 1.0, 1.0);
                    } else {
                        for (SpMat::InnerIterator it(mass_rows_, space); it; ++it) {
                            add_pair_row(static_cast<int>(it.row()), it.value(), it.value());
                        }
                    }
                    // -dt * (row of J_f) * (d u^step / d x)
                    for (int kk = jr.offsets[s]; kk < jr.offsets[s + 1]; ++kk) {
                        const int l = jr.cols[static_cast<std::size_t>(kk)];
                        const double v = -grid_.dt * jr.vals[static_cast<std::size_t>(kk)];
                        for (int k = 0; k < phi_.n_cols(); ++k) {
                            const auto [i, j] = phi_.pairs[static_cast<std::size_t>(k)];
                            (*jac_z)(pos, k) += v * phi_.temporal(step, j) * phi_.spatial(l, i);
                        }
                    }
                }
            }
        }
    }

private:
    struct BlockGroup {
        std::vector<int> spaces;
        std::vector<int> out_positions;
        std::vector<int> state_rows;
        std::vector<int> prev_rows;
    };

    const SemiDiscreteModel& model_;
    const SpaceTimeBasis& phi_;
    TimeGrid grid_;
    ParameterPoint mu_;
    Vector u0_;
    bool identity_mass_ = true;
    SpMat mass_rows_;
    std::map<int, BlockGroup> groups_;
    int n_samples_ = 0;
    Vector u_buffer_;
};

}  // namespace

Vector st_gnat_solve(const SpaceTimeProblem& problem, const StResidualBasis& phi_r,
                     const SamplingPlan& plan, const ParameterPoint& mu, StSolveStats* stats) {
    if (phi_r.n_cols() < problem.phi->n_cols()) {
        throw Error("st_gnat: dimension chain requires n_st <= n_r");
    }
    if (plan.n_z() < phi_r.n_cols()) {
        throw Error("st_gnat: dimension chain requires n_r <= n_z");
    }
    const StWhitener whitener = build_whitener(phi_r.gather_rows(plan.indices));
    SampledStResidual sampled(problem, plan, mu);

    Vector x = Vector::Zero(problem.phi->n_cols());
    Vector r_z;
    Matrix jac_z;
    sampled.evaluate(x, r_z, nullptr);
    Vector eta = whitener.solve(r_z);
    double norm = eta.norm();
    double prev_norm = std::numeric_limits<double>::infinity();
    int iterations = 0;
    for (int it = 0;; ++it) {
        if (norm <= problem.gauss_newton.abs_tol) break;
        if (it > 0 && std::abs(prev_norm - norm) < 1e-10) break;
        if (it >= problem.gauss_newton.max_iterations) {
            throw SolverFailure("ST-GNAT Gauss-Newton stagnation (|r| = " +
                                    std::to_string(norm) + ")",
                                x, norm);
        }
        sampled.evaluate(x, r_z, &jac_z);
        const Matrix g = whitener.solve(jac_z);
        Matrix normal = g.transpose() * g;
        Eigen::LLT<Matrix> llt(normal);
        Vector delta;
        if (llt.info() == Eigen::Success) {
            delta = llt.solve(-(g.transpose() * eta));
        } else {
            delta = g.colPivHouseholderQr().solve(-eta);
        }
        prev_norm = norm;
        double alpha = 1.0;
        bool accepted = false;
        for (int ls = 0; ls < 12 && !accepted; ++ls, alpha *= 0.5) {
            const Vector trial = x + alpha * delta;
            try {
                sampled.evaluate(trial, r_z, nullptr);
                const Vector trial_eta = whitener.solve(r_z);
                const double trial_norm = trial_eta.norm();
                if (trial_norm < norm || trial_norm <= problem.gauss_newton.abs_tol) {
                    x = trial;
                    eta = trial_eta;
                    norm = trial_norm;
                    accepted = true;
                }
            } catch (const Error&) {
                // nonphysical trial: halve the step
            }
        }
        if (!accepted) {
            throw SolverFailure("ST-GNAT line search failed (|r| = " + std::to_string(norm) +
                                    ")",
                                x, norm);
        }
        ++iterations;
        if ((alpha * 2.0) * delta.norm() <= problem.gauss_newton.rel_tol * (1.0 + x.norm())) {
            break;
        }
    }
    if (stats) stats->gauss_newton_iterations = iterations;
    return x;
}

StResidualBasis st_sns_residual_basis(const SemiDiscreteModel& model,
                                      const SpaceTimeBasis& extended_basis, int n_r,
                                      StSnsVariant variant) {
    if (n_r > extended_basis.n_cols()) {
        throw Error("st_sns_residual_basis: extended basis has fewer than n_r pairs");
    }
    const SpaceTimeBasis truncated = extended_basis.truncated(n_r);
    switch (variant) {
        case StSnsVariant::abe_phi:
        case StSnsVariant::abe_phi_e:
            return StResidualBasis::abe_factored(model, truncated);
        case StSnsVariant::phi:
        case StSnsVariant::phi_e:
            if (!model.has_identity_mass()) {
                throw Error("st_sns_residual_basis: the phi/phi_e variants require an "
                            "identity mass matrix");
            }
            return StResidualBasis::factored(truncated);
    }
    throw Error("unknown ST-SNS variant");
}

Vector st_gnat_sns_solve(const SpaceTimeProblem& problem, StSnsVariant variant,
                         const SpaceTimeBasis& extended_basis, int n_r,
                         const SamplingPlan& plan, const ParameterPoint& mu,
                         StSolveStats* stats) {
    const StResidualBasis phi_r =
        st_sns_residual_basis(*problem.model, extended_basis, n_r, variant);
    return st_gnat_solve(problem, phi_r, plan, mu, stats);
}

SnapshotSet st_residual_snapshots_projection(const SpaceTimeProblem& problem,
                                             const std::vector<Trajectory>& fom_trajectories,
                                             const std::vector<ParameterPoint>& training) {
    const SemiDiscreteModel& model = *problem.model;
    const SpaceTimeBasis& phi = *problem.phi;
    const int n_space = phi.n_space();
    const int n_steps = phi.n_steps();

    std::vector<Vector> columns;
    std::vector<SnapshotProvenance> provenance;
    for (std::size_t k = 0; k < training.size(); ++k) {
        const Trajectory& traj = fom_trajectories[k];
        if (traj.newton_iterates.empty()) {
            throw Error("st_residual_snapshots_projection: trajectories must record "
                        "Newton iterates");
        }
        const Vector u0 = traj.states.col(0);
        int k_max = 0;
        for (const auto& iters : traj.newton_iterates) {
            k_max = std::max(k_max, static_cast<int>(iters.size()));
        }
        k_max = std::max(k_max, 1);
        for (int j = 1; j <= k_max; ++j) {
            // iterate j per step, padded with the converged solution
            Matrix u_blocks(n_space, n_steps);
            for (int b = 0; b < n_steps; ++b) {
                const auto& iters = traj.newton_iterates[static_cast<std::size_t>(b)];
                if (iters.empty()) {
                    u_blocks.col(b) = traj.states.col(b + 1);
                } else {
                    const int jj = std::min<int>(j, static_cast<int>(iters.size()));
                    u_blocks.col(b) = iters[static_cast<std::size_t>(jj - 1)];
                }
            }
            u_blocks.colwise() -= u0;
            const Vector coords = phi.apply_transpose(u_blocks);
            const Matrix projected =
                Matrix(st_apply_all_blocks(phi, coords).colwise() + u0);
            const Matrix r =
                st_residual_blocks(model, problem.grid, training[k], u0, projected);
            columns.push_back(Vector(r.reshaped()));
            provenance.push_back({static_cast<int>(k), -1, j});
        }
    }

    SnapshotSet set;
    set.kind = SnapshotKind::residual;
    set.matrix.resize(static_cast<Eigen::Index>(n_space) * n_steps,
                      static_cast<Eigen::Index>(columns.size()));
    for (std::size_t c = 0; c < columns.size(); ++c) {
        set.matrix.col(static_cast<Eigen::Index>(c)) = columns[c];
    }
    set.provenance = std::move(provenance);
    return set;
}

SnapshotSet st_residual_snapshots_lspg(const SpaceTimeProblem& problem,
                                       const std::vector<ParameterPoint>& training,
                                       int threads) {
    std::vector<std::vector<Vector>> logs(training.size());
    detail::parallel_for(static_cast<int>(training.size()), threads, [&](int k) {
        st_lspg_solve(problem, training[static_cast<std::size_t>(k)], nullptr,
                      &logs[static_cast<std::size_t>(k)]);
    });
    std::size_t total = 0;
    for (const auto& log : logs) total += log.size();

    SnapshotSet set;
    set.kind = SnapshotKind::residual;
    set.matrix.resize(problem.phi->n_rows(), static_cast<Eigen::Index>(total));
    Eigen::Index col = 0;
    for (std::size_t k = 0; k < logs.size(); ++k) {
        for (std::size_t j = 0; j < logs[k].size(); ++j) {
            set.matrix.col(col++) = logs[k][j];
            set.provenance.push_back({static_cast<int>(k), -1, static_cast<int>(j)});
        }
    }
    return set;
}

}  // namespace romkit
