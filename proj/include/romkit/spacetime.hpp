// Copyright romkit developers. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#ifndef ROMKIT_SPACETIME_HPP
#define ROMKIT_SPACETIME_HPP

#include "romkit/rom.hpp"
#include "romkit/st_hosvd.hpp"

namespace romkit {

/// Space-time formulation with the backward Euler integrator. The implicit
/// block operator (+M on the diagonal, -M on the subdiagonal) is never
/// materialized; stacked space-time vectors are handled as N_s x N_t
/// matrices with one column per time instance 1..N_t.
struct SpaceTimeProblem {
    const SemiDiscreteModel* model = nullptr;
    TimeGrid grid;
    const SpaceTimeBasis* phi = nullptr;  // solution space-time basis
    NewtonOptions gauss_newton;
};

/// Blocks of A_BE applied to stacked blocks (block 0 consumes u0).
Matrix st_abe_apply(const SemiDiscreteModel& model, const Vector& u0, const Matrix& blocks);

/// Space-time residual blocks r^n = M(u^n - u^{n-1}) - dt f(u^n, t^n).
Matrix st_residual_blocks(const SemiDiscreteModel& model, const TimeGrid& grid,
                          const ParameterPoint& mu, const Vector& u0, const Matrix& u_blocks);

/// All blocks of basis * x as an N_s x N_t matrix.
Matrix st_apply_all_blocks(const SpaceTimeBasis& basis, const Vector& x);

/// Dense space-time residual Jacobian d vec(r) / d x at the given state.
Matrix st_jacobian_dense(const SpaceTimeProblem& problem, const ParameterPoint& mu,
                         const Matrix& u_blocks);

/// Wraps a spatial basis as a one-step space-time basis (temporal factor 1).
SpaceTimeBasis spatial_as_space_time(const Basis& phi);

/// Residual-basis access by time block; columns are only ever materialized
/// per block so the Kronecker-factored variants stay factored.
class StResidualBasis {
public:
    /// Dense basis from a residual-snapshot SVD (baseline ST-GNAT).
    static StResidualBasis dense(Matrix columns, int n_space, int n_steps);
    /// Factored solution basis (identity-mass SNS variants).
    static StResidualBasis factored(const SpaceTimeBasis& basis);
    /// A_BE times the factored basis, applied lazily (general-mass SNS).
    static StResidualBasis abe_factored(const SemiDiscreteModel& model,
                                        const SpaceTimeBasis& basis);

    int n_cols() const { return n_cols_; }
    int n_space() const { return n_space_; }
    int n_steps() const { return n_steps_; }
    long n_rows() const { return static_cast<long>(n_space_) * n_steps_; }

    /// Rows of time block `step` (N_s x n_cols).
    void time_block(int step, Matrix& out) const;
    Matrix gather_rows(const std::vector<int>& stacked_rows) const;

private:
    enum class Kind { dense, factored, abe_factored };
    Kind kind_ = Kind::dense;
    Matrix dense_;
    SpaceTimeBasis basis_;
    Matrix mass_spatial_;  // M * spatial factor, for the abe variant
    int n_space_ = 0, n_steps_ = 0, n_cols_ = 0;
};

/// Oversampled greedy over space-time rows: basis vectors are processed
/// cyclically and each iteration picks the max-error row of the gappy
/// reconstruction, restricted to a time block chosen round-robin across
/// the time range (sample-distribution approximation).
SamplingPlan st_gnat_sampling(const StResidualBasis& basis, int n_z);

struct StSolveStats {
    int gauss_newton_iterations = 0;
};

/// Global space-time LSPG solve (one Gauss-Newton over all steps).
Vector st_lspg_solve(const SpaceTimeProblem& problem, const ParameterPoint& mu,
                     StSolveStats* stats = nullptr,
                     std::vector<Vector>* residual_log = nullptr);

/// Hyper-reduced space-time solve on the sampled functional.
Vector st_gnat_solve(const SpaceTimeProblem& problem, const StResidualBasis& phi_r,
                     const SamplingPlan& plan, const ParameterPoint& mu,
                     StSolveStats* stats = nullptr);

enum class StSnsVariant { abe_phi, abe_phi_e, phi, phi_e };

/// Residual basis for ST-GNAT-SNS built from the solution basis factors;
/// the phi/phi_e variants require an identity mass matrix.
StResidualBasis st_sns_residual_basis(const SemiDiscreteModel& model,
                                      const SpaceTimeBasis& extended_basis, int n_r,
                                      StSnsVariant variant);

Vector st_gnat_sns_solve(const SpaceTimeProblem& problem, StSnsVariant variant,
                         const SpaceTimeBasis& extended_basis, int n_r,
                         const SamplingPlan& plan, const ParameterPoint& mu,
                         StSolveStats* stats = nullptr);

enum class StResidualStrategy { projection_of_fom, st_lspg_iterations };

/// Baseline ST-GNAT residual snapshots via projection of FOM training
/// solutions: Newton-iterate states are padded with the converged solution,
/// re-arranged in space-time form, projected onto the trial subspace, and
/// their space-time residuals recorded. Trajectories must carry recorded
/// Newton iterates.
SnapshotSet st_residual_snapshots_projection(const SpaceTimeProblem& problem,
                                             const std::vector<Trajectory>& fom_trajectories,
                                             const std::vector<ParameterPoint>& training);

/// Baseline residual snapshots from ST-LSPG training iterations.
SnapshotSet st_residual_snapshots_lspg(const SpaceTimeProblem& problem,
                                       const std::vector<ParameterPoint>& training,
                                       int threads = 1);

}  // namespace romkit

#endif
