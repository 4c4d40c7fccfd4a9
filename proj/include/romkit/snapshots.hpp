// Copyright romkit developers. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#ifndef ROMKIT_SNAPSHOTS_HPP
#define ROMKIT_SNAPSHOTS_HPP

#include "romkit/integrators.hpp"
#include "romkit/model.hpp"

namespace romkit {

enum class SnapshotKind {
    solution,
    nonlinear_term,
    residual,
    space_time_solution,
};

/// Where a snapshot column came from: training point, time-step index in
/// half steps (2n for u^n, 2n+1 for u^{n+1/2}), Newton iteration or -1.
struct SnapshotProvenance {
    int param_index = 0;
    int half_step_index = -1;
    int newton_iteration = -1;
};

struct SnapshotSet {
    Matrix matrix;
    SnapshotKind kind = SnapshotKind::solution;
    std::vector<SnapshotProvenance> provenance;
    /// Initial state of each training trajectory, for centering.
    std::vector<Vector> initial_states;

    int n_rows() const { return static_cast<int>(matrix.rows()); }
    int n_cols() const { return static_cast<int>(matrix.cols()); }
};

/// Integrate the FOM at each training point (parallel across points).
std::vector<Trajectory> run_training_foms(const SemiDiscreteModel& model, SchemeId scheme,
                                          const TimeGrid& grid,
                                          const std::vector<ParameterPoint>& training,
                                          const IntegrateOptions& opts = {}, int threads = 1);

/// Columns u^0..u^{N_t} per training point, plus half steps for RK2.
SnapshotSet solution_snapshots(const std::vector<Trajectory>& trajectories);

SnapshotSet collect_solution_snapshots(const SemiDiscreteModel& model, SchemeId scheme,
                                       const TimeGrid& grid,
                                       const std::vector<ParameterPoint>& training,
                                       int threads = 1);

/// Nonlinear-term snapshots f^k at the scheme's inclusion indices,
/// recomputed from the stored trajectory states.
SnapshotSet nonlinear_term_snapshots(const SemiDiscreteModel& model,
                                     const std::vector<Trajectory>& trajectories,
                                     const std::vector<ParameterPoint>& training);

/// Subtract each trajectory's own initial state from its columns
/// (solution kinds only; residual snapshots are never centered).
SnapshotSet centered(const SnapshotSet& snapshots);

}  // namespace romkit

#endif
