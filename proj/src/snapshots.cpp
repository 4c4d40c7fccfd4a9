// Copyright romkit developers. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include "romkit/snapshots.hpp"

#include "romkit/detail/parallel.hpp"

namespace romkit {

std::vector<Trajectory> run_training_foms(const SemiDiscreteModel& model, SchemeId scheme,
                                          const TimeGrid& grid,
                                          const std::vector<ParameterPoint>& training,
                                          const IntegrateOptions& opts, int threads) {
    std::vector<Trajectory> trajectories(training.size());
    detail::parallel_for(static_cast<int>(training.size()), threads, [&](int k) {
        try {
            trajectories[static_cast<std::size_t>(k)] =
                integrate(model, scheme, grid, training[static_cast<std::size_t>(k)], opts);
        } catch (const Error& e) {
            throw Error("training FOM failed at training point " + std::to_string(k) + ": " +
                        e.what());
        }
    });
    return trajectories;
}

SnapshotSet solution_snapshots(const std::vector<Trajectory>& trajectories) {
    SnapshotSet set;
    set.kind = SnapshotKind::solution;
    if (trajectories.empty()) return set;
    const auto n_space = trajectories.front().states.rows();

    Eigen::Index total = 0;
    for (const auto& traj : trajectories) {
        total += traj.states.cols() + traj.half_states.cols();
    }
    set.matrix.resize(n_space, total);
    Eigen::Index col = 0;
    for (std::size_t k = 0; k < trajectories.size(); ++k) {
        const auto& traj = trajectories[k];
        set.initial_states.push_back(traj.states.col(0));
        const bool rk2 = traj.half_states.cols() > 0;
        for (Eigen::Index n = 0; n < traj.states.cols(); ++n) {
            set.matrix.col(col++) = traj.states.col(n);
            set.provenance.push_back({static_cast<int>(k), static_cast<int>(2 * n), -1});
            if (rk2 && n + 1 < traj.states.cols()) {
                set.matrix.col(col++) = traj.half_states.col(n);
                set.provenance.push_back({static_cast<int>(k), static_cast<int>(2 * n + 1), -1});
            }
        }
    }
    return set;
}

SnapshotSet collect_solution_snapshots(const SemiDiscreteModel& model, SchemeId scheme,
                                       const TimeGrid& grid,
                                       const std::vector<ParameterPoint>& training,
                                       int threads) {
    return solution_snapshots(run_training_foms(model, scheme, grid, training, {}, threads));
}

SnapshotSet nonlinear_term_snapshots(const SemiDiscreteModel& model,
                                     const std::vector<Trajectory>& trajectories,
                                     const std::vector<ParameterPoint>& training) {
    SnapshotSet set;
    set.kind = SnapshotKind::nonlinear_term;
    if (trajectories.empty()) return set;
    const auto n_space = trajectories.front().states.rows();

    std::vector<std::vector<int>> indices;
    Eigen::Index total = 0;
    for (const auto& traj : trajectories) {
        indices.push_back(nonlinear_snapshot_half_indices(traj.scheme, traj.n_steps()));
        total += static_cast<Eigen::Index>(indices.back().size());
    }
    set.matrix.resize(n_space, total);
    Eigen::Index col = 0;
    for (std::size_t k = 0; k < trajectories.size(); ++k) {
        const auto& traj = trajectories[k];
        const auto& mu = training[k];
        for (int half : indices[k]) {
            const bool is_half = (half % 2) != 0;
            const double t = 0.5 * half * traj.dt;
            const Vector state = is_half ? Vector(traj.half_states.col(half / 2))
                                         : Vector(traj.states.col(half / 2));
            set.matrix.col(col++) = model.velocity(state, t, mu);
            set.provenance.push_back({static_cast<int>(k), half, -1});
        }
    }
    return set;
}

SnapshotSet centered(const SnapshotSet& snapshots) {
    if (snapshots.kind == SnapshotKind::residual) {
        throw Error("centered: residual snapshots carry no affine offset");
    }
    SnapshotSet out = snapshots;
    for (std::size_t c = 0; c < out.provenance.size(); ++c) {
        const int k = out.provenance[c].param_index;
        out.matrix.col(static_cast<Eigen::Index>(c)) -=
            out.initial_states[static_cast<std::size_t>(k)];
    }
    return out;
}

}  // namespace romkit
