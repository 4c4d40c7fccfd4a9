// Copyright romkit developers. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#ifndef ROMKIT_ROM_HPP
#define ROMKIT_ROM_HPP

#include <optional>

#include "romkit/projector.hpp"
#include "romkit/snapshots.hpp"

namespace romkit {

enum class RomMethod { galerkin, deim, deim_sns, lspg, gnat, gnat_sns };
enum class SnsVariant { equal, extended };

std::string rom_method_name(RomMethod method);
RomMethod rom_method_from_name(const std::string& name);

/// Reduced trajectory in generalized coordinates; uhat^0 = 0 always.
struct RomTrajectory {
    Matrix generalized;       // n_s x (n_steps + 1)
    Matrix generalized_half;  // midpoint RK2 stages, n_s x n_steps
    std::vector<int> newton_counts;

    long total_newton() const {
        long total = 0;
        for (int c : newton_counts) total += c;
        return total;
    }
};

/// Affine reconstruction u0 + Phi * uhat, columnwise.
Matrix lift(const Basis& basis, const Matrix& generalized, const Vector& u0);

/// Full-order residual recorded during LSPG / Galerkin reference runs.
struct ResidualRecord {
    Vector value;
    int step = 0;
    int newton_iteration = 0;
};

struct SpatialRomProblem {
    const SemiDiscreteModel* model = nullptr;
    RomMethod method = RomMethod::galerkin;
    SchemeId scheme = SchemeId::BackwardEuler;
    TimeGrid grid;
    Basis phi;  // solution basis (orthonormal columns)
    /// Hyper-reduction projector: nonlinear-term basis for deim/deim_sns,
    /// residual basis for gnat/gnat_sns.
    std::optional<ObliqueProjector> projector;
    /// Extended solution basis Phi_e for the extended SNS variant; its
    /// first n_s columns must equal phi.
    std::optional<Basis> phi_e;
    NewtonOptions newton;
    std::vector<ResidualRecord>* residual_log = nullptr;
};

/// Runs the configured spatial ROM at one parameter point. The dimension
/// chain n_s <= n_basis <= n_z <= N_s is validated up front.
RomTrajectory run_spatial_rom(const SpatialRomProblem& problem, const ParameterPoint& mu);

/// Baseline GNAT offline path: runs LSPG (implicit schemes) or the
/// equivalent Galerkin reference (explicit schemes) at every training
/// point and records the full-order residual at every Newton iteration
/// (per step, for explicit schemes).
SnapshotSet collect_residual_snapshots(const SemiDiscreteModel& model, const Basis& phi,
                                       SchemeId scheme, const TimeGrid& grid,
                                       const std::vector<ParameterPoint>& training,
                                       const NewtonOptions& newton = {}, int threads = 1);

}  // namespace romkit

#endif
