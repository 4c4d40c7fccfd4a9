// Copyright romkit developers. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#ifndef ROMKIT_PROJECTOR_HPP
#define ROMKIT_PROJECTOR_HPP

#include <optional>

#include "romkit/model.hpp"
#include "romkit/pod.hpp"
#include "romkit/sampling.hpp"

namespace romkit {

/// Oblique projector P = Phi (Z^T Phi)^+ Z^T defined by a basis and a row
/// sampling plan; optionally the mass-weighted variant
/// P = M Phi (Z^T Phi)^+ Z^T M^{-1}. The small factor Z^T Phi is stored
/// with its QR factorization; construction fails when it is rank
/// deficient or its condition number exceeds 1e12.
struct ObliqueProjector {
    Basis basis;
    SamplingPlan plan;
    Matrix small_factor;  // Z^T Phi
    Matrix small_q;       // thin Q of the QR of Z^T Phi
    Matrix small_r;       // upper-triangular R
    double condition = 0.0;
    const SemiDiscreteModel* mass_weight = nullptr;

    int n_rows() const { return basis.n_rows(); }
    int n_cols() const { return basis.n_cols(); }

    /// Least-squares coordinates (Z^T Phi)^+ w of already-sampled values.
    Vector solve_small(const Vector& sampled) const;
    Matrix solve_small(const Matrix& sampled) const;

    /// Gather Z^T v.
    Vector sample_rows(const Vector& v) const;

    Vector apply(const Vector& v) const;
    /// Dense N x N projector matrix, for small problems and tests.
    Matrix dense() const;
};

/// Builds the projector; with `orthogonalize` the basis is replaced by the
/// thin Q of its QR factorization and the sampling plan is re-derived from
/// Q with the same method and sample count.
ObliqueProjector build_projector(const Basis& basis, const SamplingPlan& plan,
                                 bool orthogonalize = false,
                                 const SemiDiscreteModel* mass_weight = nullptr);

struct ProjectionBoundReport {
    double lhs = 0.0;        // |(I - P) v|
    double rhs = 0.0;        // |(Z^T Q)^+| * |(I - P*) v|
    double pinv_norm = 0.0;  // |(Z^T Q)^+|_2
    double kappa = 0.0;      // cond(Z^T Phi)
};

/// Evaluates the oblique projection error bound for one vector.
ProjectionBoundReport projection_error_bound(const ObliqueProjector& projector,
                                             const Vector& v);

/// Nonlinear-term basis from the solution basis: M * Phi, flagged
/// non-orthonormal when the mass matrix is not the identity.
Basis sns_basis(const Basis& solution_basis, const SemiDiscreteModel& model);

}  // namespace romkit

#endif
