// Copyright romkit developers. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#ifndef ROMKIT_ST_HOSVD_HPP
#define ROMKIT_ST_HOSVD_HPP

#include <utility>
#include <vector>

#include "romkit/types.hpp"

namespace romkit {

/// Kronecker-factored space-time basis: the column for pair (i, j) is
/// temporal_j (x) spatial_i, never materialized except on demand. Row
/// indexing is time-major: stacked index = step * N_s + space with step in
/// 0..N_t-1 for time instances 1..N_t.
struct SpaceTimeBasis {
    Matrix spatial;   // N_s x n_s, orthonormal columns
    Matrix temporal;  // N_t x n_t, orthonormal columns
    std::vector<std::pair<int, int>> pairs;
    Vector spatial_sv;
    Vector temporal_sv;

    int n_space() const { return static_cast<int>(spatial.rows()); }
    int n_steps() const { return static_cast<int>(temporal.rows()); }
    int n_cols() const { return static_cast<int>(pairs.size()); }
    long n_rows() const { return static_cast<long>(n_space()) * n_steps(); }

    Vector column(int k) const;
    /// Basis row for space index `space` at time block `step` (0-based).
    void row(int step, int space, Eigen::Ref<Eigen::RowVectorXd> out) const;
    Matrix materialize() const;

    /// Block `step` of the product (basis * x): Phi_s * (X * T(step,:)^T)
    /// with X the pair-scattered coefficient matrix.
    Vector apply_block(const Vector& x, int step) const;
    /// Scatter generalized coordinates into the n_s x n_t coefficient matrix.
    Matrix scatter_coefficients(const Vector& x) const;
    /// Transpose-apply: y_(i,j) = sum_step T(step,j) * (S^T v_step)_i.
    Vector apply_transpose(const Matrix& stacked_columns) const;

    /// Truncation of this basis to its first n pairs (shared factors).
    SpaceTimeBasis truncated(int n) const;
};

/// Sequentially truncated HOSVD of the N_s x N_t x n_train solution tensor
/// (one slice per training point): mode-1 SVD first, then mode-2 of the
/// mode-1-compressed core. Pairs are ordered by the product of their factor
/// singular values, truncated at n_st.
SpaceTimeBasis st_hosvd(const std::vector<Matrix>& slices, int n_s, int n_t, int n_st);

}  // namespace romkit

#endif
