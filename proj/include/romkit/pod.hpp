// Copyright romkit developers. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#ifndef ROMKIT_POD_HPP
#define ROMKIT_POD_HPP

#include <utility>

#include "romkit/types.hpp"

namespace romkit {

/// Orthonormal (unless flagged otherwise) column basis with the full
/// singular-value spectrum of the matrix it was extracted from.
struct Basis {
    Matrix columns;
    Vector singular_values;
    bool orthonormal = true;

    int n_rows() const { return static_cast<int>(columns.rows()); }
    int n_cols() const { return static_cast<int>(columns.cols()); }
};

struct ThinSvd {
    Matrix left;      // min(rows, cols) leading left singular vectors
    Vector singular_values;
};

/// Exact thin SVD returning left factors only. Wide inputs go through a QR
/// factorization of the transpose first, so no Gram matrix is ever formed.
ThinSvd thin_left_svd(const Matrix& a);

/// thin_left_svd with the deterministic sign convention already applied;
/// lets one factorization serve a whole truncation sweep.
ThinSvd pod_factorization(const Matrix& snapshots);

/// Truncation of a pod_factorization result to its leading n columns.
Basis basis_from_factorization(const ThinSvd& svd, int n, int source_rows, int source_cols);

/// Count of singular values above max(rows, cols) * eps * sigma_1.
int numerical_rank(const Vector& singular_values, int rows, int cols);

/// Leading n left singular vectors with a deterministic sign convention
/// (largest-magnitude entry of each column made positive, ties to the
/// lowest row index).
Basis pod(const Matrix& snapshots, int n);

/// One SVD, two nested truncations: returns (Phi, Phi_e) with the first n
/// columns of Phi_e identical to Phi. Requires n < n_ext <= numerical rank.
std::pair<Basis, Basis> extended_pod(const Matrix& snapshots, int n, int n_ext);

}  // namespace romkit

#endif
