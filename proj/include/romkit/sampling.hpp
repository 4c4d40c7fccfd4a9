// Copyright romkit developers. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#ifndef ROMKIT_SAMPLING_HPP
#define ROMKIT_SAMPLING_HPP

#include <string>
#include <vector>

#include "romkit/types.hpp"

namespace romkit {

enum class SamplingMethod { deim_greedy, gnat_greedy, qr_pivot };

std::string sampling_method_name(SamplingMethod method);

/// Ordered distinct row indices plus the method that produced them.
struct SamplingPlan {
    std::vector<int> indices;
    SamplingMethod method = SamplingMethod::deim_greedy;

    int n_z() const { return static_cast<int>(indices.size()); }
};

/// Row-pivoted greedy interpolation indices: the first index maximizes
/// |phi_1|, each later index maximizes the residual of interpolating the
/// next column at the rows already chosen. Returns exactly basis-width
/// indices. Ties break to the lowest row index.
SamplingPlan deim_sampling(const Matrix& basis);

/// Oversampled gappy-POD greedy: processes basis vectors cyclically and
/// adds, per iteration, the row maximizing the gappy-reconstruction error
/// of the next target vector (least-squares fits over the rows chosen so
/// far), until n_z indices are chosen. With n_z equal to the basis width
/// the fits are square and the selection reduces to deim_sampling.
SamplingPlan gnat_sampling(const Matrix& basis, int n_z);

/// First n_z pivots of a column-pivoted QR of basis^T; requires
/// n_z <= basis width. Stand-in for a strong rank-revealing QR.
SamplingPlan qr_pivot_sampling(const Matrix& basis, int n_z);

SamplingPlan sample(const Matrix& basis, SamplingMethod method, int n_z);

}  // namespace romkit

#endif
