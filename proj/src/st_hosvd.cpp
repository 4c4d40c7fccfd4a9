// Copyright romkit developers. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include "romkit/st_hosvd.hpp"

#include <algorithm>

#include "romkit/pod.hpp"

namespace romkit {

Vector SpaceTimeBasis::column(int k) const {
    const auto [i, j] = pairs[static_cast<std::size_t>(k)];
    Vector col(n_rows());
    for (int step = 0; step < n_steps(); ++step) {
        col.segment(static_cast<long>(step) * n_space(), n_space()) =
            temporal(step, j) * spatial.col(i);
    }
    return col;
}

void SpaceTimeBasis::row(int step, int space, Eigen::Ref<Eigen::RowVectorXd> out) const {
    for (int k = 0; k < n_cols(); ++k) {
        const auto [i, j] = pairs[static_cast<std::size_t>(k)];
        out[k] = spatial(space, i) * temporal(step, j);
    }
}

Matrix SpaceTimeBasis::materialize() const {
    Matrix full(n_rows(), n_cols());
    for (int k = 0; k < n_cols(); ++k) full.col(k) = column(k);
    return full;
}

Matrix SpaceTimeBasis::scatter_coefficients(const Vector& x) const {
    Matrix coeff = Matrix::Zero(spatial.cols(), temporal.cols());
    for (int k = 0; k < n_cols(); ++k) {
        const auto [i, j] = pairs[static_cast<std::size_t>(k)];
        coeff(i, j) = x[k];
    }
    return coeff;
}

Vector SpaceTimeBasis::apply_block(const Vector& x, int step) const {
    const Matrix coeff = scatter_coefficients(x);
    return spatial * (coeff * temporal.row(step).transpose());
}

Vector SpaceTimeBasis::apply_transpose(const Matrix& stacked_columns) const {
    // stacked_columns: N_s x N_t (one column per time instance)
    const Matrix w = spatial.transpose() * stacked_columns;  // n_s x N_t
    const Matrix wt = w * temporal;                          // n_s x n_t
    Vector y(n_cols());
    for (int k = 0; k < n_cols(); ++k) {
        const auto [i, j] = pairs[static_cast<std::size_t>(k)];
        y[k] = wt(i, j);
    }
    return y;
}

SpaceTimeBasis SpaceTimeBasis::truncated(int n) const {
    if (n > n_cols()) throw Error("SpaceTimeBasis::truncated: not enough pairs");
    SpaceTimeBasis out = *this;
    out.pairs.resize(static_cast<std::size_t>(n));
    return out;
}

SpaceTimeBasis st_hosvd(const std::vector<Matrix>& slices, int n_s, int n_t, int n_st) {
    if (slices.empty()) throw Error("st_hosvd: no tensor slices");
    const int n_space = static_cast<int>(slices.front().rows());
    const int n_steps = static_cast<int>(slices.front().cols());
    const int n_train = static_cast<int>(slices.size());
    if (n_s > n_space || n_t > n_steps) throw Error("st_hosvd: factor ranks exceed dimensions");
    if (n_st > n_s * n_t) throw Error("st_hosvd: n_st exceeds n_s * n_t");

    // mode-1 unfolding: N_s x (N_t * n_train)
    Matrix mode1(n_space, static_cast<Eigen::Index>(n_steps) * n_train);
    for (int k = 0; k < n_train; ++k) {
        mode1.middleCols(static_cast<Eigen::Index>(k) * n_steps, n_steps) =
            slices[static_cast<std::size_t>(k)];
    }
    const Basis spatial = pod(mode1, n_s);

    // sequential truncation: compress mode 1 before unfolding mode 2
    Matrix mode2(n_steps, static_cast<Eigen::Index>(n_s) * n_train);
    for (int k = 0; k < n_train; ++k) {
        const Matrix core = spatial.columns.transpose() * slices[static_cast<std::size_t>(k)];
        mode2.middleCols(static_cast<Eigen::Index>(k) * n_s, n_s) = core.transpose();
    }
    const Basis temporal = pod(mode2, n_t);

    SpaceTimeBasis basis;
    basis.spatial = spatial.columns;
    basis.temporal = temporal.columns;
    basis.spatial_sv = spatial.singular_values.head(n_s);
    basis.temporal_sv = temporal.singular_values.head(n_t);

    // order pairs by the product of factor singular values
    std::vector<std::pair<int, int>> pairs;
    pairs.reserve(static_cast<std::size_t>(n_s) * n_t);
    for (int i = 0; i < n_s; ++i) {
        for (int j = 0; j < n_t; ++j) pairs.emplace_back(i, j);
    }
    std::stable_sort(pairs.begin(), pairs.end(), [&](const auto& a, const auto& b) {
        const double pa = basis.spatial_sv[a.first] * basis.temporal_sv[a.second];
        const double pb = basis.spatial_sv[b.first] * basis.temporal_sv[b.second];
        if (pa != pb) return pa > pb;
        if (a.first != b.first) return a.first < b.first;
        return a.second < b.second;
    });
    pairs.resize(static_cast<std::size_t>(n_st));
    basis.pairs = std::move(pairs);
    return basis;
}

}  // namespace romkit
