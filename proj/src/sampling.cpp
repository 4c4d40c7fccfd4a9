// Copyright romkit developers. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include "romkit/sampling.hpp"

#include <algorithm>
#include <cmath>

namespace romkit {

namespace {

// argmax of |v| over rows not in `taken`; ties resolve to the lowest index
int argmax_abs(const Vector& v, const std::vector<bool>& taken) {
    int best = -1;
    double best_val = -1.0;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (taken[static_cast<std::size_t>(i)]) continue;
        const double a = std::abs(v[i]);
        if (a > best_val) {
            best_val = a;
            best = static_cast<int>(i);
        }
    }
    return best;
}

Matrix gather_rows(const Matrix& m, const std::vector<int>& rows, const std::vector<int>& cols) {
    Matrix out(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = 0; j < cols.size(); ++j) {
            out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                m(rows[i], cols[j]);
        }
    }
    return out;
}

}  // namespace

std::string sampling_method_name(SamplingMethod method) {
    switch (method) {
        case SamplingMethod::deim_greedy: return "deim_greedy";
        case SamplingMethod::gnat_greedy: return "gnat_greedy";
        case SamplingMethod::qr_pivot: return "qr_pivot";
    }
    return "unknown";
}

SamplingPlan deim_sampling(const Matrix& basis) {
    const int n = static_cast<int>(basis.cols());
    const int rows = static_cast<int>(basis.rows());
    if (n < 1 || rows < n) throw Error("deim_sampling: invalid basis shape");

    SamplingPlan plan;
    plan.method = SamplingMethod::deim_greedy;
    std::vector<bool> taken(static_cast<std::size_t>(rows), false);

    Vector r = basis.col(0);
    for (int k = 0; k < n; ++k) {
        const int p = argmax_abs(r, taken);
        if (p < 0 || std::abs(r[p]) == 0.0) {
            throw Error("deim_sampling: zero interpolation residual at step " +
                        std::to_string(k) + " (rank collapse)");
        }
        plan.indices.push_back(p);
        taken[static_cast<std::size_t>(p)] = true;
        if (k + 1 == n) break;
        // interpolate column k+1 at the chosen rows, residual drives the pick
        Matrix zphi(k + 1, k + 1);
        Vector zb(k + 1);
        for (int i = 0; i <= k; ++i) {
            for (int j = 0; j <= k; ++j) zphi(i, j) = basis(plan.indices[static_cast<std::size_t>(i)], j);
            zb[i] = basis(plan.indices[static_cast<std::size_t>(i)], k + 1);
        }
        const Vector c = zphi.partialPivLu().solve(zb);
        r = basis.col(k + 1) - basis.leftCols(k + 1) * c;
    }
    return plan;
}

SamplingPlan gnat_sampling(const Matrix& basis, int n_z) {
    const int n = static_cast<int>(basis.cols());
    const int rows = static_cast<int>(basis.rows());
    if (n_z < n || n_z > rows) {
        throw Error("gnat_sampling: n_z must satisfy basis width <= n_z <= n_rows");
    }

    SamplingPlan plan;
    plan.method = SamplingMethod::gnat_greedy;
    std::vector<bool> taken(static_cast<std::size_t>(rows), false);
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

        Vector r = basis.col(c);
        if (!fit_cols.empty() && !plan.indices.empty()) {
            const Matrix a = gather_rows(basis, plan.indices, fit_cols);
            Vector b(static_cast<Eigen::Index>(plan.indices.size()));
            for (std::size_t i = 0; i < plan.indices.size(); ++i) {
                b[static_cast<Eigen::Index>(i)] = basis(plan.indices[i], c);
            }
            const Vector x = a.colPivHouseholderQr().solve(b);
            for (std::size_t j = 0; j < fit_cols.size(); ++j) {
                r -= x[static_cast<Eigen::Index>(j)] * basis.col(fit_cols[j]);
            }
        }
        int p = argmax_abs(r, taken);
        if (p < 0) throw Error("gnat_sampling: no rows left to sample");
        plan.indices.push_back(p);
        taken[static_cast<std::size_t>(p)] = true;
    }
    return plan;
}

SamplingPlan qr_pivot_sampling(const Matrix& basis, int n_z) {
    const int n = static_cast<int>(basis.cols());
    const int rows = static_cast<int>(basis.rows());
    if (n_z < 1 || n_z > n || n_z > rows) {
        throw Error("qr_pivot_sampling: requires 1 <= n_z <= basis width");
    }
    // Column-pivoted QR of basis^T by modified Gram-Schmidt with classic
    // residual-norm downdating; pivot = column of maximum residual norm.
    const Matrix bt = basis.transpose();  // n x rows
    Vector res_norm2(rows);
    for (int j = 0; j < rows; ++j) res_norm2[j] = bt.col(j).squaredNorm();

    SamplingPlan plan;
    plan.method = SamplingMethod::qr_pivot;
    std::vector<bool> taken(static_cast<std::size_t>(rows), false);
    Matrix q(n, n_z);
    for (int k = 0; k < n_z; ++k) {
        int p = -1;
        double best = -1.0;
        for (int j = 0; j < rows; ++j) {
            if (taken[static_cast<std::size_t>(j)]) continue;
            if (res_norm2[j] > best) {
                best = res_norm2[j];
                p = j;
            }
        }
        if (p < 0) throw Error("qr_pivot_sampling: no rows left");
        Vector v = bt.col(p);
        if (k > 0) v -= q.leftCols(k) * (q.leftCols(k).transpose() * v);
        const double norm = v.norm();
        if (norm <= 1e-14 * std::sqrt(std::max(res_norm2[p], 1e-300))) {
            throw Error("qr_pivot_sampling: rank collapse at pivot " + std::to_string(k));
        }
        q.col(k) = v / norm;
        plan.indices.push_back(p);
        taken[static_cast<std::size_t>(p)] = true;
        for (int j = 0; j < rows; ++j) {
            if (taken[static_cast<std::size_t>(j)]) continue;
            const double proj = q.col(k).dot(bt.col(j));
            res_norm2[j] = std::max(0.0, res_norm2[j] - proj * proj);
        }
    }
    return plan;
}

SamplingPlan sample(const Matrix& basis, SamplingMethod method, int n_z) {
    switch (method) {
        case SamplingMethod::deim_greedy: {
            if (n_z != basis.cols()) {
                throw Error("deim_greedy produces exactly basis-width indices");
            }
            return deim_sampling(basis);
        }
        case SamplingMethod::gnat_greedy:
            return gnat_sampling(basis, n_z);
        case SamplingMethod::qr_pivot:
            return qr_pivot_sampling(basis, n_z);
    }
    throw Error("unknown sampling method");
}

}  // namespace romkit
