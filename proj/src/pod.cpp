// Copyright romkit developers. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include "romkit/pod.hpp"

#include <cmath>
#include <limits>

#ifdef ROMKIT_HAVE_LAPACKE
#include <lapacke.h>
#else
#include <Eigen/SVD>
#endif

namespace romkit {

namespace {

#ifdef ROMKIT_HAVE_LAPACKE
// Thin SVD of a tall (rows >= cols) column-major matrix, left factors only.
ThinSvd tall_svd(Matrix a) {
    const auto m = static_cast<lapack_int>(a.rows());
    const auto n = static_cast<lapack_int>(a.cols());
    ThinSvd out;
    out.left.resize(m, n);
    out.singular_values.resize(n);
    Matrix vt(n, n);
    const lapack_int info =
        LAPACKE_dgesdd(LAPACK_COL_MAJOR, 'S', m, n, a.data(), m, out.singular_values.data(),
                       out.left.data(), m, vt.data(), n);
    if (info != 0) throw Error("dgesdd failed with info " + std::to_string(info));
    return out;
}

// R factor (upper triangular, cols x cols) of a tall QR factorization.
Matrix qr_r_factor(Matrix a) {
    const auto m = static_cast<lapack_int>(a.rows());
    const auto n = static_cast<lapack_int>(a.cols());
    Vector tau(std::min(m, n));
    const lapack_int info = LAPACKE_dgeqrf(LAPACK_COL_MAJOR, m, n, a.data(), m, tau.data());
    if (info != 0) throw Error("dgeqrf failed with info " + std::to_string(info));
    return a.topRows(n).triangularView<Eigen::Upper>();
}
#else
ThinSvd tall_svd(const Matrix& a) {
    Eigen::BDCSVD<Matrix> svd(a, Eigen::ComputeThinU);
    return {svd.matrixU(), svd.singularValues()};
}

Matrix qr_r_factor(const Matrix& a) {
    Eigen::HouseholderQR<Matrix> qr(a);
    Matrix r = qr.matrixQR()
                   .topRows(a.cols())
                   .template triangularView<Eigen::Upper>();
    return r;
}
#endif

void fix_column_signs(Matrix& u) {
    for (Eigen::Index j = 0; j < u.cols(); ++j) {
        Eigen::Index imax = 0;
        double best = -1.0;
        for (Eigen::Index i = 0; i < u.rows(); ++i) {
            const double a = std::abs(u(i, j));
            if (a > best) {
                best = a;
                imax = i;
            }
        }
        if (u(imax, j) < 0.0) u.col(j) = -u.col(j);
    }
}

}  // namespace

ThinSvd thin_left_svd(const Matrix& a) {
    if (a.rows() == 0 || a.cols() == 0) throw Error("thin_left_svd: empty matrix");
    if (a.cols() <= a.rows()) {
        return tall_svd(a);
    }
    // Wide case: A = (A^T)^T = (Q R)^T = R^T Q^T, so the left factors of A
    // are exactly those of R^T.
    const Matrix r = qr_r_factor(a.transpose());
    return tall_svd(r.transpose());
}

int numerical_rank(const Vector& singular_values, int rows, int cols) {
    if (singular_values.size() == 0) return 0;
    const double thresh = std::max(rows, cols) *
                          std::numeric_limits<double>::epsilon() * singular_values[0];
    int rank = 0;
    for (Eigen::Index i = 0; i < singular_values.size(); ++i) {
        if (singular_values[i] > thresh) ++rank;
    }
    return rank;
}

ThinSvd pod_factorization(const Matrix& snapshots) {
    ThinSvd svd = thin_left_svd(snapshots);
    fix_column_signs(svd.left);
    return svd;
}

Basis basis_from_factorization(const ThinSvd& svd, int n, int source_rows, int source_cols) {
    if (n <= 0) throw Error("pod: basis size must be positive");
    const int rank = numerical_rank(svd.singular_values, source_rows, source_cols);
    if (n > rank) {
        throw Error("pod: requested " + std::to_string(n) +
                    " basis vectors but the numerical rank is " + std::to_string(rank));
    }
    Basis basis;
    basis.columns = svd.left.leftCols(n);
    basis.singular_values = svd.singular_values;
    basis.orthonormal = true;
    return basis;
}

Basis pod(const Matrix& snapshots, int n) {
    const ThinSvd svd = pod_factorization(snapshots);
    return basis_from_factorization(svd, n, static_cast<int>(snapshots.rows()),
                                    static_cast<int>(snapshots.cols()));
}

std::pair<Basis, Basis> extended_pod(const Matrix& snapshots, int n, int n_ext) {
    if (!(n < n_ext)) throw Error("extended_pod: requires n < n_ext");
    const ThinSvd svd = pod_factorization(snapshots);
    const int rows = static_cast<int>(snapshots.rows());
    const int cols = static_cast<int>(snapshots.cols());
    Basis phi = basis_from_factorization(svd, n, rows, cols);
    Basis phi_e = basis_from_factorization(svd, n_ext, rows, cols);
    return {std::move(phi), std::move(phi_e)};
}

}  // namespace romkit
