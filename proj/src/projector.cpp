// Copyright romkit developers. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include "romkit/projector.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>

namespace romkit {

Vector ObliqueProjector::sample_rows(const Vector& v) const {
    Vector out(plan.n_z());
    for (int i = 0; i < plan.n_z(); ++i) out[i] = v[plan.indices[static_cast<std::size_t>(i)]];
    return out;
}

Vector ObliqueProjector::solve_small(const Vector& sampled) const {
    return small_r.triangularView<Eigen::Upper>().solve(small_q.transpose() * sampled);
}

Matrix ObliqueProjector::solve_small(const Matrix& sampled) const {
    return small_r.triangularView<Eigen::Upper>().solve(small_q.transpose() * sampled);
}

Vector ObliqueProjector::apply(const Vector& v) const {
    if (mass_weight && !mass_weight->has_identity_mass()) {
        const Vector y = mass_weight->solve_mass(v);
        const Vector c = solve_small(sample_rows(y));
        return mass_weight->apply_mass(basis.columns * c);
    }
    return basis.columns * solve_small(sample_rows(v));
}

Matrix ObliqueProjector::dense() const {
    const int n = n_rows();
    Matrix p(n, n);
    Vector e = Vector::Zero(n);
    for (int j = 0; j < n; ++j) {
        e[j] = 1.0;
        p.col(j) = apply(e);
        e[j] = 0.0;
    }
    return p;
}

ObliqueProjector build_projector(const Basis& basis, const SamplingPlan& plan,
                                 bool orthogonalize, const SemiDiscreteModel* mass_weight) {
    ObliqueProjector proj;
    proj.plan = plan;
    if (orthogonalize) {
        // Orthogonalize first, then re-derive the sampling plan from Q so the
        // small factor inherits Q's conditioning.
        Eigen::HouseholderQR<Matrix> qr(basis.columns);
        Matrix thin_q = qr.householderQ() * Matrix::Identity(basis.n_rows(), basis.n_cols());
        proj.basis = Basis{std::move(thin_q), basis.singular_values, true};
        if (plan.n_z() < basis.n_rows()) {
            proj.plan = sample(proj.basis.columns, plan.method, plan.n_z());
        }  // full sampling re-derives to itself
    } else {
        proj.basis = basis;
    }
    const int n = proj.basis.n_cols();
    if (proj.plan.n_z() < n) {
        throw Error("build_projector: plan has fewer samples than basis columns");
    }

    proj.small_factor.resize(proj.plan.n_z(), n);
    for (int i = 0; i < proj.plan.n_z(); ++i) {
        proj.small_factor.row(i) = proj.basis.columns.row(proj.plan.indices[static_cast<std::size_t>(i)]);
    }

    Eigen::JacobiSVD<Matrix> svd(proj.small_factor);
    const double smin = svd.singularValues().minCoeff();
    const double smax = svd.singularValues().maxCoeff();
    if (smin <= 0.0) throw Error("build_projector: Z^T Phi is rank deficient");
    proj.condition = smax / smin;
    if (proj.condition > 1e12) {
        throw Error("build_projector: cond(Z^T Phi) = " + std::to_string(proj.condition) +
                    " exceeds 1e12");
    }

    Eigen::HouseholderQR<Matrix> qr(proj.small_factor);
    proj.small_q = qr.householderQ() * Matrix::Identity(proj.plan.n_z(), n);
    proj.small_r = qr.matrixQR().topRows(n).triangularView<Eigen::Upper>();
    proj.mass_weight = mass_weight;
    return proj;
}

ProjectionBoundReport projection_error_bound(const ObliqueProjector& projector, const Vector& v) {
    ProjectionBoundReport report;
    report.lhs = (v - projector.apply(v)).norm();
    report.kappa = projector.condition;

    // effective reconstruction basis: M Phi for the weighted variant
    Matrix effective = projector.basis.columns;
    if (projector.mass_weight && !projector.mass_weight->has_identity_mass()) {
        effective = projector.mass_weight->mass_matrix() * effective;
    }
    Eigen::HouseholderQR<Matrix> qr(effective);
    const Matrix q = qr.householderQ() * Matrix::Identity(effective.rows(), effective.cols());

    Matrix zq(projector.plan.n_z(), q.cols());
    for (int i = 0; i < projector.plan.n_z(); ++i) {
        zq.row(i) = q.row(projector.plan.indices[static_cast<std::size_t>(i)]);
    }
    Eigen::JacobiSVD<Matrix> svd(zq);
    report.pinv_norm = 1.0 / svd.singularValues().minCoeff();

    const Vector orth_residual = v - q * (q.transpose() * v);
    report.rhs = report.pinv_norm * orth_residual.norm();
    return report;
}

Basis sns_basis(const Basis& solution_basis, const SemiDiscreteModel& model) {
    if (model.has_identity_mass()) return solution_basis;
    Basis out;
    out.columns = model.mass_matrix() * solution_basis.columns;
    out.singular_values = solution_basis.singular_values;
    out.orthonormal = false;
    return out;
}

}  // namespace romkit
