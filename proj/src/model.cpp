// Copyright romkit developers. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include "romkit/model.hpp"

#include <algorithm>
#include <numeric>

namespace romkit {

void SemiDiscreteModel::configure(int n_space, ParameterBox domain) {
    n_space_ = n_space;
    param_domain_ = std::move(domain);
}

void SemiDiscreteModel::set_identity_mass() {
    identity_mass_ = true;
    mass_.resize(n_space_, n_space_);
    mass_.setIdentity();
}

void SemiDiscreteModel::set_mass_matrix(SpMat mass) {
    identity_mass_ = false;
    mass_ = std::move(mass);
    mass_solver_.compute(mass_);
    if (mass_solver_.info() != Eigen::Success) {
        throw Error("mass matrix factorization failed; matrix is singular or not SPD");
    }
}

std::vector<int> SemiDiscreteModel::all_rows() const {
    std::vector<int> rows(static_cast<std::size_t>(n_space_));
    std::iota(rows.begin(), rows.end(), 0);
    return rows;
}

Vector SemiDiscreteModel::velocity(const Vector& u, double t, const ParameterPoint& mu) const {
    const auto rows = all_rows();
    Vector out(n_space_);
    velocity_rows(u, t, mu, rows, out);
    return out;
}

SpMat SemiDiscreteModel::velocity_jacobian(const Vector& u, double t,
                                           const ParameterPoint& mu) const {
    const auto rows = all_rows();
    const JacobianRows jr = jacobian_rows(u, t, mu, rows);
    std::vector<Triplet> trips;
    trips.reserve(jr.vals.size());
    for (int r = 0; r < jr.n_rows(); ++r) {
        for (int k = jr.offsets[static_cast<std::size_t>(r)];
             k < jr.offsets[static_cast<std::size_t>(r) + 1]; ++k) {
            trips.emplace_back(rows[static_cast<std::size_t>(r)],
                               jr.cols[static_cast<std::size_t>(k)],
                               jr.vals[static_cast<std::size_t>(k)]);
        }
    }
    SpMat jac(n_space_, n_space_);
    jac.setFromTriplets(trips.begin(), trips.end());
    return jac;
}

std::vector<int> SemiDiscreteModel::stencil_union(std::span<const int> rows) const {
    std::vector<int> result;
    std::vector<int> one;
    for (int r : rows) {
        stencil(r, one);
        result.insert(result.end(), one.begin(), one.end());
    }
    std::sort(result.begin(), result.end());
    result.erase(std::unique(result.begin(), result.end()), result.end());
    return result;
}

}  // namespace romkit
