// Copyright romkit developers. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#ifndef ROMKIT_MODEL_HPP
#define ROMKIT_MODEL_HPP

#include <memory>
#include <span>

#include <Eigen/SparseCholesky>

#include "romkit/types.hpp"

namespace romkit {

/// Compressed rows of a velocity Jacobian: row r of the request occupies
/// [offsets[r], offsets[r+1]) in the cols/vals arrays.
struct JacobianRows {
    std::vector<int> offsets;
    std::vector<int> cols;
    std::vector<double> vals;

    int n_rows() const { return static_cast<int>(offsets.size()) - 1; }
};

/// Semi-discrete full-order model  M du/dt = f(u, t; mu).
///
/// Models are immutable after construction; velocity and Jacobian
/// evaluation is reentrant. Hyper-reduced solvers evaluate the velocity
/// through velocity_rows()/jacobian_rows() so the cost scales with the
/// number of sampled rows, not with n_space(). The contract for these row
/// evaluators is that `u` need only be valid on the stencil of the
/// requested rows.
class SemiDiscreteModel {
public:
    virtual ~SemiDiscreteModel() = default;

    int n_space() const { return n_space_; }
    int n_params() const { return param_domain_.size(); }
    const ParameterBox& param_domain() const { return param_domain_; }

    const SpMat& mass_matrix() const { return mass_; }
    bool has_identity_mass() const { return identity_mass_; }

    /// Solves M x = b with the factorization computed at construction.
    Vector solve_mass(const Vector& b) const {
        if (identity_mass_) return b;
        return mass_solver_.solve(b);
    }

    Vector apply_mass(const Vector& x) const {
        if (identity_mass_) return x;
        return mass_ * x;
    }

    virtual Vector initial_state(const ParameterPoint& mu) const = 0;

    /// Velocity restricted to `rows`; reads `u` only on their stencil.
    virtual void velocity_rows(const Vector& u, double t, const ParameterPoint& mu,
                               std::span<const int> rows, Eigen::Ref<Vector> out) const = 0;

    /// Jacobian rows d f_r / d u, sparse on the row stencil.
    virtual JacobianRows jacobian_rows(const Vector& u, double t, const ParameterPoint& mu,
                                       std::span<const int> rows) const = 0;

    /// State indices row `row` of the velocity depends on.
    virtual void stencil(int row, std::vector<int>& out) const = 0;

    Vector velocity(const Vector& u, double t, const ParameterPoint& mu) const;
    SpMat velocity_jacobian(const Vector& u, double t, const ParameterPoint& mu) const;

    /// Sorted union of the stencils of `rows`.
    std::vector<int> stencil_union(std::span<const int> rows) const;

    EvalCounters& counters() const { return counters_; }

protected:
    void configure(int n_space, ParameterBox domain);
    void set_identity_mass();
    void set_mass_matrix(SpMat mass);

    std::vector<int> all_rows() const;

private:
    int n_space_ = 0;
    ParameterBox param_domain_;
    SpMat mass_;
    bool identity_mass_ = true;
    Eigen::SimplicialLDLT<SpMat> mass_solver_;
    mutable EvalCounters counters_;
};

}  // namespace romkit

#endif
