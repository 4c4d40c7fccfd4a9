// Copyright romkit developers. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#ifndef ROMKIT_TESTS_CALLBACK_MODEL_HPP
#define ROMKIT_TESTS_CALLBACK_MODEL_HPP

#include <functional>

#include "romkit/model.hpp"

namespace romkit::testing {

/// Dense test model defined by callbacks; every row depends on every state.
class CallbackModel final : public SemiDiscreteModel {
public:
    using VelocityFn = std::function<Vector(const Vector&, double, const ParameterPoint&)>;
    using JacobianFn = std::function<Matrix(const Vector&, double, const ParameterPoint&)>;

    CallbackModel(int n, Vector u0, VelocityFn f, JacobianFn df)
        : u0_(std::move(u0)), f_(std::move(f)), df_(std::move(df)) {
        configure(n, ParameterBox{});
        set_identity_mass();
    }

    CallbackModel(SpMat mass, Vector u0, VelocityFn f, JacobianFn df)
        : u0_(std::move(u0)), f_(std::move(f)), df_(std::move(df)) {
        configure(static_cast<int>(mass.rows()), ParameterBox{});
        set_mass_matrix(std::move(mass));
    }

    Vector initial_state(const ParameterPoint&) const override { return u0_; }

    void velocity_rows(const Vector& u, double t, const ParameterPoint& mu,
                       std::span<const int> rows, Eigen::Ref<Vector> out) const override {
        counters().add_velocity_call();
        counters().add_velocity_rows(static_cast<std::int64_t>(rows.size()));
        const Vector full = f_(u, t, mu);
        for (std::size_t k = 0; k < rows.size(); ++k) out[static_cast<Eigen::Index>(k)] = full[rows[k]];
    }

    JacobianRows jacobian_rows(const Vector& u, double t, const ParameterPoint& mu,
                               std::span<const int> rows) const override {
        const Matrix full = df_(u, t, mu);
        JacobianRows jr;
        jr.offsets.push_back(0);
        for (int r : rows) {
            for (int c = 0; c < n_space(); ++c) {
                jr.cols.push_back(c);
                jr.vals.push_back(full(r, c));
            }
            jr.offsets.push_back(static_cast<int>(jr.cols.size()));
        }
        return jr;
    }

    void stencil(int, std::vector<int>& out) const override {
        out.resize(static_cast<std::size_t>(n_space()));
        for (int i = 0; i < n_space(); ++i) out[static_cast<std::size_t>(i)] = i;
    }

private:
    Vector u0_;
    VelocityFn f_;
    JacobianFn df_;
};

/// Scalar model du/dt = f(u) with analytic derivative.
inline CallbackModel scalar_model(double u0, std::function<double(double)> f,
                                  std::function<double(double)> df) {
    Vector init(1);
    init[0] = u0;
    return CallbackModel(
        1, init,
        [f](const Vector& u, double, const ParameterPoint&) {
            Vector out(1);
            out[0] = f(u[0]);
            return out;
        },
        [df](const Vector& u, double, const ParameterPoint&) {
            Matrix out(1, 1);
            out(0, 0) = df(u[0]);
            return out;
        });
}

/// Central finite-difference Jacobian of the model velocity.
inline Matrix fd_jacobian(const SemiDiscreteModel& model, const Vector& u, double t,
                          const ParameterPoint& mu) {
    const int n = model.n_space();
    Matrix jac(n, n);
    for (int j = 0; j < n; ++j) {
        const double h = 1e-6 * std::max(1.0, std::abs(u[j]));
        Vector up = u, dn = u;
        up[j] += h;
        dn[j] -= h;
        jac.col(j) = (model.velocity(up, t, mu) - model.velocity(dn, t, mu)) / (2.0 * h);
    }
    return jac;
}

}  // namespace romkit::testing

#endif
