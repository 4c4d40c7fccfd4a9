// Copyright romkit developers. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#ifndef ROMKIT_MODELS_BURGERS_HPP
#define ROMKIT_MODELS_BURGERS_HPP

#include <memory>

#include "romkit/model.hpp"

namespace romkit {

/// Inviscid 1D Burgers equation on [0,1], finite volumes with Godunov
/// intercell fluxes, source c*exp(mu2*x), inflow boundary w(0,t) = mu1
/// imposed through a ghost cell, zeroth-order extrapolation at outflow.
/// Initial state is identically one. Parameters mu = (mu1, mu2).
class BurgersModel : public SemiDiscreteModel {
public:
    explicit BurgersModel(int n_cells, double source_coeff = 0.02);

    Vector initial_state(const ParameterPoint& mu) const override;
    void velocity_rows(const Vector& u, double t, const ParameterPoint& mu,
                       std::span<const int> rows, Eigen::Ref<Vector> out) const override;
    JacobianRows jacobian_rows(const Vector& u, double t, const ParameterPoint& mu,
                               std::span<const int> rows) const override;
    void stencil(int row, std::vector<int>& out) const override;

    double cell_center(int i) const { return (i + 0.5) * dx_; }
    double dx() const { return dx_; }

private:
    int n_cells_;
    double dx_;
    double source_coeff_;
};

/// Godunov flux for the convex flux f(w) = w^2/2.
double burgers_godunov_flux(double left, double right);

/// Partial derivatives of the Godunov flux; ties resolve to the left wave.
void burgers_godunov_flux_gradient(double left, double right, double& d_left, double& d_right);

std::shared_ptr<SemiDiscreteModel> burgers_model(int n_cells, double source_coeff = 0.02);

}  // namespace romkit

#endif
