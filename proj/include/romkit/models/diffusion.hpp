// Copyright romkit developers. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#ifndef ROMKIT_MODELS_DIFFUSION_HPP
#define ROMKIT_MODELS_DIFFUSION_HPP

#include <array>
#include <memory>

#include "romkit/model.hpp"

namespace romkit {

/// 2D nonlinear diffusion du/dt = div((kappa + alpha*u) grad u) on the unit
/// square, bilinear quadrilateral finite elements with 2x2 Gauss quadrature,
/// consistent mass matrix, natural (zero-flux) boundary. The coefficient is
/// interpolated from nodal values to quadrature points. Initial state is 2
/// inside the quarter circle x^2 + y^2 <= 0.25 and 1 elsewhere.
///
/// This is the benchmark with a non-identity mass matrix. No parameters.
class DiffusionModel : public SemiDiscreteModel {
public:
    explicit DiffusionModel(int elements_per_side, double kappa = 0.5, double alpha = 0.01);

    Vector initial_state(const ParameterPoint& mu) const override;
    void velocity_rows(const Vector& u, double t, const ParameterPoint& mu,
                       std::span<const int> rows, Eigen::Ref<Vector> out) const override;
    JacobianRows jacobian_rows(const Vector& u, double t, const ParameterPoint& mu,
                               std::span<const int> rows) const override;
    void stencil(int row, std::vector<int>& out) const override;

    int elements_per_side() const { return m_; }

private:
    int node_index(int ix, int iy) const { return iy * (m_ + 1) + ix; }
    void element_nodes(int ex, int ey, std::array<int, 4>& nodes) const;
    // Row contribution of local node `a` in one element, and optionally the
    // 4 Jacobian entries of that row with respect to the element's nodes.
    double element_row(const Vector& u, const std::array<int, 4>& nodes, int a,
                       double* jac_row) const;

    int m_;
    double h_;
    double kappa_;
    double alpha_;
    // Shape values and physical gradients at the 2x2 Gauss points.
    std::array<std::array<double, 4>, 4> shape_;
    std::array<std::array<double, 4>, 4> dshape_dx_;
    std::array<std::array<double, 4>, 4> dshape_dy_;
    double jac_det_;
};

std::shared_ptr<SemiDiscreteModel> diffusion_model(int elements_per_side, double kappa = 0.5,
                                                   double alpha = 0.01);

}  // namespace romkit

#endif
