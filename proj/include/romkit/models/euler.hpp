// Copyright romkit developers. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#ifndef ROMKIT_MODELS_EULER_HPP
#define ROMKIT_MODELS_EULER_HPP

#include <memory>

#include "romkit/model.hpp"

namespace romkit {

/// Gas constants for the quasi-1D nozzle benchmark.
struct EulerGas {
    double gamma = 1.3;
    double R = 355.4;        // m^2/s^2/K
    double total_temp = 300.0;  // K
    double total_pressure = 1.0e6;  // N/m^2
};

/// Converging-diverging nozzle cross-sectional area (four cubic segments
/// through (0,0.2), (0.25,0.173), (0.5,0.17), (0.75,0.173), (1,0.2)).
double euler_nozzle_area(double x);
double euler_nozzle_area_derivative(double x);

/// Initial conservative state (rho, rho*u, e) per cell: isentropic flow
/// matched to the mid-nozzle Mach number mu2, a stationary shock at
/// x = 0.85 m, and the exit pressure scaled by mu1.
Vector euler_initial_state(const ParameterPoint& mu, int n_cells, const EulerGas& gas = {});

/// Quasi-1D Euler equations in a parameterized nozzle, finite volumes with
/// Roe flux difference splitting (Harten entropy fix, delta = 0.05(|u|+c))
/// and the pressure-area source term. Boundary cells carry their own
/// equations: the inflow ghost holds the isentropic inlet state and the
/// outflow ghost holds the scaled exit pressure with extrapolated density
/// and velocity. State layout is cell-major (rho, rho*u, e) triples, so
/// n_space = 3*n_cells. Parameters mu = (exit pressure factor, mid Mach).
class EulerModel : public SemiDiscreteModel {
public:
    explicit EulerModel(int n_cells, EulerGas gas = {});

    Vector initial_state(const ParameterPoint& mu) const override;
    void velocity_rows(const Vector& u, double t, const ParameterPoint& mu,
                       std::span<const int> rows, Eigen::Ref<Vector> out) const override;
    JacobianRows jacobian_rows(const Vector& u, double t, const ParameterPoint& mu,
                               std::span<const int> rows) const override;
    void stencil(int row, std::vector<int>& out) const override;

    int n_cells() const { return n_cells_; }
    double cell_center(int i) const { return (i + 0.5) * dx_; }
    const EulerGas& gas() const { return gas_; }

private:
    struct BoundaryContext;
    BoundaryContext boundary_context(const ParameterPoint& mu) const;

    int n_cells_;
    double dx_;
    EulerGas gas_;
    std::vector<double> face_area_;      // A at the n_cells+1 faces
    std::vector<double> center_area_;    // A at cell centers
    std::vector<double> center_area_dx_; // dA/dx at cell centers
};

/// Roe flux for a single face given left/right conservative states;
/// throws on nonphysical input (rho <= 0 or p <= 0).
void euler_roe_flux(const double* wl, const double* wr, const EulerGas& gas, double* flux);

std::shared_ptr<SemiDiscreteModel> euler_model(int n_cells, EulerGas gas = {});

}  // namespace romkit

#endif
