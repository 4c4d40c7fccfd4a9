// Copyright romkit developers. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include "romkit/models/burgers.hpp"

#include <algorithm>
#include <cmath>

namespace romkit {

namespace {
inline double half_square(double w) { return 0.5 * w * w; }
}  // namespace

double burgers_godunov_flux(double left, double right) {
    // Closed form for a convex flux with sonic point at w = 0.
    return std::max(half_square(std::max(left, 0.0)), half_square(std::min(right, 0.0)));
}

void burgers_godunov_flux_gradient(double left, double right, double& d_left, double& d_right) {
    const double a = std::max(left, 0.0);
    const double b = std::min(right, 0.0);
    if (half_square(a) >= half_square(b)) {
        d_left = a;
        d_right = 0.0;
    } else {
        d_left = 0.0;
        d_right = b;
    }
}

BurgersModel::BurgersModel(int n_cells, double source_coeff)
    : n_cells_(n_cells), dx_(1.0 / n_cells), source_coeff_(source_coeff) {
    if (n_cells < 2) throw Error("burgers_model requires n_cells >= 2");
    configure(n_cells, ParameterBox{{1.2, 0.02}, {1.5, 0.025}});
    set_identity_mass();
}

Vector BurgersModel::initial_state(const ParameterPoint&) const {
    return Vector::Ones(n_cells_);
}

void BurgersModel::velocity_rows(const Vector& u, double /*t*/, const ParameterPoint& mu,
                                 std::span<const int> rows, Eigen::Ref<Vector> out) const {
    counters().add_velocity_call();
    counters().add_velocity_rows(static_cast<std::int64_t>(rows.size()));
    const double inflow = mu[0];
    const double mu2 = mu[1];
    for (std::size_t k = 0; k < rows.size(); ++k) {
        const int i = rows[k];
        const double wl = (i == 0) ? inflow : u[i - 1];
        const double wc = u[i];
        const double wr = (i == n_cells_ - 1) ? wc : u[i + 1];
        const double flux_left = burgers_godunov_flux(wl, wc);
        const double flux_right = burgers_godunov_flux(wc, wr);
        out[static_cast<Eigen::Index>(k)] =
            -(flux_right - flux_left) / dx_ + source_coeff_ * std::exp(mu2 * cell_center(i));
    }
}

JacobianRows BurgersModel::jacobian_rows(const Vector& u, double /*t*/, const ParameterPoint& mu,
                                         std::span<const int> rows) const {
    counters().add_jacobian_rows(static_cast<std::int64_t>(rows.size()));
    const double inflow = mu[0];
    JacobianRows jr;
    jr.offsets.reserve(rows.size() + 1);
    jr.offsets.push_back(0);
    jr.cols.reserve(3 * rows.size());
    jr.vals.reserve(3 * rows.size());
    for (int i : rows) {
        const double wl = (i == 0) ? inflow : u[i - 1];
        const double wc = u[i];
        const double wr = (i == n_cells_ - 1) ? wc : u[i + 1];
        double dl_l, dl_c, dr_c, dr_r;
        burgers_godunov_flux_gradient(wl, wc, dl_l, dl_c);
        burgers_godunov_flux_gradient(wc, wr, dr_c, dr_r);
        // d f_i / d w_{i-1}
        if (i > 0) {
            jr.cols.push_back(i - 1);
            jr.vals.push_back(dl_l / dx_);
        }
        // d f_i / d w_i; the last cell's right face sees w_i on both sides
        double diag = (dl_c - dr_c) / dx_;
        if (i == n_cells_ - 1) diag -= dr_r / dx_;
        jr.cols.push_back(i);
        jr.vals.push_back(diag);
        // d f_i / d w_{i+1}
        if (i < n_cells_ - 1) {
            jr.cols.push_back(i + 1);
            jr.vals.push_back(-dr_r / dx_);
        }
        jr.offsets.push_back(static_cast<int>(jr.cols.size()));
    }
    return jr;
}

void BurgersModel::stencil(int row, std::vector<int>& out) const {
    out.clear();
    if (row > 0) out.push_back(row - 1);
    out.push_back(row);
    if (row < n_cells_ - 1) out.push_back(row + 1);
}

std::shared_ptr<SemiDiscreteModel> burgers_model(int n_cells, double source_coeff) {
    return std::make_shared<BurgersModel>(n_cells, source_coeff);
}

}  // namespace romkit
