// Copyright romkit developers. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include "romkit/models/diffusion.hpp"

#include <cmath>

namespace romkit {

DiffusionModel::DiffusionModel(int elements_per_side, double kappa, double alpha)
    : m_(elements_per_side), h_(1.0 / elements_per_side), kappa_(kappa), alpha_(alpha) {
    if (elements_per_side < 2) throw Error("diffusion_model requires elements_per_side >= 2");
    const int n_nodes = (m_ + 1) * (m_ + 1);
    configure(n_nodes, ParameterBox{});

    // Reference bilinear shape functions at the 2x2 Gauss points, mapped to
    // physical coordinates (uniform square elements of side h).
    const double g = 1.0 / std::sqrt(3.0);
    const double qp[4][2] = {{-g, -g}, {g, -g}, {g, g}, {-g, g}};
    const double sx[4] = {-1.0, 1.0, 1.0, -1.0};
    const double sy[4] = {-1.0, -1.0, 1.0, 1.0};
    for (int q = 0; q < 4; ++q) {
        const double xi = qp[q][0], eta = qp[q][1];
        for (int a = 0; a < 4; ++a) {
            shape_[q][a] = 0.25 * (1.0 + sx[a] * xi) * (1.0 + sy[a] * eta);
            dshape_dx_[q][a] = 0.25 * sx[a] * (1.0 + sy[a] * eta) * (2.0 / h_);
            dshape_dy_[q][a] = 0.25 * sy[a] * (1.0 + sx[a] * xi) * (2.0 / h_);
        }
    }
    jac_det_ = h_ * h_ / 4.0;

    // Consistent mass matrix (exact: 2-point Gauss integrates the biquadratic
    // shape products exactly on rectangles).
    std::vector<Triplet> trips;
    trips.reserve(static_cast<std::size_t>(16 * m_ * m_));
    std::array<int, 4> nodes{};
    for (int ey = 0; ey < m_; ++ey) {
        for (int ex = 0; ex < m_; ++ex) {
            element_nodes(ex, ey, nodes);
            for (int a = 0; a < 4; ++a) {
                for (int b = 0; b < 4; ++b) {
                    double mab = 0.0;
                    for (int q = 0; q < 4; ++q) mab += shape_[q][a] * shape_[q][b];
                    trips.emplace_back(nodes[a], nodes[b], mab * jac_det_);
                }
            }
        }
    }
    SpMat mass(n_nodes, n_nodes);
    mass.setFromTriplets(trips.begin(), trips.end());
    set_mass_matrix(std::move(mass));
}

void DiffusionModel::element_nodes(int ex, int ey, std::array<int, 4>& nodes) const {
    nodes[0] = node_index(ex, ey);
    nodes[1] = node_index(ex + 1, ey);
    nodes[2] = node_index(ex + 1, ey + 1);
    nodes[3] = node_index(ex, ey + 1);
}

Vector DiffusionModel::initial_state(const ParameterPoint&) const {
    Vector u(n_space());
    for (int iy = 0; iy <= m_; ++iy) {
        for (int ix = 0; ix <= m_; ++ix) {
            const double x = ix * h_, y = iy * h_;
            u[node_index(ix, iy)] = (x * x + y * y <= 0.25) ? 2.0 : 1.0;
        }
    }
    return u;
}

double DiffusionModel::element_row(const Vector& u, const std::array<int, 4>& nodes, int a,
                                   double* jac_row) const {
    // f_a = -sum_q (kappa + alpha u_q) grad(N_a) . grad(u) |J|
    double fa = 0.0;
    if (jac_row) {
        for (int b = 0; b < 4; ++b) jac_row[b] = 0.0;
    }
    for (int q = 0; q < 4; ++q) {
        double uq = 0.0, ux = 0.0, uy = 0.0;
        for (int b = 0; b < 4; ++b) {
            const double ub = u[nodes[static_cast<std::size_t>(b)]];
            uq += shape_[q][b] * ub;
            ux += dshape_dx_[q][b] * ub;
            uy += dshape_dy_[q][b] * ub;
        }
        const double coeff = kappa_ + alpha_ * uq;
        const double grad_a_dot = dshape_dx_[q][a] * ux + dshape_dy_[q][a] * uy;
        fa -= coeff * grad_a_dot * jac_det_;
        if (jac_row) {
            for (int b = 0; b < 4; ++b) {
                const double stiff =
                    dshape_dx_[q][a] * dshape_dx_[q][b] + dshape_dy_[q][a] * dshape_dy_[q][b];
                jac_row[b] -= (coeff * stiff + alpha_ * shape_[q][b] * grad_a_dot) * jac_det_;
            }
        }
    }
    return fa;
}

void DiffusionModel::velocity_rows(const Vector& u, double /*t*/, const ParameterPoint&,
                                   std::span<const int> rows, Eigen::Ref<Vector> out) const {
    counters().add_velocity_call();
    counters().add_velocity_rows(static_cast<std::int64_t>(rows.size()));
    std::array<int, 4> nodes{};
    for (std::size_t k = 0; k < rows.size(); ++k) {
        const int node = rows[k];
        const int ix = node % (m_ + 1), iy = node / (m_ + 1);
        double fi = 0.0;
        for (int ey = iy - 1; ey <= iy; ++ey) {
            for (int ex = ix - 1; ex <= ix; ++ex) {
                if (ex < 0 || ey < 0 || ex >= m_ || ey >= m_) continue;
                element_nodes(ex, ey, nodes);
                int a = 0;
                while (nodes[static_cast<std::size_t>(a)] != node) ++a;
                fi += element_row(u, nodes, a, nullptr);
            }
        }
        out[static_cast<Eigen::Index>(k)] = fi;
    }
}

JacobianRows DiffusionModel::jacobian_rows(const Vector& u, double /*t*/, const ParameterPoint&,
                                           std::span<const int> rows) const {
    counters().add_jacobian_rows(static_cast<std::int64_t>(rows.size()));
    JacobianRows jr;
    jr.offsets.push_back(0);
    std::array<int, 4> nodes{};
    std::vector<int> cols;
    std::vector<double> acc;
    for (int node : rows) {
        const int ix = node % (m_ + 1), iy = node / (m_ + 1);
        cols.clear();
        acc.clear();
        // up to 9 neighbours, gathered per adjacent element
        for (int ey = iy - 1; ey <= iy; ++ey) {
            for (int ex = ix - 1; ex <= ix; ++ex) {
                if (ex < 0 || ey < 0 || ex >= m_ || ey >= m_) continue;
                element_nodes(ex, ey, nodes);
                int a = 0;
                while (nodes[static_cast<std::size_t>(a)] != node) ++a;
                double jrow[4];
                element_row(u, nodes, a, jrow);
                for (int b = 0; b < 4; ++b) {
                    const int col = nodes[static_cast<std::size_t>(b)];
                    auto it = std::find(cols.begin(), cols.end(), col);
                    if (it == cols.end()) {
                        cols.push_back(col);
                        acc.push_back(jrow[b]);
                    } else {
                        acc[static_cast<std::size_t>(it - cols.begin())] += jrow[b];
                    }
                }
            }
        }
        for (std::size_t i = 0; i < cols.size(); ++i) {
            jr.cols.push_back(cols[i]);
            jr.vals.push_back(acc[i]);
        }
        jr.offsets.push_back(static_cast<int>(jr.cols.size()));
    }
    return jr;
}

void DiffusionModel::stencil(int row, std::vector<int>& out) const {
    out.clear();
    const int ix = row % (m_ + 1), iy = row / (m_ + 1);
    for (int dy = -1; dy <= 1; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
            const int jx = ix + dx, jy = iy + dy;
            if (jx < 0 || jy < 0 || jx > m_ || jy > m_) continue;
            out.push_back(node_index(jx, jy));
        }
    }
}

std::shared_ptr<SemiDiscreteModel> diffusion_model(int elements_per_side, double kappa,
                                                   double alpha) {
    return std::make_shared<DiffusionModel>(elements_per_side, kappa, alpha);
}

}  // namespace romkit
