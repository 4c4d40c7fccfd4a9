// Copyright romkit developers. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include "romkit/models/euler.hpp"

#include <cmath>

#include "romkit/detail/dual.hpp"

namespace romkit {

namespace {

using detail::Dual;
using detail::value;

double cubic(double s, double c3, double c2, double c1, double c0) {
    return ((c3 * s + c2) * s + c1) * s + c0;
}

double cubic_dx(double s, double c3, double c2, double c1) {
    return (3.0 * c3 * s + 2.0 * c2) * s + c1;
}

// Area-Mach function G(M) = M (1 + e M^2)^{-r}; the isentropic relation
// reads G(M(x)) = G(M_m) A_m / A(x).
double area_mach_g(double mach, double gamma) {
    const double e = 0.5 * (gamma - 1.0);
    const double r = (gamma + 1.0) / (2.0 * (gamma - 1.0));
    return mach * std::pow(1.0 + e * mach * mach, -r);
}

double solve_mach(double x, double mid_mach, double gamma) {
    const double target = area_mach_g(mid_mach, gamma) * euler_nozzle_area(0.5) /
                          euler_nozzle_area(x);
    // G is unimodal with its maximum at M = 1. Taking the branch that
    // contains the mid-nozzle Mach number keeps the profile continuous
    // through the throat: supersonic mid Mach selects the supersonic root
    // everywhere, subsonic mid Mach the subsonic one.
    const bool supersonic = mid_mach >= 1.0;
    double lo = supersonic ? 1.0 : 1e-10;
    double hi = supersonic ? 10.0 : 1.0;
    double flo = area_mach_g(lo, gamma) - target;
    const double fhi = area_mach_g(hi, gamma) - target;
    if (flo * fhi > 0.0) {
        throw Error("euler_initial_state: Mach relation has no bracketed root at x=" +
                    std::to_string(x));
    }
    while (hi - lo > 1e-12) {
        const double mid = 0.5 * (lo + hi);
        const double fmid = area_mach_g(mid, gamma) - target;
        if ((fmid > 0.0) == (flo > 0.0)) {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

struct PrimitiveState {
    double rho, u, p;
};

PrimitiveState isentropic_state(double x, double mid_mach, const EulerGas& gas) {
    const double e = 0.5 * (gas.gamma - 1.0);
    const double mach = solve_mach(x, mid_mach, gas.gamma);
    const double opm = 1.0 + e * mach * mach;
    const double p = gas.total_pressure * std::pow(opm, -gas.gamma / (gas.gamma - 1.0));
    const double temp = gas.total_temp / opm;
    const double rho = p / (gas.R * temp);
    const double c = std::sqrt(gas.gamma * p / rho);
    return {rho, mach * c, p};
}

double total_energy(const PrimitiveState& s, double gamma) {
    return s.p / (gamma - 1.0) + 0.5 * s.rho * s.u * s.u;
}

// Post-shock primitive state from the stationary-shock invariants
// m = rho u, n = rho u^2 + p, h = (e + p)/rho of the pre-shock state.
PrimitiveState post_shock_state(const PrimitiveState& pre, double gamma) {
    const double m = pre.rho * pre.u;
    const double n = pre.rho * pre.u * pre.u + pre.p;
    const double e1 = total_energy(pre, gamma);
    const double h = (e1 + pre.p) / pre.rho;
    const double gg = gamma / (gamma - 1.0);
    const double a = 0.5 - gg;
    const double b = gg * n / m;
    const double disc = b * b + 4.0 * a * h;
    if (disc < 0.0) {
        throw Error("euler_initial_state: shock quadratic has no real root");
    }
    const double sq = std::sqrt(disc);
    const double r1 = (-b + sq) / (2.0 * a);
    const double r2 = (-b - sq) / (2.0 * a);
    // One root reproduces the pre-shock velocity; the jump takes the other.
    double u2 = (std::abs(r1 - pre.u) > std::abs(r2 - pre.u)) ? r1 : r2;
    if (std::abs(r1 - r2) <= 1e-9 * std::abs(pre.u)) u2 = pre.u;  // zero-strength shock
    if (u2 <= 0.0) {
        throw Error("euler_initial_state: shock quadratic has no positive root");
    }
    const double rho2 = m / u2;
    const double p2 = n - m * u2;
    if (rho2 <= 0.0 || p2 <= 0.0) {
        throw Error("euler_initial_state: nonphysical post-shock state");
    }
    return {rho2, u2, p2};
}

template <typename T>
void analytic_flux(const T* w, double gamma, T* flux, T& pressure) {
    const T rho = w[0];
    const T mom = w[1];
    const T e = w[2];
    if (value(rho) <= 0.0) throw Error("euler velocity: nonphysical state (rho <= 0)");
    const T u = mom / rho;
    pressure = (gamma - 1.0) * (e - 0.5 * rho * u * u);
    if (value(pressure) <= 0.0) throw Error("euler velocity: nonphysical state (p <= 0)");
    flux[0] = mom;
    flux[1] = mom * u + pressure;
    flux[2] = (e + pressure) * u;
}

// Harten's entropy fix applied to every characteristic speed.
template <typename T>
T entropy_fixed_abs(const T& lambda, const T& delta) {
    using detail::abs;
    T a = abs(lambda);
    if (value(a) >= value(delta)) return a;
    return (lambda * lambda + delta * delta) / (2.0 * delta);
}

template <typename T>
void roe_flux_t(const T* wl, const T* wr, const EulerGas& gas, T* out) {
    using detail::abs;
    using detail::sqrt;
    const double gamma = gas.gamma;
    T fl[3], fr[3], pl, pr;
    analytic_flux(wl, gamma, fl, pl);
    analytic_flux(wr, gamma, fr, pr);
    const T rhol = wl[0], rhor = wr[0];
    const T ul = wl[1] / rhol, ur = wr[1] / rhor;
    const T hl = (wl[2] + pl) / rhol, hr = (wr[2] + pr) / rhor;

    const T sl = sqrt(rhol), sr = sqrt(rhor);
    const T inv = 1.0 / (sl + sr);
    const T ut = (sl * ul + sr * ur) * inv;
    const T ht = (sl * hl + sr * hr) * inv;
    const T rhot = sl * sr;
    const T ct2 = (gamma - 1.0) * (ht - 0.5 * ut * ut);
    if (value(ct2) <= 0.0) throw Error("euler velocity: nonphysical Roe average");
    const T ct = sqrt(ct2);

    const T drho = rhor - rhol;
    const T du = ur - ul;
    const T dp = pr - pl;

    const T alpha2 = drho - dp / ct2;
    const T alpha1 = (dp - rhot * ct * du) / (2.0 * ct2);
    const T alpha3 = (dp + rhot * ct * du) / (2.0 * ct2);

    const T delta = 0.05 * (abs(ut) + ct);
    const T l1 = entropy_fixed_abs(ut - ct, delta);
    const T l2 = entropy_fixed_abs(ut, delta);
    const T l3 = entropy_fixed_abs(ut + ct, delta);

    // wave contributions: r1 = (1, ut-ct, ht-ut*ct), r2 = (1, ut, ut^2/2),
    // r3 = (1, ut+ct, ht+ut*ct)
    const T w1 = alpha1 * l1, w2 = alpha2 * l2, w3 = alpha3 * l3;
    out[0] = 0.5 * (fl[0] + fr[0]) - 0.5 * (w1 + w2 + w3);
    out[1] = 0.5 * (fl[1] + fr[1]) -
             0.5 * (w1 * (ut - ct) + w2 * ut + w3 * (ut + ct));
    out[2] = 0.5 * (fl[2] + fr[2]) -
             0.5 * (w1 * (ht - ut * ct) + w2 * (0.5 * ut * ut) + w3 * (ht + ut * ct));
}

template <typename T>
void outflow_ghost(const T* w_last, double p_exit, double gamma, T* ghost) {
    // zeroth-order extrapolation of density and velocity, prescribed pressure
    const T rho = w_last[0];
    const T u = w_last[1] / rho;
    ghost[0] = rho;
    ghost[1] = w_last[1];
    ghost[2] = p_exit / (gamma - 1.0) + 0.5 * rho * u * u;
}

}  // namespace

double euler_nozzle_area(double x) {
    if (x < 0.0 || x > 1.0) throw Error("euler_nozzle_area: x out of range [0,1]");
    if (x < 0.25) return cubic(x, -0.288, 0.4080, -0.1920, 0.2);
    if (x < 0.5) return cubic(x - 0.25, -0.288, 0.1920, -0.0420, 0.1730);
    if (x < 0.75) return cubic(x - 0.5, 0.288, -0.0240, 0.0, 0.17);
    return cubic(x - 0.75, 0.288, 0.1920, 0.0420, 0.1730);
}

double euler_nozzle_area_derivative(double x) {
    if (x < 0.0 || x > 1.0) throw Error("euler_nozzle_area: x out of range [0,1]");
    if (x < 0.25) return cubic_dx(x, -0.288, 0.4080, -0.1920);
    if (x < 0.5) return cubic_dx(x - 0.25, -0.288, 0.1920, -0.0420);
    if (x < 0.75) return cubic_dx(x - 0.5, 0.288, -0.0240, 0.0);
    return cubic_dx(x - 0.75, 0.288, 0.1920, 0.0420);
}

Vector euler_initial_state(const ParameterPoint& mu, int n_cells, const EulerGas& gas) {
    if (n_cells < 10) throw Error("euler_initial_state requires n_cells >= 10");
    const double p_exit_factor = mu[0];
    const double mid_mach = mu[1];
    const double dx = 1.0 / n_cells;
    const PrimitiveState pre = isentropic_state(0.85, mid_mach, gas);
    const PrimitiveState post = post_shock_state(pre, gas.gamma);
    Vector w(3 * n_cells);
    for (int i = 0; i < n_cells; ++i) {
        const double x = (i + 0.5) * dx;
        PrimitiveState s = (x > 0.85) ? post : isentropic_state(x, mid_mach, gas);
        if (i == n_cells - 1) s.p *= p_exit_factor;
        w[3 * i + 0] = s.rho;
        w[3 * i + 1] = s.rho * s.u;
        w[3 * i + 2] = total_energy(s, gas.gamma);
    }
    return w;
}

void euler_roe_flux(const double* wl, const double* wr, const EulerGas& gas, double* flux) {
    roe_flux_t(wl, wr, gas, flux);
}

struct EulerModel::BoundaryContext {
    double inflow[3];
    double p_exit;
};

EulerModel::BoundaryContext EulerModel::boundary_context(const ParameterPoint& mu) const {
    const PrimitiveState in = isentropic_state(cell_center(0), mu[1], gas_);
    const PrimitiveState pre = isentropic_state(0.85, mu[1], gas_);
    const PrimitiveState post = post_shock_state(pre, gas_.gamma);
    BoundaryContext ctx{};
    ctx.inflow[0] = in.rho;
    ctx.inflow[1] = in.rho * in.u;
    ctx.inflow[2] = total_energy(in, gas_.gamma);
    ctx.p_exit = mu[0] * post.p;
    return ctx;
}

EulerModel::EulerModel(int n_cells, EulerGas gas)
    : n_cells_(n_cells), dx_(1.0 / n_cells), gas_(gas) {
    if (n_cells < 10) throw Error("euler_model requires n_cells >= 10");
    configure(3 * n_cells, ParameterBox{{1.7, 1.7}, {1.73, 1.72}});
    set_identity_mass();
    face_area_.resize(static_cast<std::size_t>(n_cells_) + 1);
    center_area_.resize(static_cast<std::size_t>(n_cells_));
    center_area_dx_.resize(static_cast<std::size_t>(n_cells_));
    for (int j = 0; j <= n_cells_; ++j) face_area_[static_cast<std::size_t>(j)] = euler_nozzle_area(j * dx_);
    for (int i = 0; i < n_cells_; ++i) {
        center_area_[static_cast<std::size_t>(i)] = euler_nozzle_area(cell_center(i));
        center_area_dx_[static_cast<std::size_t>(i)] = euler_nozzle_area_derivative(cell_center(i));
    }
}

Vector EulerModel::initial_state(const ParameterPoint& mu) const {
    return euler_initial_state(mu, n_cells_, gas_);
}

void EulerModel::velocity_rows(const Vector& u, double /*t*/, const ParameterPoint& mu,
                               std::span<const int> rows, Eigen::Ref<Vector> out) const {
    counters().add_velocity_call();
    counters().add_velocity_rows(static_cast<std::int64_t>(rows.size()));
    const BoundaryContext ctx = boundary_context(mu);
    int last_cell = -1;
    double cell_rate[3] = {0.0, 0.0, 0.0};
    for (std::size_t k = 0; k < rows.size(); ++k) {
        const int row = rows[k];
        const int cell = row / 3;
        if (cell != last_cell) {
            double fleft[3], fright[3];
            const double* wc = u.data() + 3 * cell;
            if (cell == 0) {
                roe_flux_t(ctx.inflow, wc, gas_, fleft);
            } else {
                roe_flux_t(u.data() + 3 * (cell - 1), wc, gas_, fleft);
            }
            if (cell == n_cells_ - 1) {
                double ghost[3];
                outflow_ghost(wc, ctx.p_exit, gas_.gamma, ghost);
                roe_flux_t(wc, ghost, gas_, fright);
            } else {
                roe_flux_t(wc, u.data() + 3 * (cell + 1), gas_, fright);
            }
            const double al = face_area_[static_cast<std::size_t>(cell)];
            const double ar = face_area_[static_cast<std::size_t>(cell) + 1];
            const double ac = center_area_[static_cast<std::size_t>(cell)];
            const double rho = wc[0];
            const double uu = wc[1] / rho;
            const double p = (gas_.gamma - 1.0) * (wc[2] - 0.5 * rho * uu * uu);
            for (int c = 0; c < 3; ++c) {
                cell_rate[c] = -(ar * fright[c] - al * fleft[c]) / (ac * dx_);
            }
            cell_rate[1] += (p / ac) * center_area_dx_[static_cast<std::size_t>(cell)];
            last_cell = cell;
        }
        out[static_cast<Eigen::Index>(k)] = cell_rate[row % 3];
    }
}

JacobianRows EulerModel::jacobian_rows(const Vector& u, double /*t*/, const ParameterPoint& mu,
                                       std::span<const int> rows) const {
    counters().add_jacobian_rows(static_cast<std::int64_t>(rows.size()));
    const BoundaryContext ctx = boundary_context(mu);
    JacobianRows jr;
    jr.offsets.push_back(0);

    int last_cell = -1;
    // d(cell rate)/d(w_{cell-1}, w_cell, w_{cell+1}) for the cached cell
    Eigen::Matrix<double, 3, 9> cell_jac;
    for (int row : rows) {
        const int cell = row / 3;
        if (cell != last_cell) {
            cell_jac.setZero();
            const double* wc = u.data() + 3 * cell;
            const double al = face_area_[static_cast<std::size_t>(cell)];
            const double ar = face_area_[static_cast<std::size_t>(cell) + 1];
            const double ac = center_area_[static_cast<std::size_t>(cell)];
            const double scale = 1.0 / (ac * dx_);

            if (cell == 0) {
                // inflow face: flux depends on w_0 only
                Dual<3> wl[3], wr[3], flux[3];
                for (int c = 0; c < 3; ++c) {
                    wl[c] = Dual<3>(ctx.inflow[c]);
                    wr[c] = Dual<3>::seed(wc[c], c);
                }
                roe_flux_t(wl, wr, gas_, flux);
                for (int c = 0; c < 3; ++c) {
                    for (int d = 0; d < 3; ++d) {
                        cell_jac(c, 3 + d) += al * scale * flux[c].g[d];
                    }
                }
            } else {
                Dual<6> wl[3], wr[3], flux[3];
                for (int c = 0; c < 3; ++c) {
                    wl[c] = Dual<6>::seed(u[3 * (cell - 1) + c], c);
                    wr[c] = Dual<6>::seed(wc[c], 3 + c);
                }
                roe_flux_t(wl, wr, gas_, flux);
                for (int c = 0; c < 3; ++c) {
                    for (int d = 0; d < 6; ++d) {
                        cell_jac(c, d) += al * scale * flux[c].g[d];
                    }
                }
            }

            if (cell == n_cells_ - 1) {
                Dual<3> wl[3], ghost[3], flux[3];
                for (int c = 0; c < 3; ++c) wl[c] = Dual<3>::seed(wc[c], c);
                outflow_ghost(wl, ctx.p_exit, gas_.gamma, ghost);
                roe_flux_t(wl, ghost, gas_, flux);
                for (int c = 0; c < 3; ++c) {
                    for (int d = 0; d < 3; ++d) {
                        cell_jac(c, 3 + d) -= ar * scale * flux[c].g[d];
                    }
                }
            } else {
                Dual<6> wl[3], wr[3], flux[3];
                for (int c = 0; c < 3; ++c) {
                    wl[c] = Dual<6>::seed(wc[c], c);
                    wr[c] = Dual<6>::seed(u[3 * (cell + 1) + c], 3 + c);
                }
                roe_flux_t(wl, wr, gas_, flux);
                for (int c = 0; c < 3; ++c) {
                    for (int d = 0; d < 3; ++d) {
                        cell_jac(c, 3 + d) -= ar * scale * flux[c].g[d];
                        cell_jac(c, 6 + d) -= ar * scale * flux[c].g[3 + d];
                    }
                }
            }

            // source term: d/dw_cell of p/A * dA/dx in the momentum row
            const double rho = wc[0];
            const double uu = wc[1] / rho;
            const double src = center_area_dx_[static_cast<std::size_t>(cell)] / ac;
            const double gm1 = gas_.gamma - 1.0;
            cell_jac(1, 3 + 0) += src * gm1 * 0.5 * uu * uu;
            cell_jac(1, 3 + 1) += src * gm1 * (-uu);
            cell_jac(1, 3 + 2) += src * gm1;
            last_cell = cell;
        }

        const int comp = row % 3;
        for (int nb = -1; nb <= 1; ++nb) {
            const int other = cell + nb;
            if (other < 0 || other >= n_cells_) continue;
            for (int d = 0; d < 3; ++d) {
                const double v = cell_jac(comp, 3 * (nb + 1) + d);
                if (v != 0.0) {
                    jr.cols.push_back(3 * other + d);
                    jr.vals.push_back(v);
                }
            }
        }
        jr.offsets.push_back(static_cast<int>(jr.cols.size()));
    }
    return jr;
}

void EulerModel::stencil(int row, std::vector<int>& out) const {
    out.clear();
    const int cell = row / 3;
    for (int nb = -1; nb <= 1; ++nb) {
        const int other = cell + nb;
        if (other < 0 || other >= n_cells_) continue;
        for (int d = 0; d < 3; ++d) out.push_back(3 * other + d);
    }
}

std::shared_ptr<SemiDiscreteModel> euler_model(int n_cells, EulerGas gas) {
    return std::make_shared<EulerModel>(n_cells, gas);
}

}  // namespace romkit
