// Copyright romkit developers. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#ifndef ROMKIT_DETAIL_DUAL_HPP
#define ROMKIT_DETAIL_DUAL_HPP

#include <cmath>

#include <Eigen/Dense>

namespace romkit::detail {

/// Fixed-width forward-mode scalar: value plus gradient with respect to N
/// seed variables. Used to differentiate numerical fluxes exactly through
/// their branches (branch selection follows the value part).
template <int N>
struct Dual {
    double v = 0.0;
    Eigen::Matrix<double, N, 1> g = Eigen::Matrix<double, N, 1>::Zero();

    Dual() = default;
    Dual(double value) : v(value) {}  // NOLINT: implicit from constants

    static Dual seed(double value, int k) {
        Dual d(value);
        d.g[k] = 1.0;
        return d;
    }
};

template <int N>
inline Dual<N> operator+(const Dual<N>& a, const Dual<N>& b) {
    Dual<N> r;
    r.v = a.v + b.v;
    r.g = a.g + b.g;
    return r;
}
template <int N>
inline Dual<N> operator-(const Dual<N>& a, const Dual<N>& b) {
    Dual<N> r;
    r.v = a.v - b.v;
    r.g = a.g - b.g;
    return r;
}
template <int N>
inline Dual<N> operator-(const Dual<N>& a) {
    Dual<N> r;
    r.v = -a.v;
    r.g = -a.g;
    return r;
}
template <int N>
inline Dual<N> operator*(const Dual<N>& a, const Dual<N>& b) {
    Dual<N> r;
    r.v = a.v * b.v;
    r.g = a.v * b.g + b.v * a.g;
    return r;
}
template <int N>
inline Dual<N> operator/(const Dual<N>& a, const Dual<N>& b) {
    Dual<N> r;
    r.v = a.v / b.v;
    r.g = (a.g - r.v * b.g) / b.v;
    return r;
}

template <int N>
inline Dual<N> operator+(double a, const Dual<N>& b) {
    return Dual<N>(a) + b;
}
template <int N>
inline Dual<N> operator+(const Dual<N>& a, double b) {
    return a + Dual<N>(b);
}
template <int N>
inline Dual<N> operator-(double a, const Dual<N>& b) {
    return Dual<N>(a) - b;
}
template <int N>
inline Dual<N> operator-(const Dual<N>& a, double b) {
    return a - Dual<N>(b);
}
template <int N>
inline Dual<N> operator*(double a, const Dual<N>& b) {
    return Dual<N>(a) * b;
}
template <int N>
inline Dual<N> operator*(const Dual<N>& a, double b) {
    return a * Dual<N>(b);
}
template <int N>
inline Dual<N> operator/(double a, const Dual<N>& b) {
    return Dual<N>(a) / b;
}
template <int N>
inline Dual<N> operator/(const Dual<N>& a, double b) {
    return a / Dual<N>(b);
}

template <int N>
inline Dual<N> sqrt(const Dual<N>& a) {
    Dual<N> r;
    r.v = std::sqrt(a.v);
    r.g = a.g / (2.0 * r.v);
    return r;
}
template <int N>
inline Dual<N> abs(const Dual<N>& a) {
    return a.v >= 0.0 ? a : -a;
}

inline double value(double x) { return x; }
template <int N>
inline double value(const Dual<N>& x) {
    return x.v;
}

using std::abs;
using std::sqrt;

}  // namespace romkit::detail

#endif
