// Copyright romkit developers. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#ifndef ROMKIT_TYPES_HPP
#define ROMKIT_TYPES_HPP

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <atomic>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace romkit {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using SpMat = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// A point in the model's parameter space.
struct ParameterPoint {
    std::vector<double> values;

    ParameterPoint() = default;
    explicit ParameterPoint(std::vector<double> v) : values(std::move(v)) {}
    ParameterPoint(std::initializer_list<double> v) : values(v) {}

    int size() const { return static_cast<int>(values.size()); }
    double operator[](int i) const { return values[static_cast<std::size_t>(i)]; }
};

/// Axis-aligned box in parameter space. Empty box = no parameters.
struct ParameterBox {
    std::vector<double> lo;
    std::vector<double> hi;

    int size() const { return static_cast<int>(lo.size()); }

    bool contains(const ParameterPoint& p) const {
        if (p.size() != size()) return false;
        for (int i = 0; i < size(); ++i) {
            const auto k = static_cast<std::size_t>(i);
            if (p[i] < lo[k] || p[i] > hi[k]) return false;
        }
        return true;
    }
};

/// Instrumentation counters shared by all evaluation paths of a model.
/// Evaluation is reentrant, so the counters are atomic.
class EvalCounters {
public:
    void add_velocity_rows(std::int64_t n) { velocity_rows_ += n; }
    void add_jacobian_rows(std::int64_t n) { jacobian_rows_ += n; }
    void add_velocity_call() { ++velocity_calls_; }

    std::int64_t velocity_rows() const { return velocity_rows_.load(); }
    std::int64_t jacobian_rows() const { return jacobian_rows_.load(); }
    std::int64_t velocity_calls() const { return velocity_calls_.load(); }

    void reset() {
        velocity_rows_ = 0;
        jacobian_rows_ = 0;
        velocity_calls_ = 0;
    }

private:
    std::atomic<std::int64_t> velocity_rows_{0};
    std::atomic<std::int64_t> jacobian_rows_{0};
    std::atomic<std::int64_t> velocity_calls_{0};
};

}  // namespace romkit

#endif
