// Copyright romkit developers. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#ifndef ROMKIT_IO_HPP
#define ROMKIT_IO_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "romkit/types.hpp"

namespace romkit {

/// Payload tags of the binary matrix container.
enum class ContainerKind : std::uint64_t {
    solution_snapshots = 0,
    nonlinear_snapshots = 1,
    residual_snapshots = 2,
    space_time_snapshots = 3,
    basis = 4,
    trajectory = 5,
    generalized_trajectory = 6,
};

/// Binary container: header of five little-endian 64-bit integers
/// (magic, version, kind, rows, cols) followed by the column-major
/// float64 payload.
void save_matrix(const std::filesystem::path& path, const Matrix& m, ContainerKind kind);
Matrix load_matrix(const std::filesystem::path& path, ContainerKind* kind = nullptr);

/// Plain CSV (comma separated, '.' decimal, LF) for inspection.
void write_matrix_csv(const std::filesystem::path& path, const Matrix& m);

/// One index per line.
void write_indices_csv(const std::filesystem::path& path, const std::vector<int>& indices);

std::string format_double(double v);

}  // namespace romkit

#endif
