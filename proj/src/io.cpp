// Copyright romkit developers. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include "romkit/io.hpp"

#include <array>
#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>

namespace romkit {

namespace {

constexpr std::uint64_t kMagic = 0x524F4D4B49544D31ULL;  // "ROMKITM1"
constexpr std::uint64_t kVersion = 1;

static_assert(std::endian::native == std::endian::little,
              "container writer assumes a little-endian host");

void write_u64(std::ofstream& out, std::uint64_t v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(v));
}

std::uint64_t read_u64(std::ifstream& in) {
    std::uint64_t v = 0;
    in.read(reinterpret_cast<char*>(&v), sizeof(v));
    return v;
}

}  // namespace

void save_matrix(const std::filesystem::path& path, const Matrix& m, ContainerKind kind) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open for writing: " + path.string());
    write_u64(out, kMagic);
    write_u64(out, kVersion);
    write_u64(out, static_cast<std::uint64_t>(kind));
    write_u64(out, static_cast<std::uint64_t>(m.rows()));
    write_u64(out, static_cast<std::uint64_t>(m.cols()));
    out.write(reinterpret_cast<const char*>(m.data()),
              static_cast<std::streamsize>(sizeof(double) * m.size()));
    if (!out) throw Error("write failed: " + path.string());
}

Matrix load_matrix(const std::filesystem::path& path, ContainerKind* kind) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open for reading: " + path.string());
    if (read_u64(in) != kMagic) throw Error("bad container magic in " + path.string());
    if (read_u64(in) != kVersion) throw Error("unsupported container version in " + path.string());
    const auto k = read_u64(in);
    const auto rows = static_cast<Eigen::Index>(read_u64(in));
    const auto cols = static_cast<Eigen::Index>(read_u64(in));
    Matrix m(rows, cols);
    in.read(reinterpret_cast<char*>(m.data()),
            static_cast<std::streamsize>(sizeof(double) * m.size()));
    if (!in) throw Error("truncated container: " + path.string());
    if (kind) *kind = static_cast<ContainerKind>(k);
    return m;
}

std::string format_double(double v) {
    std::array<char, 48> buf{};
    std::snprintf(buf.data(), buf.size(), "%.12e", v);
    return buf.data();
}

void write_matrix_csv(const std::filesystem::path& path, const Matrix& m) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open for writing: " + path.string());
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (j) out << ',';
            out << format_double(m(i, j));
        }
        out << '\n';
    }
}

void write_indices_csv(const std::filesystem::path& path, const std::vector<int>& indices) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open for writing: " + path.string());
    for (int idx : indices) out << idx << '\n';
}

}  // namespace romkit
