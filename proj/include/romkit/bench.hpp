// Copyright romkit developers. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#ifndef ROMKIT_BENCH_HPP
#define ROMKIT_BENCH_HPP

#include <cstdint>
#include <filesystem>
#include <limits>
#include <memory>

#include "romkit/spacetime.hpp"

namespace romkit {

struct ExperimentConfig {
    std::string name = "custom";
    std::string problem;  // diffusion | burgers | euler
    int mesh = 0;         // cells (burgers/euler) or elements per side (diffusion)
    std::vector<SchemeId> schemes;
    TimeGrid grid;
    std::vector<ParameterPoint> training;
    ParameterPoint target;
    int n_s = 0;
    std::vector<int> basis_sweep;  // n_f or n_r values
    int n_z = 0;                   // 0 means n_z = n_basis (DEIM interpolation)
    std::vector<std::string> methods;
    bool space_time = false;
    int st_spatial = 0;
    int st_temporal = 0;
    int st_n_st = 0;
    int st_n_z = 0;
    StResidualStrategy st_strategy = StResidualStrategy::projection_of_fom;
    std::uint64_t seed = 0;
    int threads = 0;  // 0 = hardware concurrency
};

struct ReportRow {
    std::string method;
    std::string scheme;
    int n_s = 0;
    int n_basis = 0;
    int n_z = 0;
    double relative_error = std::numeric_limits<double>::quiet_NaN();
    double offline_seconds = 0.0;
    double fom_seconds = 0.0;
    double residual_seconds = 0.0;
    double compression_seconds = 0.0;
    double sampling_seconds = 0.0;
    int compression_count = 0;
    int residual_runs = 0;
    double online_seconds = 0.0;
    long newton_total = 0;
    bool failed = false;
    std::string error;
};

struct ExperimentReport {
    ExperimentConfig config;
    std::vector<ReportRow> rows;
    std::vector<std::string> notes;

    bool any_failed() const {
        for (const auto& r : rows) {
            if (r.failed) return true;
        }
        return false;
    }
};

/// sqrt(sum_n |rom^n - fom^n|^2) / sqrt(sum_n |fom^n|^2) over n = 1..N_t.
double relative_error(const Matrix& rom_states, const Matrix& fom_states);

std::shared_ptr<SemiDiscreteModel> make_model(const ExperimentConfig& config);

/// Executes the full sweep: training FOMs, bases, sampling, online runs at
/// the target, per-row errors and offline/online timings. Row failures are
/// recorded and the sweep continues.
ExperimentReport run_experiment(const ExperimentConfig& config);

/// Writes errors.csv, offline.csv and manifest.txt into out_dir.
void emit_report(const ExperimentReport& report, const std::filesystem::path& out_dir);

const std::vector<std::string>& preset_names();
ExperimentConfig preset(const std::string& name);

/// Flat key = value configuration file (see README for the schema).
ExperimentConfig load_config_file(const std::filesystem::path& path);

}  // namespace romkit

#endif
