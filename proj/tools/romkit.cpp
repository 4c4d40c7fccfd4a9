// Copyright romkit developers. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

// Command-line harness: full-order runs, training, single ROM runs, the
// benchmark sweeps, and quick invariant verification.

#include <CLI11.hpp>
#include <filesystem>
#include <iostream>
#include <random>

#include "romkit/bench.hpp"
#include "romkit/io.hpp"
#include "romkit/models/burgers.hpp"

namespace {

using namespace romkit;

ExperimentConfig resolve_config(const std::string& preset_name, const std::string& config_path) {
    if (!config_path.empty()) return load_config_file(config_path);
    if (!preset_name.empty()) return preset(preset_name);
    throw Error("either --preset or --config is required");
}

ParameterPoint parse_param(const std::string& text) {
    ParameterPoint p;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) p.values.push_back(std::stod(item));
    }
    return p;
}

int cmd_fom(const ExperimentConfig& config, const ParameterPoint& mu, SchemeId scheme,
            const std::filesystem::path& out) {
    const auto model = make_model(config);
    const Trajectory traj = integrate(*model, scheme, config.grid, mu, {});
    std::filesystem::create_directories(out);
    save_matrix(out / "trajectory.bin", traj.states, ContainerKind::trajectory);
    write_matrix_csv(out / "trajectory.csv", traj.states);
    std::cout << "wrote " << (out / "trajectory.bin").string() << " ("
              << traj.states.rows() << " x " << traj.states.cols() << ")\n";
    return 0;
}

int cmd_train(const ExperimentConfig& config, SchemeId scheme,
              const std::filesystem::path& out) {
    const auto model = make_model(config);
    const SnapshotSet snaps =
        collect_solution_snapshots(*model, scheme, config.grid, config.training,
                                   config.threads > 0 ? config.threads : 1);
    const SnapshotSet centered_snaps = centered(snaps);
    const ThinSvd svd = pod_factorization(centered_snaps.matrix);
    const Basis phi = basis_from_factorization(svd, config.n_s, centered_snaps.n_rows(),
                                               centered_snaps.n_cols());
    std::filesystem::create_directories(out);
    save_matrix(out / "solution_snapshots.bin", snaps.matrix,
                ContainerKind::solution_snapshots);
    save_matrix(out / "basis.bin", phi.columns, ContainerKind::basis);
    write_matrix_csv(out / "singular_values.csv", Matrix(phi.singular_values));
    std::cout << "snapshots: " << snaps.n_rows() << " x " << snaps.n_cols()
              << ", basis width " << phi.n_cols() << "\n";
    return 0;
}

int cmd_rom(ExperimentConfig config, const std::string& method, int n_basis, int n_z_flag,
            SchemeId scheme, const std::filesystem::path& out) {
    config.methods = {method};
    config.basis_sweep = {n_basis};
    config.schemes = {scheme};
    if (n_z_flag > 0) {
        config.n_z = n_z_flag;
        config.st_n_z = n_z_flag;
    }
    const ExperimentReport report = run_experiment(config);
    emit_report(report, out);
    for (const auto& row : report.rows) {
        if (row.failed) {
            std::cerr << "row failed: " << row.error << "\n";
            return 1;
        }
        std::cout << row.method << " " << row.scheme << " n_basis=" << row.n_basis
                  << " relative_error=" << format_double(row.relative_error)
                  << " offline_s=" << format_double(row.offline_seconds)
                  << " online_s=" << format_double(row.online_seconds) << "\n";
    }
    return 0;
}

int cmd_bench(const ExperimentConfig& config, const std::filesystem::path& out) {
    const ExperimentReport report = run_experiment(config);
    emit_report(report, out);
    int failures = 0;
    for (const auto& row : report.rows) {
        if (row.failed) {
            ++failures;
            std::cerr << "row failed: " << row.method << " " << row.scheme
                      << " n_basis=" << row.n_basis << ": " << row.error << "\n";
        }
    }
    std::cout << "wrote " << (out / "errors.csv").string() << " (" << report.rows.size()
              << " rows, " << failures << " failed)\n";
    return failures == 0 ? 0 : 1;
}

bool check(bool ok, const std::string& label, int& failures) {
    std::cout << (ok ? "PASS " : "FAIL ") << label << "\n";
    if (!ok) ++failures;
    return ok;
}

int cmd_verify() {
    int failures = 0;

    // subspace inclusion on a small Burgers FOM, all six schemes
    {
        const auto model = burgers_model(24);
        const TimeGrid grid{5e-3, 16};
        const ParameterPoint mu{1.3, 0.02};
        bool ok = true;
        for (SchemeId scheme : all_schemes()) {
            const auto trajs = run_training_foms(*model, scheme, grid, {mu});
            const SnapshotSet sol = solution_snapshots(trajs);
            const SnapshotSet f = nonlinear_term_snapshots(*model, trajs, {mu});
            Eigen::HouseholderQR<Matrix> qr(sol.matrix);
            const Matrix q = qr.householderQ() * Matrix::Identity(sol.n_rows(),
                                                                  std::min(sol.n_rows(),
                                                                           sol.n_cols()));
            for (int c = 0; c < f.n_cols(); ++c) {
                const Vector v = f.matrix.col(c);
                const double rel = (v - q * (q.transpose() * v)).norm() / v.norm();
                if (rel >= 1e-8) ok = false;
            }
        }
        check(ok, "subspace inclusion (six schemes, small Burgers FOM)", failures);
    }

    // projector idempotency / exactness / bound on random cases
    {
        std::mt19937_64 rng(7);
        std::normal_distribution<double> gauss;
        bool ok = true;
        for (int trial = 0; trial < 40; ++trial) {
            const int rows = 12 + static_cast<int>(rng() % 20);
            const int cols = 2 + static_cast<int>(rng() % 4);
            const int n_z = cols + static_cast<int>(rng() % (rows - cols));
            Matrix a(rows, cols);
            for (int i = 0; i < rows; ++i) {
                for (int j = 0; j < cols; ++j) a(i, j) = gauss(rng);
            }
            const Basis basis = pod(a, cols);
            const auto plan = gnat_sampling(basis.columns, n_z);
            const auto proj = build_projector(basis, plan);
            Vector v(rows);
            for (int i = 0; i < rows; ++i) v[i] = gauss(rng);
            const Vector pv = proj.apply(v);
            if ((proj.apply(pv) - pv).norm() > 1e-10 * (1.0 + pv.norm())) ok = false;
            const Vector in_range = basis.columns * Vector::Random(cols);
            if ((proj.apply(in_range) - in_range).norm() > 1e-10) ok = false;
            const auto bound = projection_error_bound(proj, v);
            if (bound.lhs > bound.rhs + 1e-10) ok = false;
        }
        check(ok, "oblique projector idempotency, exactness, error bound", failures);
    }

    // full basis + full sampling degeneracy on a small Burgers BE run
    {
        const auto model = burgers_model(16);
        const TimeGrid grid{1e-2, 8};
        const ParameterPoint mu{1.25, 0.021};
        const Trajectory fom = integrate(*model, SchemeId::BackwardEuler, grid, mu, {});
        Basis full;
        full.columns = Matrix::Identity(16, 16);
        full.singular_values = Vector::Ones(16);
        SamplingPlan plan;
        plan.method = SamplingMethod::gnat_greedy;
        for (int i = 0; i < 16; ++i) plan.indices.push_back(i);
        SpatialRomProblem p;
        p.model = model.get();
        p.method = RomMethod::gnat;
        p.scheme = SchemeId::BackwardEuler;
        p.grid = grid;
        p.phi = full;
        p.projector = build_projector(full, plan);
        const RomTrajectory rom = run_spatial_rom(p, mu);
        const Matrix lifted = lift(full, rom.generalized, model->initial_state(mu));
        const double err = (lifted - fom.states).norm() / fom.states.norm();
        check(err < 1e-7, "full basis + full sampling reproduces the FOM", failures);
    }

    std::cout << (failures == 0 ? "verify: all suites passed\n"
                                : "verify: " + std::to_string(failures) + " suite(s) failed\n");
    return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"romkit: projection-based reduced order models with SNS hyper-reduction"};
    app.require_subcommand(1);

    std::string preset_name, config_path, out_dir = "out", method = "gnat_sns";
    std::string scheme_name_flag = "backward_euler", param_text;
    int n_basis = 0, n_z_flag = 0, threads = 0;
    std::uint64_t seed = 0;
    bool seed_set = false, threads_set = false;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--preset", preset_name, "preset name");
        cmd->add_option("--config", config_path, "config file path");
        cmd->add_option("--out", out_dir, "output directory");
        cmd->add_option("--seed", seed, "random seed")->each([&](const std::string&) {
            seed_set = true;
        });
        cmd->add_option("--threads", threads, "worker threads (0 = hardware)")
            ->each([&](const std::string&) { threads_set = true; });
    };

    auto* fom_cmd = app.add_subcommand("fom", "run and serialize a full-order trajectory");
    add_common(fom_cmd);
    fom_cmd->add_option("--scheme", scheme_name_flag, "time integrator");
    fom_cmd->add_option("--param", param_text, "parameter values, comma separated");

    auto* train_cmd = app.add_subcommand("train", "collect snapshots and build bases");
    add_common(train_cmd);
    train_cmd->add_option("--scheme", scheme_name_flag, "time integrator");

    auto* rom_cmd = app.add_subcommand("rom", "run a single ROM method");
    add_common(rom_cmd);
    rom_cmd->add_option("--method", method, "rom method name");
    rom_cmd->add_option("--n-basis", n_basis, "nonlinear/residual basis width");
    rom_cmd->add_option("--n-z", n_z_flag, "sample count");
    rom_cmd->add_option("--scheme", scheme_name_flag, "time integrator");

    auto* bench_cmd = app.add_subcommand("bench", "run a full preset sweep");
    add_common(bench_cmd);

    auto* verify_cmd = app.add_subcommand("verify", "run the invariant suites");
    (void)verify_cmd;

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand("verify")) return cmd_verify();

        ExperimentConfig config = resolve_config(preset_name, config_path);
        if (seed_set) config.seed = seed;
        if (threads_set) config.threads = threads;

        if (app.got_subcommand("fom")) {
            const ParameterPoint mu =
                param_text.empty() ? config.target : parse_param(param_text);
            return cmd_fom(config, mu, scheme_from_name(scheme_name_flag), out_dir);
        }
        if (app.got_subcommand("train")) {
            return cmd_train(config, scheme_from_name(scheme_name_flag), out_dir);
        }
        if (app.got_subcommand("rom")) {
            if (n_basis <= 0) n_basis = config.n_s;
            return cmd_rom(config, method, n_basis, n_z_flag,
                           scheme_from_name(scheme_name_flag), out_dir);
        }
        if (app.got_subcommand("bench")) {
            return cmd_bench(config, out_dir);
        }
    } catch (const romkit::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
