// Copyright romkit developers. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include "romkit/bench.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>
#include <thread>

#include "romkit/detail/parallel.hpp"
#include "romkit/io.hpp"
#include "romkit/models/burgers.hpp"
#include "romkit/models/diffusion.hpp"
#include "romkit/models/euler.hpp"

namespace romkit {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

/// Times fn(); short phases are repeated and the minimum is kept so that
/// millisecond-scale compression ratios are stable against timer noise.
template <typename Fn>
double timed(Fn&& fn, bool stabilize = false) {
    auto t0 = Clock::now();
    fn();
    double best = seconds_since(t0);
    if (stabilize && best < 0.25) {
        for (int rep = 0; rep < 2; ++rep) {
            t0 = Clock::now();
            fn();
            best = std::min(best, seconds_since(t0));
        }
    }
    return best;
}

int resolve_threads(const ExperimentConfig& config) {
    if (config.threads > 0) return config.threads;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

}  // namespace

double relative_error(const Matrix& rom_states, const Matrix& fom_states) {
    if (rom_states.rows() != fom_states.rows() || rom_states.cols() != fom_states.cols()) {
        throw Error("relative_error: trajectory shapes differ");
    }
    double num = 0.0, den = 0.0;
    for (Eigen::Index n = 1; n < fom_states.cols(); ++n) {
        num += (rom_states.col(n) - fom_states.col(n)).squaredNorm();
        den += fom_states.col(n).squaredNorm();
    }
    if (den == 0.0) throw Error("relative_error: reference trajectory is identically zero");
    return std::sqrt(num) / std::sqrt(den);
}

std::shared_ptr<SemiDiscreteModel> make_model(const ExperimentConfig& config) {
    if (config.problem == "burgers") return burgers_model(config.mesh);
    if (config.problem == "diffusion") return diffusion_model(config.mesh);
    if (config.problem == "euler") return euler_model(config.mesh);
    throw Error("unknown problem: " + config.problem);
}

namespace {

struct SharedOffline {
    double fom_seconds = 0.0;
    double svd_solution_seconds = 0.0;
};

void fill_offline(ReportRow& row, double fom_s, double residual_s, double compression_s,
                  double sampling_s, int compression_count, int residual_runs) {
    row.fom_seconds = fom_s;
    row.residual_seconds = residual_s;
    row.compression_seconds = compression_s;
    row.sampling_seconds = sampling_s;
    row.offline_seconds = fom_s + residual_s + compression_s + sampling_s;
    row.compression_count = compression_count;
    row.residual_runs = residual_runs;
}

void run_spatial_method(const ExperimentConfig& config, const SemiDiscreteModel& model,
                        SchemeId scheme, const std::string& method_name,
                        const std::vector<Trajectory>& training_trajectories,
                        const ThinSvd& solution_svd, int solution_rows, int solution_cols,
                        const Matrix& target_states, const SharedOffline& shared,
                        std::vector<ReportRow>& rows) {
    const RomMethod method = rom_method_from_name(method_name);
    const int threads = resolve_threads(config);
    const int n_train = static_cast<int>(config.training.size());
    const Basis phi = basis_from_factorization(solution_svd, config.n_s, solution_rows,
                                               solution_cols);

    // shared baseline phases: snapshot collection + second compression
    double residual_seconds = 0.0;
    double second_svd_seconds = 0.0;
    int residual_runs = 0;
    ThinSvd second_svd;
    int second_rows = 0, second_cols = 0;
    if (method == RomMethod::gnat) {
        SnapshotSet snaps;
        residual_seconds = timed([&] {
            snaps = collect_residual_snapshots(model, phi, scheme, config.grid, config.training,
                                               {}, threads);
        });
        residual_runs = n_train;
        second_rows = snaps.n_rows();
        second_cols = snaps.n_cols();
        second_svd_seconds =
            timed([&] { second_svd = pod_factorization(snaps.matrix); }, true);
    } else if (method == RomMethod::deim) {
        SnapshotSet snaps;
        residual_seconds = timed([&] {
            snaps = nonlinear_term_snapshots(model, training_trajectories, config.training);
        });
        second_rows = snaps.n_rows();
        second_cols = snaps.n_cols();
        second_svd_seconds =
            timed([&] { second_svd = pod_factorization(snaps.matrix); }, true);
    }

    std::vector<int> sweep = config.basis_sweep;
    if (method == RomMethod::galerkin || method == RomMethod::lspg) sweep = {config.n_s};

    const std::size_t first_row = rows.size();
    rows.resize(first_row + sweep.size());
    detail::parallel_for(static_cast<int>(sweep.size()), threads, [&](int i) {
        ReportRow& row = rows[first_row + static_cast<std::size_t>(i)];
        row.method = method_name;
        row.scheme = scheme_name(scheme);
        row.n_s = config.n_s;
        row.n_basis = sweep[static_cast<std::size_t>(i)];
        try {
            const int n_basis = row.n_basis;
            const int n_z = (config.n_z > 0 && method != RomMethod::deim &&
                             method != RomMethod::deim_sns)
                                ? config.n_z
                                : n_basis;
            row.n_z = (method == RomMethod::galerkin || method == RomMethod::lspg) ? 0 : n_z;

            SpatialRomProblem problem;
            problem.model = &model;
            problem.method = method;
            problem.scheme = scheme;
            problem.grid = config.grid;
            problem.phi = phi;

            double sampling_seconds = 0.0;
            double compression_seconds = shared.svd_solution_seconds;
            int compression_count = 1;

            switch (method) {
                case RomMethod::galerkin:
                case RomMethod::lspg:
                    compression_count = 1;
                    break;
                case RomMethod::deim:
                case RomMethod::gnat: {
                    const Basis basis = basis_from_factorization(second_svd, n_basis,
                                                                 second_rows, second_cols);
                    SamplingPlan plan;
                    sampling_seconds = timed([&] {
                        plan = (method == RomMethod::deim)
                                   ? deim_sampling(basis.columns)
                                   : gnat_sampling(basis.columns, n_z);
                    });
                    problem.projector = build_projector(basis, plan);
                    compression_seconds += second_svd_seconds;
                    compression_count = 2;
                    break;
                }
                case RomMethod::deim_sns:
                case RomMethod::gnat_sns: {
                    Basis source = (n_basis == config.n_s)
                                       ? phi
                                       : basis_from_factorization(solution_svd, n_basis,
                                                                  solution_rows, solution_cols);
                    Basis sns;
                    const double scale_seconds =
                        timed([&] { sns = sns_basis(source, model); });
                    compression_seconds += scale_seconds;
                    SamplingPlan plan;
                    sampling_seconds = timed([&] {
                        plan = (method == RomMethod::deim_sns)
                                   ? deim_sampling(sns.columns)
                                   : gnat_sampling(sns.columns, n_z);
                    });
                    problem.projector = build_projector(sns, plan);
                    if (method == RomMethod::deim_sns && n_basis > config.n_s) {
                        problem.phi_e = source;
                    }
                    compression_count = 1;
                    break;
                }
            }

            fill_offline(row, shared.fom_seconds, residual_seconds, compression_seconds,
                         sampling_seconds, compression_count,
                         method == RomMethod::gnat ? residual_runs : 0);

            RomTrajectory traj;
            row.online_seconds =
                timed([&] { traj = run_spatial_rom(problem, config.target); });
            row.newton_total = traj.total_newton();
            const Matrix lifted =
                lift(phi, traj.generalized, model.initial_state(config.target));
            row.relative_error = relative_error(lifted, target_states);
        } catch (const std::exception& e) {
            row.failed = true;
            row.error = e.what();
        }
    });
}

void run_spatial_scheme(const ExperimentConfig& config, const SemiDiscreteModel& model,
                        SchemeId scheme, ExperimentReport& report) {
    const int threads = resolve_threads(config);
    SharedOffline shared;

    std::vector<Trajectory> training;
    shared.fom_seconds = timed([&] {
        training = run_training_foms(model, scheme, config.grid, config.training, {}, threads);
    });

    SnapshotSet solution = solution_snapshots(training);
    const SnapshotSet centered_solution = centered(solution);
    ThinSvd solution_svd;
    shared.svd_solution_seconds =
        timed([&] { solution_svd = pod_factorization(centered_solution.matrix); }, true);

    const Trajectory target_traj = integrate(model, scheme, config.grid, config.target, {});

    for (const std::string& method : config.methods) {
        run_spatial_method(config, model, scheme, method, training, solution_svd,
                           centered_solution.n_rows(), centered_solution.n_cols(),
                           target_traj.states, shared, report.rows);
    }
}

void run_space_time_scheme(const ExperimentConfig& config, const SemiDiscreteModel& model,
                           ExperimentReport& report) {
    const int threads = resolve_threads(config);
    const SchemeId scheme = SchemeId::BackwardEuler;  // ST formulation is backward Euler
    SharedOffline shared;

    IntegrateOptions fom_opts;
    fom_opts.record_newton_iterates =
        config.st_strategy == StResidualStrategy::projection_of_fom;
    std::vector<Trajectory> training;
    shared.fom_seconds = timed([&] {
        training =
            run_training_foms(model, scheme, config.grid, config.training, fom_opts, threads);
    });

    int max_pairs = config.st_n_st;
    for (int n : config.basis_sweep) max_pairs = std::max(max_pairs, n);
    if (max_pairs > config.st_spatial * config.st_temporal) {
        throw Error("space-time sweep exceeds st_spatial * st_temporal pairs");
    }

    // solution tensor slices u^n - u^0, n = 1..N_t
    std::vector<Matrix> slices;
    for (const auto& traj : training) {
        Matrix s = traj.states.rightCols(config.grid.n_steps);
        s.colwise() -= Vector(traj.states.col(0));
        slices.push_back(std::move(s));
    }
    SpaceTimeBasis full_basis;
    shared.svd_solution_seconds = timed(
        [&] {
            full_basis =
                st_hosvd(slices, config.st_spatial, config.st_temporal, max_pairs);
        },
        true);
    const SpaceTimeBasis phi_st = full_basis.truncated(config.st_n_st);

    SpaceTimeProblem st_problem;
    st_problem.model = &model;
    st_problem.grid = config.grid;
    st_problem.phi = &phi_st;

    const Trajectory target_traj = integrate(model, scheme, config.grid, config.target, {});
    const Vector u0_target = target_traj.states.col(0);

    for (const std::string& method : config.methods) {
        const bool sns = method == "st_gnat_sns";
        if (!sns && method != "st_gnat") {
            throw Error("space-time experiments support methods st_gnat and st_gnat_sns");
        }

        double residual_seconds = 0.0;
        double second_svd_seconds = 0.0;
        int residual_runs = 0;
        ThinSvd residual_svd;
        int res_rows = 0, res_cols = 0;
        if (!sns) {
            SnapshotSet snaps;
            residual_seconds = timed([&] {
                snaps = (config.st_strategy == StResidualStrategy::projection_of_fom)
                            ? st_residual_snapshots_projection(st_problem, training,
                                                               config.training)
                            : st_residual_snapshots_lspg(st_problem, config.training, threads);
            });
            residual_runs = static_cast<int>(config.training.size());
            res_rows = snaps.n_rows();
            res_cols = snaps.n_cols();
            second_svd_seconds =
                timed([&] { residual_svd = pod_factorization(snaps.matrix); }, true);
        }

        const std::size_t first_row = report.rows.size();
        report.rows.resize(first_row + config.basis_sweep.size());
        detail::parallel_for(static_cast<int>(config.basis_sweep.size()), threads, [&](int i) {
            ReportRow& row = report.rows[first_row + static_cast<std::size_t>(i)];
            row.method = method;
            row.scheme = scheme_name(scheme);
            row.n_s = config.st_n_st;
            row.n_basis = config.basis_sweep[static_cast<std::size_t>(i)];
            row.n_z = config.st_n_z;
            try {
                const int n_r = row.n_basis;
                StResidualBasis phi_r;
                double compression_seconds = shared.svd_solution_seconds;
                int compression_count = 1;
                if (sns) {
                    const StSnsVariant variant =
                        model.has_identity_mass()
                            ? (n_r == config.st_n_st ? StSnsVariant::phi : StSnsVariant::phi_e)
                            : (n_r == config.st_n_st ? StSnsVariant::abe_phi
                                                     : StSnsVariant::abe_phi_e);
                    phi_r = st_sns_residual_basis(model, full_basis, n_r, variant);
                } else {
                    const Basis b =
                        basis_from_factorization(residual_svd, n_r, res_rows, res_cols);
                    phi_r = StResidualBasis::dense(b.columns, model.n_space(),
                                                   config.grid.n_steps);
                    compression_seconds += second_svd_seconds;
                    compression_count = 2;
                }

                SamplingPlan plan;
                const double sampling_seconds =
                    timed([&] { plan = st_gnat_sampling(phi_r, config.st_n_z); });
                fill_offline(row, shared.fom_seconds, sns ? 0.0 : residual_seconds,
                             compression_seconds, sampling_seconds, compression_count,
                             sns ? 0 : residual_runs);

                Vector x;
                StSolveStats stats;
                row.online_seconds = timed(
                    [&] { x = st_gnat_solve(st_problem, phi_r, plan, config.target, &stats); });
                row.newton_total = stats.gauss_newton_iterations;

                Matrix rom_states(model.n_space(), config.grid.n_steps + 1);
                rom_states.col(0) = u0_target;
                rom_states.rightCols(config.grid.n_steps) =
                    st_apply_all_blocks(phi_st, x).colwise() + u0_target;
                row.relative_error = relative_error(rom_states, target_traj.states);
            } catch (const std::exception& e) {
                row.failed = true;
                row.error = e.what();
            }
        });
    }
}

}  // namespace

ExperimentReport run_experiment(const ExperimentConfig& config) {
    ExperimentReport report;
    report.config = config;
    const auto model = make_model(config);
    if (!model->param_domain().contains(config.target) && model->n_params() > 0) {
        throw Error("run_experiment: target parameter outside the model domain");
    }
    if (config.space_time) {
        run_space_time_scheme(config, *model, report);
    } else {
        for (SchemeId scheme : config.schemes) {
            run_spatial_scheme(config, *model, scheme, report);
        }
    }
    return report;
}

void emit_report(const ExperimentReport& report, const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);

    {
        std::ofstream out(out_dir / "errors.csv");
        if (!out) throw Error("cannot write errors.csv");
        out << "method,scheme,n_s,n_basis,n_z,relative_error\n";
        for (const auto& r : report.rows) {
            out << r.method << ',' << r.scheme << ',' << r.n_s << ',' << r.n_basis << ','
                << r.n_z << ',' << format_double(r.relative_error) << '\n';
        }
    }
    {
        std::ofstream out(out_dir / "offline.csv");
        if (!out) throw Error("cannot write offline.csv");
        out << "method,n_basis,total_s,fom_s,residual_s,compression_s,sampling_s,"
               "compression_count\n";
        for (const auto& r : report.rows) {
            out << r.method << ',' << r.n_basis << ',' << format_double(r.offline_seconds)
                << ',' << format_double(r.fom_seconds) << ','
                << format_double(r.residual_seconds) << ','
                << format_double(r.compression_seconds) << ','
                << format_double(r.sampling_seconds) << ',' << r.compression_count << '\n';
        }
    }
    {
        const auto& c = report.config;
        std::ofstream out(out_dir / "manifest.txt");
        if (!out) throw Error("cannot write manifest.txt");
        out << "romkit 0.1.0\n";
        out << "eigen " << EIGEN_WORLD_VERSION << '.' << EIGEN_MAJOR_VERSION << '.'
            << EIGEN_MINOR_VERSION << '\n';
        out << "name = " << c.name << '\n';
        out << "problem = " << c.problem << '\n';
        out << "mesh = " << c.mesh << '\n';
        out << "schemes =";
        for (auto s : c.schemes) out << ' ' << scheme_name(s);
        out << '\n';
        out << "dt = " << format_double(c.grid.dt) << '\n';
        out << "n_steps = " << c.grid.n_steps << '\n';
        out << "training =";
        for (const auto& p : c.training) {
            out << ' ';
            for (int i = 0; i < p.size(); ++i) out << (i ? "," : "") << format_double(p[i]);
            if (p.size() == 0) out << "-";
        }
        out << '\n';
        out << "target = ";
        for (int i = 0; i < c.target.size(); ++i) {
            out << (i ? "," : "") << format_double(c.target[i]);
        }
        out << '\n';
        out << "n_s = " << c.n_s << '\n';
        out << "basis_sweep =";
        for (int n : c.basis_sweep) out << ' ' << n;
        out << '\n';
        out << "n_z = " << c.n_z << '\n';
        out << "methods =";
        for (const auto& m : c.methods) out << ' ' << m;
        out << '\n';
        out << "space_time = " << (c.space_time ? "true" : "false") << '\n';
        if (c.space_time) {
            out << "st_spatial = " << c.st_spatial << '\n';
            out << "st_temporal = " << c.st_temporal << '\n';
            out << "st_n_st = " << c.st_n_st << '\n';
            out << "st_n_z = " << c.st_n_z << '\n';
            out << "st_residual_snapshots = "
                << (c.st_strategy == StResidualStrategy::projection_of_fom
                        ? "projection_of_fom"
                        : "st_lspg_iterations")
                << '\n';
        }
        out << "seed = " << c.seed << '\n';
        out << "threads = " << c.threads << '\n';
        for (const auto& note : report.notes) out << "note: " << note << '\n';
        for (const auto& r : report.rows) {
            if (r.failed) {
                out << "failed: " << r.method << ' ' << r.scheme << " n_basis=" << r.n_basis
                    << ": " << r.error << '\n';
            }
        }
    }
}

const std::vector<std::string>& preset_names() {
    static const std::vector<std::string> names = {
        "diffusion", "burgers", "burgers-small", "burgers-st", "euler", "euler-st",
    };
    return names;
}

namespace {

std::vector<ParameterPoint> burgers_training() {
    std::vector<ParameterPoint> pts;
    for (double mu1 : {1.2, 1.3, 1.4, 1.5}) {
        for (double mu2 : {0.02, 0.025}) pts.push_back({mu1, mu2});
    }
    return pts;
}

std::vector<ParameterPoint> euler_training() {
    std::vector<ParameterPoint> pts;
    for (int i = 0; i <= 3; ++i) {
        for (double mm : {1.7, 1.72}) pts.push_back({1.7 + 0.01 * i, mm});
    }
    return pts;
}

std::vector<int> range_sweep(int lo, int hi, int step) {
    std::vector<int> v;
    for (int n = lo; n <= hi; n += step) v.push_back(n);
    return v;
}

}  // namespace

ExperimentConfig preset(const std::string& name) {
    ExperimentConfig c;
    c.name = name;
    if (name == "diffusion") {
        c.problem = "diffusion";
        c.mesh = 32;
        c.schemes = {SchemeId::ForwardEuler, SchemeId::BackwardEuler};
        c.grid = {1e-4, 100};
        c.training = {ParameterPoint{}};
        c.target = ParameterPoint{};
        c.n_s = 20;
        c.basis_sweep = range_sweep(20, 100, 5);
        c.n_z = 0;  // DEIM interpolation: n_z = n_f
        c.methods = {"deim", "deim_sns"};
        return c;
    }
    if (name == "burgers") {
        c.problem = "burgers";
        c.mesh = 1000;
        c.schemes = all_schemes();
        c.grid = {2.5e-4, 2000};
        c.training = burgers_training();
        c.target = {1.45, 0.0201};
        c.n_s = 100;
        c.basis_sweep = range_sweep(100, 200, 5);
        c.n_z = 300;
        c.methods = {"gnat", "gnat_sns"};
        return c;
    }
    if (name == "burgers-small") {
        c.problem = "burgers";
        c.mesh = 128;
        c.schemes = {SchemeId::BackwardEuler};
        c.grid = {2.5e-3, 200};
        c.training = burgers_training();
        c.target = {1.45, 0.0201};
        c.n_s = 20;
        c.basis_sweep = {20, 30};
        c.n_z = 60;
        c.methods = {"gnat", "gnat_sns"};
        return c;
    }
    if (name == "burgers-st") {
        c.problem = "burgers";
        c.mesh = 100;
        c.schemes = {SchemeId::BackwardEuler};
        c.grid = {2.5e-4, 2000};
        c.training = burgers_training();
        c.target = {1.45, 0.0201};
        c.n_s = 0;
        c.space_time = true;
        c.st_spatial = 8;
        c.st_temporal = 4;
        c.st_n_st = 8;
        c.st_n_z = 64;
        c.basis_sweep = {8, 10, 12, 14, 16};
        c.st_strategy = StResidualStrategy::st_lspg_iterations;
        c.methods = {"st_gnat", "st_gnat_sns"};
        return c;
    }
    if (name == "euler") {
        c.problem = "euler";
        c.mesh = 50;
        c.schemes = {SchemeId::BackwardEuler};
        c.grid = {1e-3, 600};
        c.training = euler_training();
        c.target = {1.7225, 1.705};
        c.n_s = 30;
        c.basis_sweep = range_sweep(30, 90, 5);
        c.n_z = 90;
        c.methods = {"gnat", "gnat_sns"};
        return c;
    }
    if (name == "euler-st") {
        c.problem = "euler";
        c.mesh = 50;
        c.schemes = {SchemeId::BackwardEuler};
        c.grid = {1e-3, 600};
        c.training = euler_training();
        c.target = {1.7225, 1.705};
        c.n_s = 0;
        c.space_time = true;
        c.st_spatial = 10;
        c.st_temporal = 4;
        c.st_n_st = 10;
        c.st_n_z = 80;
        c.basis_sweep = {10, 12, 14, 16};
        c.st_strategy = StResidualStrategy::projection_of_fom;
        c.methods = {"st_gnat", "st_gnat_sns"};
        return c;
    }
    throw Error("unknown preset: " + name);
}

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

std::vector<int> parse_sweep(const std::string& value) {
    // either lo:hi:step or a comma list
    if (value.find(':') != std::string::npos) {
        const auto parts = split(value, ':');
        if (parts.size() != 3) throw Error("basis_sweep range must be lo:hi:step");
        return range_sweep(std::stoi(parts[0]), std::stoi(parts[1]), std::stoi(parts[2]));
    }
    std::vector<int> v;
    for (const auto& item : split(value, ',')) v.push_back(std::stoi(item));
    return v;
}

std::vector<ParameterPoint> parse_points(const std::string& value) {
    std::vector<ParameterPoint> pts;
    for (const auto& group : split(value, ';')) {
        ParameterPoint p;
        for (const auto& item : split(group, ',')) {
            if (item == "-") continue;
            p.values.push_back(std::stod(item));
        }
        pts.push_back(std::move(p));
    }
    return pts;
}

}  // namespace

ExperimentConfig load_config_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open config file: " + path.string());
    ExperimentConfig c;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[' && line.back() == ']') continue;  // section headers
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw Error("config line " + std::to_string(line_no) + ": expected key = value");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        try {
            if (key == "name") c.name = value;
            else if (key == "problem") c.problem = value;
            else if (key == "mesh") c.mesh = std::stoi(value);
            else if (key == "schemes") {
                c.schemes.clear();
                for (const auto& s : split(value, ',')) c.schemes.push_back(scheme_from_name(s));
            } else if (key == "dt") c.grid.dt = std::stod(value);
            else if (key == "n_steps") c.grid.n_steps = std::stoi(value);
            else if (key == "training") c.training = parse_points(value);
            else if (key == "target") {
                const auto pts = parse_points(value);
                c.target = pts.empty() ? ParameterPoint{} : pts.front();
            } else if (key == "n_s") c.n_s = std::stoi(value);
            else if (key == "basis_sweep") c.basis_sweep = parse_sweep(value);
            else if (key == "n_z") c.n_z = std::stoi(value);
            else if (key == "methods") c.methods = split(value, ',');
            else if (key == "space_time") c.space_time = (value == "true" || value == "1");
            else if (key == "st_spatial") c.st_spatial = std::stoi(value);
            else if (key == "st_temporal") c.st_temporal = std::stoi(value);
            else if (key == "st_n_st") c.st_n_st = std::stoi(value);
            else if (key == "st_n_z") c.st_n_z = std::stoi(value);
            else if (key == "st_residual_snapshots") {
                if (value == "projection_of_fom") {
                    c.st_strategy = StResidualStrategy::projection_of_fom;
                } else if (value == "st_lspg_iterations") {
                    c.st_strategy = StResidualStrategy::st_lspg_iterations;
                } else {
                    throw Error("unknown st_residual_snapshots value: " + value);
                }
            } else if (key == "seed") c.seed = std::stoull(value);
            else if (key == "threads") c.threads = std::stoi(value);
            else throw Error("unknown config key: " + key);
        } catch (const Error&) {
            throw;
        } catch (const std::exception& e) {
            throw Error("config line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    if (c.problem.empty()) throw Error("config: missing problem");
    if (c.problem == "diffusion" && c.training.empty()) c.training = {ParameterPoint{}};
    if (c.schemes.empty() && !c.space_time) c.schemes = {SchemeId::BackwardEuler};
    return c;
}

}  // namespace romkit
