// Copyright romkit developers. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>

#include "romkit/bench.hpp"
#include "romkit/io.hpp"

using namespace romkit;

namespace {

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), {});
}

}  // namespace

TEST_CASE("relative error: identities") {
    Matrix fom(3, 4);
    fom << 1, 2, 3, 4,  //
        0, 1, 0, 1,     //
        2, 2, 2, 2;
    CHECK(relative_error(fom, fom) == 0.0);
    CHECK(relative_error(Matrix(2.0 * fom), fom) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK_THROWS_AS(relative_error(Matrix::Zero(3, 4), Matrix::Zero(3, 4)), Error);
}

TEST_CASE("relative error: hand-computed three-step toy value") {
    Matrix fom(2, 4), rom(2, 4);
    fom << 0, 1, 2, 2,  //
        0, 0, 1, 3;
    rom << 0, 1, 1, 2,  //
        0, 1, 1, 2;
    // numerator: n=1: (0,1) -> 1; n=2: (1,0) -> 1; n=3: (0,1) -> 1 ; sum = 3
    // denominator: n=1: 1; n=2: 5; n=3: 13; sum = 19
    CHECK(relative_error(rom, fom) ==
          doctest::Approx(std::sqrt(3.0 / 19.0)).epsilon(1e-14));
}

TEST_CASE("relative error sums exclude the initial column") {
    Matrix fom = Matrix::Ones(2, 3);
    Matrix rom = fom;
    rom.col(0) << 100.0, 100.0;  // differences at n = 0 are ignored
    CHECK(relative_error(rom, fom) == 0.0);
}

TEST_CASE("empty method list produces an empty report") {
    ExperimentConfig c = preset("burgers-small");
    c.methods.clear();
    c.grid.n_steps = 10;
    const ExperimentReport report = run_experiment(c);
    CHECK(report.rows.empty());
    CHECK_FALSE(report.any_failed());
}

TEST_CASE("emit_report: headers-only files for an empty report and row round-trip") {
    ExperimentReport report;
    report.config = preset("burgers-small");
    const auto dir = std::filesystem::temp_directory_path() / "romkit_report_test";
    emit_report(report, dir);
    CHECK(slurp(dir / "errors.csv") == "method,scheme,n_s,n_basis,n_z,relative_error\n");

    ReportRow row;
    row.method = "gnat_sns";
    row.scheme = "backward_euler";
    row.n_s = 20;
    row.n_basis = 30;
    row.n_z = 60;
    row.relative_error = 1.25e-3;
    report.rows.push_back(row);
    emit_report(report, dir);
    const std::string text = slurp(dir / "errors.csv");
    CHECK(text.find("gnat_sns,backward_euler,20,30,60,1.250000000000e-03\n") !=
          std::string::npos);
    // fields survive a re-parse
    std::stringstream ss(text);
    std::string header, line;
    std::getline(ss, header);
    std::getline(ss, line);
    std::stringstream fields(line);
    std::string method, scheme, n_s, n_basis, n_z, err;
    std::getline(fields, method, ',');
    std::getline(fields, scheme, ',');
    std::getline(fields, n_s, ',');
    std::getline(fields, n_basis, ',');
    std::getline(fields, n_z, ',');
    std::getline(fields, err, ',');
    CHECK(method == "gnat_sns");
    CHECK(std::stoi(n_basis) == 30);
    CHECK(std::stod(err) == doctest::Approx(1.25e-3));
    std::filesystem::remove_all(dir);
}

TEST_CASE("config file: schema round-trip and config errors") {
    const auto path = std::filesystem::temp_directory_path() / "romkit_config_test.cfg";
    {
        std::ofstream out(path);
        out << "# comment line\n"
            << "[experiment]\n"
            << "name = toy\n"
            << "problem = burgers\n"
            << "mesh = 64\n"
            << "schemes = backward_euler, forward_euler\n"
            << "dt = 2.5e-3\n"
            << "n_steps = 40\n"
            << "training = 1.2, 0.02 ; 1.5, 0.025\n"
            << "target = 1.45, 0.0201\n"
            << "n_s = 8\n"
            << "basis_sweep = 8:12:2\n"
            << "n_z = 24\n"
            << "methods = gnat_sns\n"
            << "seed = 42\n";
    }
    const ExperimentConfig c = load_config_file(path);
    CHECK(c.name == "toy");
    CHECK(c.problem == "burgers");
    CHECK(c.mesh == 64);
    CHECK(c.schemes.size() == 2);
    CHECK(c.grid.dt == doctest::Approx(2.5e-3));
    CHECK(c.grid.n_steps == 40);
    CHECK(c.training.size() == 2);
    CHECK(c.training[1][1] == doctest::Approx(0.025));
    CHECK(c.target[0] == doctest::Approx(1.45));
    CHECK(c.basis_sweep == std::vector<int>{8, 10, 12});
    CHECK(c.n_z == 24);
    CHECK(c.seed == 42);
    std::filesystem::remove(path);

    {
        std::ofstream out(path);
        out << "problem = burgers\nbogus_key = 1\n";
    }
    CHECK_THROWS_AS(load_config_file(path), Error);
    std::filesystem::remove(path);
}

TEST_CASE("run_experiment: tiny sweep produces rows with coherent bookkeeping") {
    ExperimentConfig c = preset("burgers-small");
    c.mesh = 64;
    c.grid = {2.5e-3, 60};
    c.n_s = 8;
    c.basis_sweep = {8, 12};
    c.n_z = 24;
    c.threads = 2;
    const ExperimentReport report = run_experiment(c);
    REQUIRE(report.rows.size() == 4);  // 2 methods x 2 sweep points
    for (const auto& row : report.rows) {
        CAPTURE(row.method);
        CAPTURE(row.error);
        REQUIRE_FALSE(row.failed);
        CHECK(row.relative_error < 0.5);
        CHECK(row.offline_seconds ==
              doctest::Approx(row.fom_seconds + row.residual_seconds +
                              row.compression_seconds + row.sampling_seconds)
                  .epsilon(1e-9));
        if (row.method == "gnat") {
            CHECK(row.compression_count == 2);
            CHECK(row.residual_seconds > 0.0);
            CHECK(row.residual_runs == 8);
        } else {
            CHECK(row.compression_count == 1);
            CHECK(row.residual_seconds == 0.0);
            CHECK(row.residual_runs == 0);
        }
    }
    // SNS offline time beats the baseline on every matched row
    for (std::size_t i = 0; i < 2; ++i) {
        const auto& gnat = report.rows[i];
        const auto& sns = report.rows[i + 2];
        CHECK(sns.offline_seconds < gnat.offline_seconds);
    }
}

TEST_CASE("determinism: identical config and seed give byte-identical errors.csv") {
    ExperimentConfig c = preset("burgers-small");
    c.mesh = 64;
    c.grid = {2.5e-3, 40};
    c.n_s = 6;
    c.basis_sweep = {6, 10};
    c.n_z = 20;
    c.threads = 2;
    const auto dir_a = std::filesystem::temp_directory_path() / "romkit_det_a";
    const auto dir_b = std::filesystem::temp_directory_path() / "romkit_det_b";
    emit_report(run_experiment(c), dir_a);
    emit_report(run_experiment(c), dir_b);
    CHECK(slurp(dir_a / "errors.csv") == slurp(dir_b / "errors.csv"));
    std::filesystem::remove_all(dir_a);
    std::filesystem::remove_all(dir_b);
}

TEST_CASE("presets cover the documented set") {
    for (const auto& name : preset_names()) {
        const ExperimentConfig c = preset(name);
        CHECK(!c.problem.empty());
        if (!c.space_time) CHECK(c.n_s > 0);
    }
    CHECK_THROWS_AS(preset("nope"), Error);
}
