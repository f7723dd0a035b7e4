// Copyright 2026 The partonloop Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "partonloop/experiment_runner.h"

#ifndef PARTONLOOP_GIT_HASH
#define PARTONLOOP_GIT_HASH "unknown"
#endif

using namespace partonloop;

namespace {

struct RunFlags {
    std::string config_path;
    uint64_t seed = 0;
    bool seed_set = false;
    std::string out_dir = ".";
    unsigned threads = 1;
};

void add_run_flags(CLI::App *cmd, RunFlags &f) {
    cmd->add_option("--config", f.config_path, "Experiment config file")->required()->check(CLI::ExistingFile);
    cmd->add_option_function<uint64_t>(
        "--seed",
        [&f](const uint64_t &s) {
            f.seed = s;
            f.seed_set = true;
        },
        "Override the config seed");
    cmd->add_option("--out", f.out_dir, "Output directory for results.csv and metadata.json");
    cmd->add_option("--threads", f.threads, "Worker threads (0 = hardware concurrency)");
}

void write_file(const std::filesystem::path &path, const std::string &text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        throw std::runtime_error("cannot write " + path.string());
    }
    f << text;
}

int execute(const RunFlags &f, int mode) {
    ExperimentConfig config = ExperimentConfig::load(f.config_path);
    if (f.seed_set) {
        config.seed = f.seed;
    }
    if (mode == 1 && config.sweep.empty()) {
        throw std::invalid_argument("sweep needs a [sweep] section with p, q or l lists");
    }
    if (mode == 2) {
        config.engine = Engine::crosscheck;
    }
    config.validate();
    unsigned threads = f.threads ? f.threads : std::max(1u, std::thread::hardware_concurrency());
    RunReport report = run_experiment(config, threads);

    std::filesystem::create_directories(f.out_dir);
    std::filesystem::path out(f.out_dir);
    write_file(out / "results.csv", to_csv(report.rows));
    write_file(out / "metadata.json", sidecar_json(config, report, PARTONLOOP_GIT_HASH));

    int failed = 0;
    for (const ResultRow &r : report.rows) {
        std::printf("%ux%u p=%g q=%g %-18s", r.lx, r.ly, r.p, r.q, r.estimator.c_str());
        if (r.ell >= 0) {
            std::printf(" ell=%-4lld", (long long)r.ell);
        }
        std::printf(" %.6g +- %.2g", r.mean, r.std_error);
        if (r.pass >= 0) {
            std::printf("  %s", r.pass ? "PASS" : "FAIL");
            failed += r.pass == 0;
        }
        std::printf("\n");
    }
    std::printf("wrote %s (%zu rows, %.2f s, %u threads)\n", (out / "results.csv").c_str(), report.rows.size(),
                report.wall_time, threads);
    return failed ? 1 : 0;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"partonloop: measurement-induced entanglement in the toric code via Majorana loops"};
    app.require_subcommand(1);

    RunFlags run_flags;
    RunFlags sweep_flags;
    RunFlags check_flags;
    add_run_flags(app.add_subcommand("run", "Run one config point (or its sweep) and write CSV + JSON"), run_flags);
    add_run_flags(app.add_subcommand("sweep", "Run a config's [sweep] grid"), sweep_flags);
    add_run_flags(
        app.add_subcommand("crosscheck", "Run with every cross-engine identity; exit 1 if any fails"), check_flags);

    CLI::App *fit = app.add_subcommand("fit", "Fit one estimator from a results CSV");
    std::string in_path;
    std::string model = "log_growth";
    std::string estimator;
    std::string axis = "l";
    std::string transform = "none";
    fit->add_option("--in", in_path, "results.csv from run/sweep")->required()->check(CLI::ExistingFile);
    fit->add_option("--model", model, "log_growth | exp_decay | crossing_point")
        ->check(CLI::IsMember({"log_growth", "exp_decay", "crossing_point"}));
    fit->add_option("--estimator", estimator, "Estimator column to fit")->required();
    fit->add_option("--x", axis, "Abscissa: l, p, q or ell")->check(CLI::IsMember({"l", "p", "q", "ell"}));
    fit->add_option("--transform", transform, "none | per_site | size_ratio (mean(2L)/mean(L))")
        ->check(CLI::IsMember({"none", "per_site", "size_ratio"}));

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand("run")) {
            return execute(run_flags, 0);
        }
        if (app.got_subcommand("sweep")) {
            return execute(sweep_flags, 1);
        }
        if (app.got_subcommand("crosscheck")) {
            return execute(check_flags, 2);
        }
        std::ifstream f(in_path);
        std::stringstream ss;
        ss << f.rdbuf();
        FitResult r = fit_rows(parse_csv(ss.str()), parse_fit_model(model), estimator, parse_fit_axis(axis),
            parse_fit_transform(transform));
        std::printf("model %s, %zu points, chi2 %.6g\n", fit_model_name(r.model).c_str(), r.points, r.chi2);
        for (size_t i = 0; i < r.values.size(); i++) {
            std::printf("%s = %.10g +- %.3g\n", r.names[i].c_str(), r.values[i], r.errors[i]);
        }
        return 0;
    } catch (const std::exception &e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}
