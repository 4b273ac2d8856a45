// SPDX-License-Identifier: Apache-2.0
//
// dmimo — uplink combining and spectral-efficiency simulator for
// distributed massive MIMO under pilot contamination
// Copyright (C) 2026 dmimo contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0

#include <CLI11.hpp>
#include <cstdio>
#include <iostream>

#include "dmimo/asymptotics.hpp"
#include "dmimo/covariance.hpp"
#include "dmimo/experiment.hpp"
#include "dmimo/selfcheck.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfigError = 1;
constexpr int kExitRuntimeError = 2;

struct CommonFlags {
    std::string config_path;
    std::uint64_t seed = 0;
    bool seed_set = false;
    std::string out_path;
    int threads = -1;
};

dmimo::ExperimentConfig load_or_default(const CommonFlags& flags) {
    dmimo::ConfigResult parsed = flags.config_path.empty()
                                     ? dmimo::validate_config(dmimo::default_config_text())
                                     : dmimo::load_config_file(flags.config_path);
    if (!parsed.ok()) {
        std::cerr << "config error(s):\n";
        for (const auto& e : parsed.errors) std::cerr << "  " << e << "\n";
        std::exit(kExitConfigError);
    }
    dmimo::ExperimentConfig cfg = *parsed.config;
    if (flags.seed_set) cfg.net.rng_seed = flags.seed;
    if (!flags.out_path.empty()) cfg.out_path = flags.out_path;
    if (flags.threads >= 0) cfg.threads = flags.threads;
    return cfg;
}

int cmd_run(const CommonFlags& flags) {
    const dmimo::ExperimentConfig cfg = load_or_default(flags);
    const dmimo::ExperimentResult res = dmimo::run_experiment(cfg);
    std::cout << dmimo::format_summary_table(res);
    std::cout << "wrote " << res.csv_path << " and " << res.plot_path << "\n";
    return kExitOk;
}

int cmd_check(const CommonFlags& flags, int instances) {
    const std::uint64_t seed = flags.seed_set ? flags.seed : 1;
    bool all_pass = true;
    for (const dmimo::CheckResult& r : dmimo::run_self_checks(seed, instances)) {
        std::printf("%-26s %s  (%s)\n", r.name.c_str(), r.pass ? "PASS" : "FAIL",
                    r.detail.c_str());
        all_pass = all_pass && r.pass;
    }
    return all_pass ? kExitOk : kExitRuntimeError;
}

int cmd_complexity(const CommonFlags& flags) {
    const dmimo::ExperimentConfig cfg = load_or_default(flags);
    std::printf("%-9s %5s %15s %15s\n", "scheme", "M", "est_mults", "comb_mults");
    for (dmimo::Scheme s : cfg.schemes) {
        for (int m : cfg.m_grid) {
            const auto c = dmimo::complexity_count(s, cfg.net.num_bs, m, cfg.net.pilot_length);
            std::printf("%-9s %5d %15lld %15lld\n", dmimo::to_string(s).c_str(), m,
                        c.estimation_mults, c.combiner_mults);
        }
    }
    return kExitOk;
}

int cmd_assumptions(const CommonFlags& flags, int antennas, int drop) {
    dmimo::ExperimentConfig cfg = load_or_default(flags);
    const int m = antennas > 0 ? antennas : cfg.m_grid.front();

    dmimo::GeometrySpec geo = cfg.geometry;
    geo.bs_positions = cfg.geometry.resolved_bs_positions(cfg.net.num_bs);
    const dmimo::Geometry g = dmimo::drop_ues(geo, cfg.net.num_ue, cfg.net.rng_seed,
                                              static_cast<std::uint32_t>(drop));
    const double gain = dmimo::calibrate_reference_gain(
        geo, cfg.net.num_ue, cfg.net.num_bs, cfg.pathloss_exponent, cfg.net.data_snr,
        cfg.snr_target_db, cfg.snr_divisor, m, cfg.net.rng_seed, cfg.calibration_drops);
    const dmimo::CovarianceSet cov = dmimo::build_covariance_set(
        g, m, cfg.net.correlation_factor, cfg.pathloss_exponent, gain);

    std::printf("drop %d, M = %d\n", drop, m);
    for (int n = 0; n < cfg.net.num_bs; ++n) {
        const auto metric = dmimo::assumption_metric(cov.R[0][n], cov.R[1][n], 1);
        std::printf("BS %d: per-BS metric = %.6g (lambda* = %.4g)\n", n + 1, metric.value,
                    metric.lambda_star);
    }
    const auto global = dmimo::assumption_metric_global(cov.R[0], cov.R[1], 1);
    std::printf("global metric = %.6g (lambda* = %.4g)\n", global.value, global.lambda_star);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"dmimo: distributed massive MIMO uplink SE simulator"};
    app.require_subcommand(1);

    CommonFlags flags;
    int instances = 10;
    int antennas = 0;
    int drop = 0;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", flags.config_path, "config file (key = value)");
        sub->add_option("--seed", flags.seed, "override the RNG seed")
            ->each([&](const std::string&) { flags.seed_set = true; });
        sub->add_option("--out", flags.out_path, "override the output CSV path");
        sub->add_option("--threads", flags.threads, "worker thread count (0 = default)");
    };

    CLI::App* run = app.add_subcommand("run", "full SE-vs-M experiment, writes CSV + plot script");
    add_common(run);
    CLI::App* check = app.add_subcommand("check", "invariant suite on random instances");
    add_common(check);
    check->add_option("--instances", instances, "random instances per check");
    CLI::App* complexity = app.add_subcommand("complexity", "combining cost report");
    add_common(complexity);
    CLI::App* assumptions =
        app.add_subcommand("assumptions", "covariance linear-independence metrics for one drop");
    add_common(assumptions);
    assumptions->add_option("--m", antennas, "antenna count (default: first m_grid entry)");
    assumptions->add_option("--drop", drop, "drop index");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return cmd_run(flags);
        if (check->parsed()) return cmd_check(flags, instances);
        if (complexity->parsed()) return cmd_complexity(flags);
        if (assumptions->parsed()) return cmd_assumptions(flags, antennas, drop);
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const std::exception& e) {
        std::cerr << "runtime error: " << e.what() << "\n";
        return kExitRuntimeError;
    }
    return kExitOk;
}
