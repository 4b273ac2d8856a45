// SPDX-License-Identifier: Apache-2.0
//
// dmimo — uplink combining and spectral-efficiency simulator for
// distributed massive MIMO under pilot contamination
// Copyright (C) 2026 dmimo contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0

//
// Benchmark: the serial reference sweep against the OpenMP sweep, verifying
// that both produce identical results before reporting the speedup.
//

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <cstring>
#include <string>

#include "dmimo/experiment.hpp"

namespace {

double run_timed(const dmimo::ExperimentConfig& cfg, dmimo::ExecPolicy policy,
                 std::string* csv_out) {
    const auto t0 = std::chrono::steady_clock::now();
    const dmimo::ExperimentResult res = dmimo::run_experiment(cfg, policy);
    const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    *csv_out = dmimo::csv_encode(res.rows);
    return dt;
}

}  // namespace

int main(int argc, char** argv) {
    dmimo::ExperimentConfig cfg;
    cfg.net.num_bs = 4;
    cfg.drops = 8;
    cfg.blocks_per_drop = 60;
    cfg.m_grid = {64};
    cfg.calibration_drops = 200;
    cfg.out_path = "bench_results.csv";

    // `--small` keeps the smoke run fast under ctest
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--small") == 0) {
            cfg.drops = 4;
            cfg.blocks_per_drop = 10;
            cfg.m_grid = {24};
        }
    }

    std::string serial_csv, parallel_csv;
    const double t_serial = run_timed(cfg, dmimo::ExecPolicy::Serial, &serial_csv);
    const double t_parallel = run_timed(cfg, dmimo::ExecPolicy::OpenMP, &parallel_csv);

    const bool identical = serial_csv == parallel_csv;
    std::printf("threads available : %d\n", omp_get_max_threads());
    std::printf("serial sweep      : %.3f s\n", t_serial);
    std::printf("openmp sweep      : %.3f s\n", t_parallel);
    std::printf("speedup           : %.2fx\n", t_serial / t_parallel);
    std::printf("outputs identical : %s\n", identical ? "yes" : "NO");
    return identical ? 0 : 1;
}
