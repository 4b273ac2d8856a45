// SPDX-License-Identifier: Apache-2.0
//
// dmimo — uplink combining and spectral-efficiency simulator for
// distributed massive MIMO under pilot contamination
// Copyright (C) 2026 dmimo contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0

#ifndef DMIMO_EXPERIMENT_HPP
#define DMIMO_EXPERIMENT_HPP

#include "dmimo/config.hpp"
#include "dmimo/montecarlo.hpp"

namespace dmimo {

/// Uniform UE placement in the square area with rejection sampling against
/// the BS exclusion disks. Throws after 1e5 rejected attempts per UE
/// (infeasible exclusion configuration).
Geometry drop_ues(const GeometrySpec& spec, int num_ue, std::uint64_t seed,
                  std::uint32_t drop_index);

/// Scales the pathloss law so the drop-averaged SNR hits the target:
/// returns reference_gain with mean(rho * gain * d^-exponent * M/divisor)
/// equal to 10^(target_db/10), averaged over calibration drops, UEs and BSs.
/// divisor 'M' makes the result independent of the antenna count.
double calibrate_reference_gain(const GeometrySpec& spec, int num_ue, int num_bs,
                                double pathloss_exponent, double rho, double target_db,
                                char snr_divisor, int antennas, std::uint64_t seed,
                                int calibration_drops);

/// One aggregated CSV row: scheme x M x UE, averaged over drops.
struct ResultRow {
    Scheme scheme = Scheme::MR;
    int m = 0;
    int ue = 0;  // 1-based in reports
    double se_mean = 0.0;
    double se_stderr = 0.0;
    double sinr_mean = 0.0;
    double asym_pred = 0.0;  // NaN when not applicable
    long long est_mults = 0;
    long long comb_mults = 0;
};

struct ExperimentResult {
    std::vector<ResultRow> rows;
    double reference_gain = 0.0;
    std::string csv_path;
    std::string plot_path;
    double wall_seconds = 0.0;
};

/// Full experiment: calibrate, then for every (drop, M) work item sample a
/// geometry, build covariances and run the Monte-Carlo block loop; write the
/// CSV (header scheme,M,ue,se_mean,se_stderr,sinr_mean,asym_pred,est_mults,
/// comb_mults; values at 9 significant digits), emit a plot script next to
/// it and return the rows. Output bytes depend only on config + seed.
ExperimentResult run_experiment(const ExperimentConfig& cfg,
                                ExecPolicy policy = ExecPolicy::OpenMP);

std::string format_summary_table(const ExperimentResult& result);

std::string csv_encode(const std::vector<ResultRow>& rows);

}  // namespace dmimo

#endif  // DMIMO_EXPERIMENT_HPP
