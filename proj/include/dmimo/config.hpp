// SPDX-License-Identifier: Apache-2.0
//
// dmimo — uplink combining and spectral-efficiency simulator for
// distributed massive MIMO under pilot contamination
// Copyright (C) 2026 dmimo contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0

#ifndef DMIMO_CONFIG_HPP
#define DMIMO_CONFIG_HPP

#include "dmimo/types.hpp"

namespace dmimo {

/// Drop area and BS layout. By default the BSs sit at the cell centers of
/// the smallest square grid covering num_bs cells in a square area
/// (for N = 4 these are the quadrant centers); explicit positions override.
/// The default side length is calibrated so the desk-scale sweep shows the
/// documented scheme orderings: dense enough that pilot contamination
/// saturates MR within M <= 100, sparse enough that the UatF-rated OBE
/// still trails MR at M = 50.
struct GeometrySpec {
    double area_side = 140.0;
    double min_distance = 20.0;
    std::vector<Vec2> bs_positions;  // empty = derive default layout

    std::vector<Vec2> resolved_bs_positions(int num_bs) const;
};

struct ExperimentConfig {
    NetworkConfig net;  // antennas_per_bs is superseded by m_grid during sweeps
    GeometrySpec geometry;
    std::vector<int> m_grid = {20, 40, 60, 80, 100};
    std::vector<Scheme> schemes = {Scheme::MR, Scheme::MMSE, Scheme::DMMSE,
                                   Scheme::OBE_EQ6, Scheme::OBE_UATF};
    int drops = 100;
    int blocks_per_drop = 200;
    int calibration_drops = 1000;
    double pathloss_exponent = 3.7;
    double snr_target_db = 6.6;   // calibration target for the drop-average SNR
    char snr_divisor = 'M';       // 'M' (per antenna) or 'N' (trace over BS count)
    std::string out_path = "results.csv";
    int threads = 0;  // 0 = library default
};

struct ConfigResult {
    std::optional<ExperimentConfig> config;
    std::vector<std::string> errors;  // each names the offending key
    bool ok() const { return errors.empty() && config.has_value(); }
};

/// Parses "key = value" text (# comments, blank lines allowed), applies
/// defaults and enforces every invariant. Unknown keys and violations are
/// all reported, each tagged with the key name. A supplied pilot_snr that
/// disagrees with data_snr * pilot_length is an error, never silently fixed.
ConfigResult validate_config(const std::string& text);

ConfigResult load_config_file(const std::string& path);

/// The default experiment written as a config file.
std::string default_config_text();

}  // namespace dmimo

#endif  // DMIMO_CONFIG_HPP
