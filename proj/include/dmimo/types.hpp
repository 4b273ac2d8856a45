// SPDX-License-Identifier: Apache-2.0
//
// dmimo — uplink combining and spectral-efficiency simulator for
// distributed massive MIMO under pilot contamination
// Copyright (C) 2026 dmimo contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0

#ifndef DMIMO_TYPES_HPP
#define DMIMO_TYPES_HPP

#include <armadillo>
#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace dmimo {

using cx = std::complex<double>;

/// Network-wide scalar parameters. SNRs are linear power ratios; the pilot
/// SNR is tied to the data SNR by rho_tr = rho * tau_p and is not stored.
struct NetworkConfig {
    int num_bs = 4;             // N
    int antennas_per_bs = 100;  // M
    int num_ue = 2;             // K
    double data_snr = 4.5708818961487516;  // rho, linear (6.6 dB)
    int pilot_length = 10;      // tau_p
    int coherence_block = 200;  // tau_c, samples
    double correlation_factor = 0.5;  // r in [0,1)
    std::uint64_t rng_seed = 1;

    double pilot_snr() const { return data_snr * static_cast<double>(pilot_length); }

    // Returns one message per violated invariant; empty means valid.
    std::vector<std::string> problems() const;
    // Throws std::invalid_argument listing all problems.
    void validate() const;
};

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

inline double distance(const Vec2& a, const Vec2& b) {
    const double dx = a.x - b.x, dy = a.y - b.y;
    return std::sqrt(dx * dx + dy * dy);
}

/// BS and UE positions in meters. Every UE must keep min_distance to all BSs.
struct Geometry {
    std::vector<Vec2> bs_positions;
    std::vector<Vec2> ue_positions;
    double min_distance = 20.0;

    int num_bs() const { return static_cast<int>(bs_positions.size()); }
    int num_ue() const { return static_cast<int>(ue_positions.size()); }
    double dist(int ue, int bs) const { return distance(ue_positions[ue], bs_positions[bs]); }

    std::vector<std::string> problems() const;
    void validate() const;
};

/// Per-(UE, BS) spatial covariance matrices and derived large-scale values.
/// The network-wide covariance of UE k is block-diagonal over BSs and is
/// never stored densely; all operations work block by block.
struct CovarianceSet {
    int num_ue = 0;
    int num_bs = 0;
    int antennas = 0;
    std::vector<std::vector<arma::cx_mat>> R;  // [ue][bs], each M x M Hermitian PSD
    arma::mat large_scale;  // K x N, tr(R)/M
    arma::mat aoa;          // K x N, radians

    const arma::cx_mat& cov(int ue, int bs) const { return R[ue][bs]; }
};

enum class Scheme { MR, MMSE, DMMSE, OBE_EQ6, OBE_UATF };

std::string to_string(Scheme s);
std::optional<Scheme> scheme_from_string(std::string_view name);

inline constexpr Scheme kAllSchemes[] = {Scheme::MR, Scheme::MMSE, Scheme::DMMSE,
                                         Scheme::OBE_EQ6, Scheme::OBE_UATF};

}  // namespace dmimo

#endif  // DMIMO_TYPES_HPP
