// SPDX-License-Identifier: Apache-2.0
//
// dmimo — uplink combining and spectral-efficiency simulator for
// distributed massive MIMO under pilot contamination
// Copyright (C) 2026 dmimo contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0

#ifndef DMIMO_SE_HPP
#define DMIMO_SE_HPP

#include "dmimo/combining.hpp"

namespace dmimo {

/// Effective per-block SINR of UE k under the MMSE-estimation bound:
///   gamma_k = |sum_n v^H hhat_k|^2 /
///             (sum_{i != k} |sum_n v^H hhat_i|^2 + sum_n v^H Z^n v).
/// Invariant to scaling v by any nonzero complex number.
double instantaneous_sinr(const CombinerBank& bank, const ChannelBlock& block,
                          const StatMatrices& stat, int ue);

/// Closed form of the same SINR at the optimal combiner,
/// gamma_k = hhat_k^H (hhat_j hhat_j^H + Z)^{-1} hhat_k, evaluated through
/// per-BS solves and one rank-one correction. K = 2 only.
double mmse_sinr_closed_form(const ChannelBlock& block, const StatMatrices& stat, int ue);

struct SeEstimate {
    double se = 0.0;       // bit/s/Hz
    double stderr_ = 0.0;  // Monte-Carlo standard error of the mean
    std::size_t samples = 0;
};

/// SE = (1 - tau_p/tau_c) * mean(log2(1 + gamma)); the prefactor is applied
/// exactly once. Throws on an empty sample set.
SeEstimate se_from_sinr_samples(const std::vector<double>& gammas, int tau_p, int tau_c);

/// Use-and-then-forget SINR for an arbitrary deterministic bank of W
/// matrices (one per BS) applied to the LS estimate of UE k:
///   |sum_n tr(W^H R_k)|^2 /
///   (|sum_n tr(W^H R_j)|^2 + sum_n tr(W^H Q^n W Qtr^n)).
/// The quadratic term equals w^H ((Qtr)^T kron Q) w of the vectorized form.
/// K = 2 only. Throws on an all-zero bank.
double uatf_sinr_general(const std::vector<arma::cx_mat>& W_ue, const CovarianceSet& cov,
                         const StatMatrices& stat, int ue);

struct UatfOptimal {
    double gamma = 0.0;  // M * delta
    double delta = 0.0;  // sum alpha_kk - |sum alpha_kj|^2 / (1/M + sum alpha_jj)
};

/// Closed form of the UatF SINR at the optimal (OBE) W; exact for any M.
UatfOptimal uatf_sinr_optimal(const CoefficientTable& alpha, int antennas, int ue);

double se_from_uatf(double gamma_uatf, int tau_p, int tau_c);

}  // namespace dmimo

#endif  // DMIMO_SE_HPP
