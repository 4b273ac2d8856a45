// SPDX-License-Identifier: Apache-2.0
//
// dmimo — uplink combining and spectral-efficiency simulator for
// distributed massive MIMO under pilot contamination
// Copyright (C) 2026 dmimo contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0

#include "dmimo/se.hpp"

#include <cmath>
#include <stdexcept>

namespace dmimo {

double instantaneous_sinr(const CombinerBank& bank, const ChannelBlock& block,
                          const StatMatrices& stat, int ue) {
    const int K = stat.num_ue, N = stat.num_bs;
    const auto& v = bank.v[ue];

    std::vector<cx> signal(K, cx(0.0, 0.0));
    double noise = 0.0;
    for (int n = 0; n < N; ++n) {
        for (int i = 0; i < K; ++i) signal[i] += arma::cdot(v[n], block.mmse[i][n]);
        noise += std::real(arma::cdot(v[n], arma::cx_vec(stat.Z[n] * v[n])));
    }
    if (noise <= 0.0)
        throw std::runtime_error("instantaneous_sinr: combiner bank is zero");

    double interference = 0.0;
    for (int i = 0; i < K; ++i)
        if (i != ue) interference += std::norm(signal[i]);
    return std::norm(signal[ue]) / (interference + noise);
}

double mmse_sinr_closed_form(const ChannelBlock& block, const StatMatrices& stat, int ue) {
    if (stat.num_ue != 2)
        throw std::invalid_argument("mmse_sinr_closed_form: requires exactly two UEs");
    const int j = 1 - ue;
    double s_kk = 0.0, s_jj = 0.0;
    cx s_jk(0.0, 0.0);
    for (int n = 0; n < stat.num_bs; ++n) {
        const arma::cx_vec t_k = stat.Z_solver[n].solve(block.mmse[ue][n]);
        const arma::cx_vec t_j = stat.Z_solver[n].solve(block.mmse[j][n]);
        s_kk += std::real(arma::cdot(block.mmse[ue][n], t_k));
        s_jj += std::real(arma::cdot(block.mmse[j][n], t_j));
        s_jk += arma::cdot(block.mmse[j][n], t_k);
    }
    // hhat_k^H (Z + hhat_j hhat_j^H)^{-1} hhat_k, rank-one corrected
    return s_kk - std::norm(s_jk) / (1.0 + s_jj);
}

SeEstimate se_from_sinr_samples(const std::vector<double>& gammas, int tau_p, int tau_c) {
    if (gammas.empty())
        throw std::invalid_argument("se_from_sinr_samples: empty sample set");
    const double prefactor = 1.0 - static_cast<double>(tau_p) / static_cast<double>(tau_c);

    double sum = 0.0, sum_sq = 0.0;
    for (double g : gammas) {
        const double r = std::log2(1.0 + g);
        sum += r;
        sum_sq += r * r;
    }
    const double n = static_cast<double>(gammas.size());
    const double mean = sum / n;

    SeEstimate out;
    out.samples = gammas.size();
    out.se = prefactor * mean;
    if (gammas.size() > 1) {
        const double var = std::max(0.0, (sum_sq - n * mean * mean) / (n - 1.0));
        out.stderr_ = prefactor * std::sqrt(var / n);
    }
    return out;
}

double uatf_sinr_general(const std::vector<arma::cx_mat>& W_ue, const CovarianceSet& cov,
                         const StatMatrices& stat, int ue) {
    if (stat.num_ue != 2)
        throw std::invalid_argument("uatf_sinr_general: requires exactly two UEs");
    const int j = 1 - ue;

    cx desired(0.0, 0.0), cross(0.0, 0.0);
    double quad = 0.0;
    double w_norm = 0.0;
    for (int n = 0; n < stat.num_bs; ++n) {
        const arma::cx_mat& W = W_ue[n];
        w_norm += std::real(arma::accu(arma::conj(W) % W));
        desired += trace_product(arma::cx_mat(W.t()), cov.R[ue][n]);
        cross += trace_product(arma::cx_mat(W.t()), cov.R[j][n]);
        // w^H ((Qtr)^T kron Q) w = tr(W^H Q W Qtr)
        quad += std::real(trace_product(arma::cx_mat(W.t() * (stat.Q[n] * W)), stat.Qtr[n]));
    }
    if (w_norm == 0.0)
        throw std::invalid_argument("uatf_sinr_general: all-zero combiner matrices");
    return std::norm(desired) / (std::norm(cross) + quad);
}

UatfOptimal uatf_sinr_optimal(const CoefficientTable& alpha, int antennas, int ue) {
    const int j = 1 - ue;
    const double inv_m = 1.0 / static_cast<double>(antennas);
    UatfOptimal out;
    out.delta = std::real(alpha.sum(ue, ue)) -
                std::norm(alpha.sum(ue, j)) / (inv_m + std::real(alpha.sum(j, j)));
    out.gamma = static_cast<double>(antennas) * out.delta;
    return out;
}

double se_from_uatf(double gamma_uatf, int tau_p, int tau_c) {
    const double prefactor = 1.0 - static_cast<double>(tau_p) / static_cast<double>(tau_c);
    return prefactor * std::log2(1.0 + gamma_uatf);
}

}  // namespace dmimo
