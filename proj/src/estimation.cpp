// SPDX-License-Identifier: Apache-2.0
//
// dmimo — uplink combining and spectral-efficiency simulator for
// distributed massive MIMO under pilot contamination
// Copyright (C) 2026 dmimo contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0

#include "dmimo/estimation.hpp"

#include <stdexcept>

namespace dmimo {

StatMatrices compute_stat_matrices(const CovarianceSet& cov, double rho, double rho_tr) {
    if (!(rho > 0.0) || !(rho_tr > 0.0))
        throw std::invalid_argument("compute_stat_matrices: SNRs must be positive");

    StatMatrices s;
    s.rho = rho;
    s.rho_tr = rho_tr;
    s.num_ue = cov.num_ue;
    s.num_bs = cov.num_bs;
    s.antennas = cov.antennas;

    const arma::cx_mat eye = arma::eye<arma::cx_mat>(cov.antennas, cov.antennas);
    s.Qtr.resize(cov.num_bs);
    s.Q.resize(cov.num_bs);
    s.Z.resize(cov.num_bs);
    s.Qtr_solver.resize(cov.num_bs);
    s.Q_solver.resize(cov.num_bs);
    s.Z_solver.resize(cov.num_bs);
    s.mmse_filter.assign(cov.num_ue, std::vector<arma::cx_mat>(cov.num_bs));

    for (int n = 0; n < cov.num_bs; ++n) {
        arma::cx_mat sum_R(cov.antennas, cov.antennas, arma::fill::zeros);
        for (int k = 0; k < cov.num_ue; ++k) sum_R += cov.R[k][n];

        s.Qtr[n] = sum_R + (1.0 / rho_tr) * eye;
        s.Q[n] = sum_R + (1.0 / rho) * eye;
        s.Qtr_solver[n] = HpdSolver(s.Qtr[n]);
        s.Q_solver[n] = HpdSolver(s.Q[n]);

        arma::cx_mat Z = (1.0 / rho) * eye;
        for (int k = 0; k < cov.num_ue; ++k) {
            // filter^H = Qtr^{-1} R_k, so the filter itself never needs an inverse
            const arma::cx_mat QinvR = s.Qtr_solver[n].solve(cov.R[k][n]);
            s.mmse_filter[k][n] = QinvR.t();
            Z += cov.R[k][n] - cov.R[k][n] * QinvR;
        }
        // symmetrize away the solve round-off before factorizing
        s.Z[n] = 0.5 * (Z + Z.t());
        s.Z_solver[n] = HpdSolver(s.Z[n]);
    }
    return s;
}

ChannelSampler::ChannelSampler(const CovarianceSet& cov) {
    factor_.assign(cov.num_ue, std::vector<arma::cx_mat>(cov.num_bs));
    for (int k = 0; k < cov.num_ue; ++k) {
        for (int n = 0; n < cov.num_bs; ++n) {
            const arma::cx_mat& R = cov.R[k][n];
            if (arma::norm(R, "fro") == 0.0) {
                factor_[k][n] = arma::cx_mat(R.n_rows, R.n_cols, arma::fill::zeros);
                continue;
            }
            arma::cx_mat L;
            if (arma::chol(L, R, "lower")) {
                factor_[k][n] = L;
                continue;
            }
            // Singular PSD covariance: eigen route with the clip tolerance.
            arma::vec eigval;
            arma::cx_mat eigvec;
            if (!arma::eig_sym(eigval, eigvec, R))
                throw std::runtime_error("ChannelSampler: eigen factorization failed");
            const double floor = -1e-10 * std::real(arma::trace(R)) / double(R.n_rows);
            for (arma::uword i = 0; i < eigval.n_elem; ++i) {
                if (eigval(i) < floor)
                    throw std::runtime_error(
                        "ChannelSampler: covariance has a significantly negative eigenvalue");
                if (eigval(i) < 0.0) eigval(i) = 0.0;
            }
            factor_[k][n] = eigvec * arma::diagmat(arma::sqrt(eigval));
        }
    }
}

std::vector<std::vector<arma::cx_vec>> ChannelSampler::sample(std::uint64_t seed,
                                                              std::uint32_t drop,
                                                              std::uint32_t block) const {
    const int K = static_cast<int>(factor_.size());
    const int N = K > 0 ? static_cast<int>(factor_[0].size()) : 0;
    std::vector<std::vector<arma::cx_vec>> h(K, std::vector<arma::cx_vec>(N));
    for (int k = 0; k < K; ++k) {
        for (int n = 0; n < N; ++n) {
            const arma::cx_mat& L = factor_[k][n];
            Rng rng(seed, StreamKind::Channel, drop, block,
                    (static_cast<std::uint32_t>(k) << 16) | static_cast<std::uint32_t>(n));
            arma::cx_vec g(L.n_cols);
            for (arma::uword i = 0; i < g.n_elem; ++i) g(i) = rng.cgaussian();
            h[k][n] = L * g;
        }
    }
    return h;
}

std::vector<arma::cx_mat> pilot_observation(const std::vector<std::vector<arma::cx_vec>>& h,
                                            int tau_p, double rho_tr, std::uint64_t seed,
                                            std::uint32_t drop, std::uint32_t block) {
    if (tau_p < 1) throw std::invalid_argument("pilot_observation: tau_p must be positive");
    const int K = static_cast<int>(h.size());
    const int N = K > 0 ? static_cast<int>(h[0].size()) : 0;
    const double amp = std::sqrt(rho_tr / static_cast<double>(tau_p));  // per-symbol sqrt(rho)

    std::vector<arma::cx_mat> Y(N);
    for (int n = 0; n < N; ++n) {
        const arma::uword M = h[0][n].n_elem;
        arma::cx_vec sum_h(M, arma::fill::zeros);
        for (int k = 0; k < K; ++k) sum_h += h[k][n];

        Rng rng(seed, StreamKind::PilotNoise, drop, block, static_cast<std::uint32_t>(n));
        arma::cx_mat noise(M, tau_p);
        for (int t = 0; t < tau_p; ++t)
            for (arma::uword i = 0; i < M; ++i) noise(i, t) = rng.cgaussian();

        // phi is the all-ones pilot, so h phi^T repeats the column
        Y[n] = arma::repmat(amp * sum_h, 1, tau_p) + noise;
    }
    return Y;
}

std::vector<arma::cx_vec> ls_estimate(const std::vector<arma::cx_mat>& Y, int tau_p,
                                      double rho_tr) {
    if (tau_p < 1) throw std::invalid_argument("ls_estimate: tau_p must be positive");
    const double scale = 1.0 / std::sqrt(rho_tr * static_cast<double>(tau_p));
    std::vector<arma::cx_vec> ls(Y.size());
    for (std::size_t n = 0; n < Y.size(); ++n)
        ls[n] = scale * arma::sum(Y[n], 1);  // Y phi* with phi = ones
    return ls;
}

std::vector<std::vector<arma::cx_vec>> mmse_estimate(const std::vector<arma::cx_vec>& ls,
                                                     const StatMatrices& stat) {
    std::vector<std::vector<arma::cx_vec>> est(stat.num_ue,
                                               std::vector<arma::cx_vec>(stat.num_bs));
    for (int k = 0; k < stat.num_ue; ++k)
        for (int n = 0; n < stat.num_bs; ++n) est[k][n] = stat.mmse_filter[k][n] * ls[n];
    return est;
}

ChannelBlock draw_block(const ChannelSampler& sampler, const StatMatrices& stat,
                        std::uint64_t seed, std::uint32_t drop, std::uint32_t block) {
    ChannelBlock b;
    b.h = sampler.sample(seed, drop, block);

    const double noise_std = std::sqrt(1.0 / stat.rho_tr);
    b.ls.resize(stat.num_bs);
    for (int n = 0; n < stat.num_bs; ++n) {
        arma::cx_vec s(stat.antennas, arma::fill::zeros);
        for (int k = 0; k < stat.num_ue; ++k) s += b.h[k][n];
        Rng rng(seed, StreamKind::PilotNoise, drop, block, static_cast<std::uint32_t>(n));
        for (int i = 0; i < stat.antennas; ++i) s(i) += noise_std * rng.cgaussian();
        b.ls[n] = std::move(s);
    }
    b.mmse = mmse_estimate(b.ls, stat);
    return b;
}

}  // namespace dmimo
