// SPDX-License-Identifier: Apache-2.0
//
// dmimo — uplink combining and spectral-efficiency simulator for
// distributed massive MIMO under pilot contamination
// Copyright (C) 2026 dmimo contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0

#include "dmimo/combining.hpp"

#include <stdexcept>

namespace dmimo {

namespace {

void require_two_ues(int num_ue, const char* where) {
    if (num_ue != 2)
        throw std::invalid_argument(std::string(where) + ": requires exactly two UEs");
}

/// Shared assembly of the coefficient tables: entry (j, k) of
/// (1/M) tr(R_j A^{-1} R_k B^{-1}) computed from cached per-BS solves.
CoefficientTable trace_table(const CovarianceSet& cov, const std::vector<HpdSolver>& A,
                             const std::vector<HpdSolver>& B) {
    const int K = cov.num_ue, N = cov.num_bs;
    CoefficientTable t;
    t.per_bs.set_size(K, K, N);
    t.sums.zeros(K, K);
    for (int n = 0; n < N; ++n) {
        std::vector<arma::cx_mat> AinvR(K), BinvR(K);
        for (int k = 0; k < K; ++k) {
            AinvR[k] = A[n].solve(cov.R[k][n]);
            BinvR[k] = B[n].solve(cov.R[k][n]);
        }
        for (int j = 0; j < K; ++j) {
            for (int k = 0; k < K; ++k) {
                // tr(R_j A^{-1} R_k B^{-1}) = tr((B^{-1} R_j)(A^{-1} R_k))
                const cx val =
                    trace_product(BinvR[j], AinvR[k]) / static_cast<double>(cov.antennas);
                t.per_bs(j, k, n) = val;
                t.sums(j, k) += val;
            }
        }
    }
    return t;
}

}  // namespace

CoefficientTable compute_beta_table(const CovarianceSet& cov, const StatMatrices& stat) {
    return trace_table(cov, stat.Qtr_solver, stat.Z_solver);
}

CoefficientTable compute_alpha_table(const CovarianceSet& cov, const StatMatrices& stat) {
    return trace_table(cov, stat.Qtr_solver, stat.Q_solver);
}

CoefficientTable compute_alpha_table_single_q(const CovarianceSet& cov,
                                              const StatMatrices& stat) {
    return trace_table(cov, stat.Q_solver, stat.Q_solver);
}

CombinerBank mr_combiner(const ChannelBlock& block) {
    CombinerBank bank;
    bank.scheme = Scheme::MR;
    bank.v = block.mmse;
    return bank;
}

CombinerBank mmse_combiner_global(const ChannelBlock& block, const StatMatrices& stat) {
    require_two_ues(stat.num_ue, "mmse_combiner_global");
    const int N = stat.num_bs;

    // t_k^n = (Z^n)^{-1} hhat_k^n and the network scalars hhat_j^H Z^{-1} hhat_k
    std::vector<std::array<arma::cx_vec, 2>> t(N);
    arma::cx_mat s(2, 2, arma::fill::zeros);
    for (int n = 0; n < N; ++n) {
        for (int k = 0; k < 2; ++k) t[n][k] = stat.Z_solver[n].solve(block.mmse[k][n]);
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k) s(j, k) += arma::cdot(block.mmse[j][n], t[n][k]);
    }

    CombinerBank bank;
    bank.scheme = Scheme::MMSE;
    bank.v.assign(2, std::vector<arma::cx_vec>(N));
    const double M = static_cast<double>(stat.antennas);
    for (int k = 0; k < 2; ++k) {
        const int j = 1 - k;
        // rank-one update over the block-diagonal Z: the scalar uses the
        // 1/M-scaled quotient of network sums
        const cx c = (s(j, k) / M) / (1.0 / M + std::real(s(j, j)) / M);
        for (int n = 0; n < N; ++n) bank.v[k][n] = t[n][k] - c * t[n][j];
    }
    return bank;
}

CombinerBank dmmse_combiner(const ChannelBlock& block, const StatMatrices& stat,
                            const CoefficientTable& beta) {
    require_two_ues(stat.num_ue, "dmmse_combiner");
    const double inv_m = 1.0 / static_cast<double>(stat.antennas);

    CombinerBank bank;
    bank.scheme = Scheme::DMMSE;
    bank.v.assign(2, std::vector<arma::cx_vec>(stat.num_bs));
    for (int k = 0; k < 2; ++k) {
        const int j = 1 - k;
        // network scalar in front of the contaminating estimate; its
        // expectation matches (1/M) hhat_j^H Z^{-1} hhat_k summed over BSs
        const cx c = beta.sum(k, j) / (inv_m + std::real(beta.sum(j, j)));
        for (int n = 0; n < stat.num_bs; ++n)
            bank.v[k][n] = stat.Z_solver[n].solve(
                arma::cx_vec(block.mmse[k][n] - c * block.mmse[j][n]));
    }
    return bank;
}

std::vector<std::vector<arma::cx_mat>> dmmse_sigma_matrices(const CovarianceSet& cov,
                                                            const StatMatrices& stat,
                                                            const CoefficientTable& beta) {
    require_two_ues(stat.num_ue, "dmmse_sigma_matrices");
    const double inv_m = 1.0 / static_cast<double>(stat.antennas);
    std::vector<std::vector<arma::cx_mat>> sigma(2, std::vector<arma::cx_mat>(stat.num_bs));
    for (int k = 0; k < 2; ++k) {
        const int j = 1 - k;
        const cx c = beta.sum(k, j) / (inv_m + std::real(beta.sum(j, j)));
        for (int n = 0; n < stat.num_bs; ++n) {
            const arma::cx_mat bracket = cov.R[k][n] - c * cov.R[j][n];
            sigma[k][n] = stat.Z_solver[n].solve(
                arma::cx_mat(stat.Qtr_solver[n].solve(arma::cx_mat(bracket.t())).t()));
        }
    }
    return sigma;
}

CombinerBank dmmse_combiner_ls(const ChannelBlock& block,
                               const std::vector<std::vector<arma::cx_mat>>& sigma) {
    CombinerBank bank;
    bank.scheme = Scheme::DMMSE;
    bank.v.assign(sigma.size(), std::vector<arma::cx_vec>(block.ls.size()));
    for (std::size_t k = 0; k < sigma.size(); ++k)
        for (std::size_t n = 0; n < block.ls.size(); ++n)
            bank.v[k][n] = sigma[k][n] * block.ls[n];
    return bank;
}

CombinerBank dmmse_multiuser(const ChannelBlock& block, const StatMatrices& stat,
                             const CoefficientTable& beta) {
    const int K = stat.num_ue, N = stat.num_bs;
    if (K < 2) throw std::invalid_argument("dmmse_multiuser: needs at least two UEs");

    // [B]_{l j} = sum_n beta_{j l}^n, i.e. the transpose of the sum table.
    const arma::cx_mat B = beta.sums.st();
    const arma::cx_mat loaded = B + (1.0 / static_cast<double>(stat.antennas)) *
                                        arma::eye<arma::cx_mat>(K, K);
    arma::cx_mat coeff;
    if (!arma::solve(coeff, loaded, arma::eye<arma::cx_mat>(K, K)))
        throw std::runtime_error("dmmse_multiuser: coefficient system is singular");

    CombinerBank bank;
    bank.scheme = Scheme::DMMSE;
    bank.v.assign(K, std::vector<arma::cx_vec>(N));
    for (int k = 0; k < K; ++k) {
        for (int n = 0; n < N; ++n) {
            arma::cx_vec mix(stat.antennas, arma::fill::zeros);
            for (int i = 0; i < K; ++i) mix += coeff(i, k) * block.mmse[i][n];
            bank.v[k][n] = stat.Z_solver[n].solve(mix);
        }
    }
    return bank;
}

ObeMatrices obe_matrices_explicit(const CovarianceSet& cov, const StatMatrices& stat,
                                  const CoefficientTable& alpha) {
    require_two_ues(stat.num_ue, "obe_matrices_explicit");
    const double inv_m = 1.0 / static_cast<double>(stat.antennas);

    ObeMatrices obe;
    obe.W.assign(2, std::vector<arma::cx_mat>(stat.num_bs));
    for (int k = 0; k < 2; ++k) {
        const int j = 1 - k;
        const cx c = alpha.sum(k, j) / (inv_m + std::real(alpha.sum(j, j)));
        for (int n = 0; n < stat.num_bs; ++n) {
            const arma::cx_mat bracket = cov.R[k][n] - c * cov.R[j][n];
            obe.W[k][n] = stat.Q_solver[n].solve(
                arma::cx_mat(stat.Qtr_solver[n].solve(arma::cx_mat(bracket.t())).t()));
        }
    }
    return obe;
}

ObeVectorized obe_matrices_vectorized(const CovarianceSet& cov, const StatMatrices& stat,
                                      std::size_t guard) {
    require_two_ues(stat.num_ue, "obe_matrices_vectorized");
    const int N = stat.num_bs;
    const std::size_t m2 = static_cast<std::size_t>(stat.antennas) * stat.antennas;
    if (static_cast<std::size_t>(N) * m2 > guard)
        throw std::invalid_argument(
            "obe_matrices_vectorized: N*M^2 exceeds the guard; use the explicit path");

    // Per-BS solutions U^{-1} r_k via the Kronecker inversion identity.
    std::vector<std::array<arma::cx_mat, 2>> Uinv_R(N);
    for (int n = 0; n < N; ++n)
        for (int k = 0; k < 2; ++k)
            Uinv_R[n][k] = kron_inverse_apply(stat.Q_solver[n], stat.Qtr_solver[n], cov.R[k][n]);

    // Network scalars r_j^H U^{-1} r_k = sum_n tr(R_j (U^{-1}r_k)_mat).
    arma::cx_mat g(2, 2, arma::fill::zeros);
    for (int n = 0; n < N; ++n)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k)
                g(j, k) += arma::accu(arma::conj(cov.R[j][n]) % Uinv_R[n][k]);

    ObeVectorized out;
    out.mats.W.assign(2, std::vector<arma::cx_mat>(N));
    out.w_stacked.resize(2);
    for (int k = 0; k < 2; ++k) {
        const int j = 1 - k;
        // w_k = U^{-1} r_k - U^{-1} r_j (r_j^H U^{-1} r_k) / (1 + r_j^H U^{-1} r_j)
        const cx c = g(j, k) / (1.0 + std::real(g(j, j)));
        arma::cx_vec w(static_cast<arma::uword>(N) * m2);
        for (int n = 0; n < N; ++n) {
            const arma::cx_mat Wn = Uinv_R[n][k] - c * Uinv_R[n][j];
            out.mats.W[k][n] = Wn;
            w.subvec(static_cast<arma::uword>(n) * m2, (static_cast<arma::uword>(n) + 1) * m2 - 1) =
                arma::vectorise(Wn);
        }
        out.w_stacked[k] = std::move(w);
    }
    return out;
}

CombinerBank obe_combiner(const ObeMatrices& obe, const ChannelBlock& block) {
    CombinerBank bank;
    bank.scheme = Scheme::OBE_EQ6;
    bank.v.assign(obe.W.size(), std::vector<arma::cx_vec>(block.ls.size()));
    for (std::size_t k = 0; k < obe.W.size(); ++k)
        for (std::size_t n = 0; n < block.ls.size(); ++n)
            bank.v[k][n] = obe.W[k][n] * block.ls[n];
    return bank;
}

}  // namespace dmimo
