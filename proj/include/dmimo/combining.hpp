// SPDX-License-Identifier: Apache-2.0
//
// dmimo — uplink combining and spectral-efficiency simulator for
// distributed massive MIMO under pilot contamination
// Copyright (C) 2026 dmimo contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0

#ifndef DMIMO_COMBINING_HPP
#define DMIMO_COMBINING_HPP

#include "dmimo/estimation.hpp"
#include "dmimo/types.hpp"

namespace dmimo {

/// Normalized statistical traces driving the distributed combiners.
/// beta_jk^n = (1/M) tr(R_j Qtr^{-1} R_k Z^{-1}),
/// alpha_jk^n = (1/M) tr(R_j Qtr^{-1} R_k Q^{-1}).
/// Off-diagonal entries are complex in general with the Hermitian pairing
/// c_kj = conj(c_jk); diagonals are real and nonnegative.
struct CoefficientTable {
    arma::cx_cube per_bs;  // K x K x N
    arma::cx_mat sums;     // K x K, summed over BSs

    cx sum(int j, int k) const { return sums(j, k); }
};

CoefficientTable compute_beta_table(const CovarianceSet& cov, const StatMatrices& stat);
CoefficientTable compute_alpha_table(const CovarianceSet& cov, const StatMatrices& stat);

/// Variant with both solves against Q (used by the large-N diagnostic,
/// where pilot and data SNR are not distinguished). Entries are real.
CoefficientTable compute_alpha_table_single_q(const CovarianceSet& cov,
                                              const StatMatrices& stat);

/// Per-UE, per-BS combining vectors of one scheme on one block.
struct CombinerBank {
    Scheme scheme = Scheme::MR;
    std::vector<std::vector<arma::cx_vec>> v;  // [ue][bs]
};

/// MR: v_k^n = hhat_k^n.
CombinerBank mr_combiner(const ChannelBlock& block);

/// Global MMSE combining, v_k = (hhat_j hhat_j^H + Z)^{-1} hhat_k over the
/// stacked network vectors, computed without the NM x NM inverse: a rank-one
/// matrix-inversion-lemma update over the block-diagonal Z (per-BS solves
/// plus one network scalar). Requires K = 2.
CombinerBank mmse_combiner_global(const ChannelBlock& block, const StatMatrices& stat);

/// D-MMSE: v_k^n = (Z^n)^{-1} (hhat_k^n - c_k hhat_j^n) with
/// c_k = sum_i beta_kj^i / (1/M + sum_i beta_jj^i). Requires K = 2.
CombinerBank dmmse_combiner(const ChannelBlock& block, const StatMatrices& stat,
                            const CoefficientTable& beta);

/// D-MMSE through its LS-input form v_k^n = Sigma_k^n ls^n with
/// Sigma_k^n = (Z^n)^{-1} (R_k - c_k R_j) (Qtr^n)^{-1}. Numerically equal to
/// dmmse_combiner; kept as the second derivation path.
std::vector<std::vector<arma::cx_mat>> dmmse_sigma_matrices(const CovarianceSet& cov,
                                                            const StatMatrices& stat,
                                                            const CoefficientTable& beta);
CombinerBank dmmse_combiner_ls(const ChannelBlock& block,
                               const std::vector<std::vector<arma::cx_mat>>& sigma);

/// K-user D-MMSE: v_k^n = (Z^n)^{-1} sum_i c_ki hhat_i^n where the
/// coefficient vector solves (B + I/M) c_k = e_k and [B]_{lj} = sum_n beta_jl^n.
CombinerBank dmmse_multiuser(const ChannelBlock& block, const StatMatrices& stat,
                             const CoefficientTable& beta);

/// Deterministic per-BS matrices applied to the LS estimate, per UE.
struct ObeMatrices {
    std::vector<std::vector<arma::cx_mat>> W;  // [ue][bs]
};

/// Explicit OBE form: W_k^n = (Q^n)^{-1} (R_k - c_k' R_j) (Qtr^n)^{-1} with
/// c_k' = sum_i alpha_kj^i / (1/M + sum_i alpha_jj^i). Requires K = 2.
ObeMatrices obe_matrices_explicit(const CovarianceSet& cov, const StatMatrices& stat,
                                  const CoefficientTable& alpha);

/// Vectorized OBE route: stacks r_k^n = vec(R_k^n), solves
/// w_k = (r_j r_j^H + U)^{-1} r_k with U^n = (Qtr^n)^T kron Q^n through a
/// rank-one update over the block diagonal, applying U^{-1} via the
/// Kronecker inversion identity (dense U is never formed). Un-vectorizes to
/// per-BS W blocks. Serves as the independent derivation path of the
/// explicit form. Requires K = 2 and N*M^2 <= guard.
struct ObeVectorized {
    ObeMatrices mats;
    std::vector<arma::cx_vec> w_stacked;  // [ue], length N*M^2
};
ObeVectorized obe_matrices_vectorized(const CovarianceSet& cov, const StatMatrices& stat,
                                      std::size_t guard = (std::size_t{1} << 24));

/// v_k^n = W_k^n ls^n.
CombinerBank obe_combiner(const ObeMatrices& obe, const ChannelBlock& block);

}  // namespace dmimo

#endif  // DMIMO_COMBINING_HPP
