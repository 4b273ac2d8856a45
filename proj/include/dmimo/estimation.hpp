// SPDX-License-Identifier: Apache-2.0
//
// dmimo — uplink combining and spectral-efficiency simulator for
// distributed massive MIMO under pilot contamination
// Copyright (C) 2026 dmimo contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0

#ifndef DMIMO_ESTIMATION_HPP
#define DMIMO_ESTIMATION_HPP

#include "dmimo/linalg.hpp"
#include "dmimo/rng.hpp"
#include "dmimo/types.hpp"

namespace dmimo {

/// Statistical matrices shared by all combining schemes, per BS:
///   Qtr = sum_k R_k + (1/rho_tr) I   (pilot-phase covariance)
///   Q   = sum_k R_k + (1/rho)    I   (data-phase covariance)
///   Z   = sum_k (R_k - R_k Qtr^{-1} R_k) + (1/rho) I
/// All are Hermitian positive definite; solvers are cached, and the MMSE
/// filter R_k Qtr^{-1} is precomputed once per covariance set.
struct StatMatrices {
    std::vector<arma::cx_mat> Qtr, Q, Z;
    std::vector<HpdSolver> Qtr_solver, Q_solver, Z_solver;
    std::vector<std::vector<arma::cx_mat>> mmse_filter;  // [ue][bs] = R_k Qtr^{-1}
    double rho = 0.0;
    double rho_tr = 0.0;
    int num_ue = 0, num_bs = 0, antennas = 0;
};

StatMatrices compute_stat_matrices(const CovarianceSet& cov, double rho, double rho_tr);

/// Draws correlated Rayleigh channels h_k^n ~ CN(0, R_k^n), independent
/// across UEs and BSs. Factorizations are Cholesky with an eigenvalue
/// fallback for singular PSD covariances; eigenvalues below
/// -1e-10 * tr(R)/M are a hard error, small negatives are clipped to zero.
class ChannelSampler {
  public:
    explicit ChannelSampler(const CovarianceSet& cov);

    /// h[ue][bs] for one coherence block.
    std::vector<std::vector<arma::cx_vec>> sample(std::uint64_t seed, std::uint32_t drop,
                                                  std::uint32_t block) const;

    const arma::cx_mat& factor(int ue, int bs) const { return factor_[ue][bs]; }

  private:
    std::vector<std::vector<arma::cx_mat>> factor_;  // [ue][bs], R = L L^H
};

/// One coherence block: true channels, the despread pilot observation
/// (normalized LS estimate) and the MMSE estimates.
///
/// Normalization: pilot symbols are sent at the per-symbol SNR rho, so
/// despreading the tau_p pilot copies yields the effective pilot SNR
/// rho_tr = rho * tau_p and the LS estimate is exactly
///   ls = sum_k h_k + w,   w ~ CN(0, (1/rho_tr) I).
struct ChannelBlock {
    std::vector<std::vector<arma::cx_vec>> h;     // [ue][bs]
    std::vector<arma::cx_vec> ls;                 // [bs]
    std::vector<std::vector<arma::cx_vec>> mmse;  // [ue][bs]
};

/// Full pilot phase: Y^n = sqrt(rho_tr/tau_p) (sum_k h_k^n) phi^T + N^n with
/// phi the all-ones pilot (||phi||^2 = tau_p) and unit-variance noise.
/// Returns one M x tau_p observation per BS.
std::vector<arma::cx_mat> pilot_observation(
    const std::vector<std::vector<arma::cx_vec>>& h, int tau_p, double rho_tr,
    std::uint64_t seed, std::uint32_t drop, std::uint32_t block);

/// LS channel estimate: despread and normalized so that the noiseless value
/// is sum_k h_k, i.e. ls^n = Y^n phi* / sqrt(rho_tr * tau_p).
std::vector<arma::cx_vec> ls_estimate(const std::vector<arma::cx_mat>& Y, int tau_p,
                                      double rho_tr);

/// MMSE estimates from the LS input: hhat_k^n = R_k^n (Qtr^n)^{-1} ls^n,
/// using the cached per-BS filter.
std::vector<std::vector<arma::cx_vec>> mmse_estimate(const std::vector<arma::cx_vec>& ls,
                                                     const StatMatrices& stat);

/// Hot-path block draw. The pilot noise is sampled directly in despread form
/// (w ~ CN(0, (1/rho_tr) I) per BS), which is distribution-identical to
/// running pilot_observation + ls_estimate.
ChannelBlock draw_block(const ChannelSampler& sampler, const StatMatrices& stat,
                        std::uint64_t seed, std::uint32_t drop, std::uint32_t block);

}  // namespace dmimo

#endif  // DMIMO_ESTIMATION_HPP
