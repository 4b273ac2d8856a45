// SPDX-License-Identifier: Apache-2.0
//
// dmimo — uplink combining and spectral-efficiency simulator for
// distributed massive MIMO under pilot contamination
// Copyright (C) 2026 dmimo contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0

#ifndef DMIMO_ASYMPTOTICS_HPP
#define DMIMO_ASYMPTOTICS_HPP

#include "dmimo/combining.hpp"
#include "dmimo/types.hpp"

namespace dmimo {

/// Linear-independence measure of a covariance pair: the minimum over the
/// free lambda of (1/M) ||lambda_1 R_a + lambda_2 R_b||_F^2 with the pinned
/// lambda fixed to one. Zero exactly when the pair is collinear.
struct AssumptionMetric {
    double value = 0.0;        // minimized (1/M) ||.||_F^2
    double lambda_star = 0.0;  // minimizing free coefficient
};

/// pinned_index selects which lambda is fixed to 1 (1 = R_a side, 2 = R_b
/// side); the closed-form minimizer of the 1-D quadratic is returned.
/// If the free matrix is zero the convention is lambda* = 0.
AssumptionMetric assumption_metric(const arma::cx_mat& R_a, const arma::cx_mat& R_b,
                                   int pinned_index);

/// Same measure over the block-diagonal network covariances (sums of per-BS
/// squared norms and trace products), still normalized by the per-BS M.
AssumptionMetric assumption_metric_global(const std::vector<arma::cx_mat>& R_a,
                                          const std::vector<arma::cx_mat>& R_b,
                                          int pinned_index);

/// Almost-sure limit of gamma_k / M under global MMSE combining:
/// sum_n beta_kk^n - |sum_n beta_kj^n|^2 / sum_n beta_jj^n. If the
/// interfering covariances vanish the interference term is dropped.
/// K = 2 only.
double asymptotic_sinr_mmse(const CoefficientTable& beta, int ue);

/// Least-squares growth diagnostic over an M grid: slope of mean SINR in M
/// and of SE in log2(M). Classified as growing when the SE slope exceeds
/// 0.05 bit/s/Hz per doubling of M.
struct GrowthReport {
    double sinr_slope_per_antenna = 0.0;
    double se_slope_per_doubling = 0.0;
    bool growing = false;
};
GrowthReport growth_diagnostic(const std::vector<int>& m_values,
                               const std::vector<double>& mean_sinr,
                               const std::vector<double>& se);

/// Large-N diagnostic of the UatF SINR with per-BS statistics:
/// (M/N) sum_n (a_11^n - (a_12^n)^2 / a_22^n) where the a's are the
/// single-Q coefficient table. Gap terms with a_22^n = 0 contribute a_11^n;
/// a nonzero cross term with a zero diagonal flags inconsistent statistics.
struct AppendixDiagnostic {
    double value = 0.0;
    std::vector<double> per_bs_gap;
    bool consistent = true;
};
AppendixDiagnostic normalized_uatf_diagnostic(const CoefficientTable& alpha_single_q,
                                              int antennas, int num_bs);

/// Complex multiplications per coherence block (both UEs).
/// MR has no dedicated row in the cost model; by convention it is counted
/// as the LS estimation cost with zero combiner multiplications.
struct ComplexityCount {
    Scheme scheme = Scheme::MR;
    long long estimation_mults = 0;
    long long combiner_mults = 0;
};
ComplexityCount complexity_count(Scheme scheme, int num_bs, int antennas, int tau_p);

}  // namespace dmimo

#endif  // DMIMO_ASYMPTOTICS_HPP
