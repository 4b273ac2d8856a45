// SPDX-License-Identifier: Apache-2.0
//
// dmimo — uplink combining and spectral-efficiency simulator for
// distributed massive MIMO under pilot contamination
// Copyright (C) 2026 dmimo contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0

#include "dmimo/asymptotics.hpp"

#include <cmath>
#include <stdexcept>

namespace dmimo {

namespace {

struct PairSums {
    double norm_pinned_sq = 0.0;  // ||R_pinned||_F^2
    double norm_free_sq = 0.0;    // ||R_free||_F^2
    double cross = 0.0;           // tr(R_pinned R_free), real for Hermitian pairs
    double dim = 0.0;             // per-BS antenna count M
};

AssumptionMetric minimize(const PairSums& s) {
    AssumptionMetric m;
    if (s.norm_free_sq == 0.0) {
        m.lambda_star = 0.0;
        m.value = s.norm_pinned_sq / s.dim;
        return m;
    }
    // f(lambda) = ||R_p||^2 + 2 lambda tr(R_p R_f) + lambda^2 ||R_f||^2
    m.lambda_star = -s.cross / s.norm_free_sq;
    const double min_val = s.norm_pinned_sq - s.cross * s.cross / s.norm_free_sq;
    m.value = std::max(0.0, min_val) / s.dim;
    return m;
}

void accumulate(PairSums& s, const arma::cx_mat& R_a, const arma::cx_mat& R_b,
                int pinned_index) {
    if (R_a.n_rows != R_b.n_rows || R_a.n_cols != R_b.n_cols)
        throw std::invalid_argument("assumption_metric: dimension mismatch");
    const arma::cx_mat& pinned = (pinned_index == 1) ? R_a : R_b;
    const arma::cx_mat& free_m = (pinned_index == 1) ? R_b : R_a;
    const double na = arma::norm(pinned, "fro");
    const double nb = arma::norm(free_m, "fro");
    s.norm_pinned_sq += na * na;
    s.norm_free_sq += nb * nb;
    s.cross += std::real(arma::accu(pinned % arma::conj(free_m)));  // tr(R_p R_f)
    s.dim = static_cast<double>(R_a.n_rows);
}

}  // namespace

AssumptionMetric assumption_metric(const arma::cx_mat& R_a, const arma::cx_mat& R_b,
                                   int pinned_index) {
    if (pinned_index != 1 && pinned_index != 2)
        throw std::invalid_argument("assumption_metric: pinned_index must be 1 or 2");
    PairSums s;
    accumulate(s, R_a, R_b, pinned_index);
    return minimize(s);
}

AssumptionMetric assumption_metric_global(const std::vector<arma::cx_mat>& R_a,
                                          const std::vector<arma::cx_mat>& R_b,
                                          int pinned_index) {
    if (pinned_index != 1 && pinned_index != 2)
        throw std::invalid_argument("assumption_metric: pinned_index must be 1 or 2");
    if (R_a.size() != R_b.size() || R_a.empty())
        throw std::invalid_argument("assumption_metric_global: block count mismatch");
    PairSums s;
    for (std::size_t n = 0; n < R_a.size(); ++n) accumulate(s, R_a[n], R_b[n], pinned_index);
    return minimize(s);
}

double asymptotic_sinr_mmse(const CoefficientTable& beta, int ue) {
    if (beta.sums.n_rows != 2)
        throw std::invalid_argument("asymptotic_sinr_mmse: requires exactly two UEs");
    const int j = 1 - ue;
    const double direct = std::real(beta.sum(ue, ue));
    const double other = std::real(beta.sum(j, j));
    if (other <= 0.0) return direct;  // interfering covariances vanish
    return direct - std::norm(beta.sum(ue, j)) / other;
}

GrowthReport growth_diagnostic(const std::vector<int>& m_values,
                               const std::vector<double>& mean_sinr,
                               const std::vector<double>& se) {
    const std::size_t n = m_values.size();
    if (n < 3 || mean_sinr.size() != n || se.size() != n)
        throw std::invalid_argument("growth_diagnostic: need at least three grid points");
    for (std::size_t i = 1; i < n; ++i)
        if (m_values[i] <= m_values[i - 1])
            throw std::invalid_argument("growth_diagnostic: M grid must be increasing");

    auto ls_slope = [n](const std::vector<double>& x, const std::vector<double>& y) {
        double mx = 0, my = 0;
        for (std::size_t i = 0; i < n; ++i) {
            mx += x[i];
            my += y[i];
        }
        mx /= double(n);
        my /= double(n);
        double sxx = 0, sxy = 0;
        for (std::size_t i = 0; i < n; ++i) {
            sxx += (x[i] - mx) * (x[i] - mx);
            sxy += (x[i] - mx) * (y[i] - my);
        }
        return sxy / sxx;
    };

    std::vector<double> m_lin(n), m_log(n);
    for (std::size_t i = 0; i < n; ++i) {
        m_lin[i] = static_cast<double>(m_values[i]);
        m_log[i] = std::log2(m_lin[i]);
    }

    GrowthReport r;
    r.sinr_slope_per_antenna = ls_slope(m_lin, mean_sinr);
    r.se_slope_per_doubling = ls_slope(m_log, se);
    r.growing = r.se_slope_per_doubling > 0.05;
    return r;
}

AppendixDiagnostic normalized_uatf_diagnostic(const CoefficientTable& alpha_single_q,
                                              int antennas, int num_bs) {
    AppendixDiagnostic d;
    d.per_bs_gap.resize(num_bs);
    for (int n = 0; n < num_bs; ++n) {
        const double a11 = std::real(alpha_single_q.per_bs(0, 0, n));
        const double a22 = std::real(alpha_single_q.per_bs(1, 1, n));
        const double a12_sq = std::norm(alpha_single_q.per_bs(0, 1, n));
        if (a22 <= 0.0) {
            if (a12_sq > 0.0) d.consistent = false;
            d.per_bs_gap[n] = a11;
        } else {
            d.per_bs_gap[n] = a11 - a12_sq / a22;
        }
        d.value += d.per_bs_gap[n];
    }
    d.value *= static_cast<double>(antennas) / static_cast<double>(num_bs);
    return d;
}

ComplexityCount complexity_count(Scheme scheme, int num_bs, int antennas, int tau_p) {
    if (num_bs < 1 || antennas < 1 || tau_p < 1)
        throw std::invalid_argument("complexity_count: dimensions must be positive");
    const long long N = num_bs, M = antennas, Tp = tau_p;
    const long long MN = M * N;

    ComplexityCount c;
    c.scheme = scheme;
    switch (scheme) {
        case Scheme::MMSE:
            c.estimation_mults = N * M * Tp + 2 * MN * MN;
            c.combiner_mults = 3 * MN * MN + MN + (MN * MN * MN - MN) / 3;
            break;
        case Scheme::DMMSE:
        case Scheme::OBE_EQ6:
        case Scheme::OBE_UATF:
            c.estimation_mults = N * M * Tp;
            c.combiner_mults = 2 * N * M * M;
            break;
        case Scheme::MR:
            // not part of the published cost table; counted as the LS
            // estimation cost with no combiner computation
            c.estimation_mults = N * M * Tp;
            c.combiner_mults = 0;
            break;
    }
    return c;
}

}  // namespace dmimo
