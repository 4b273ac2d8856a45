// SPDX-License-Identifier: Apache-2.0
//
// dmimo — uplink combining and spectral-efficiency simulator for
// distributed massive MIMO under pilot contamination
// Copyright (C) 2026 dmimo contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0

#include "dmimo/selfcheck.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "dmimo/asymptotics.hpp"
#include "dmimo/covariance.hpp"
#include "dmimo/montecarlo.hpp"

namespace dmimo {

namespace {

/// Random exponential-model covariance pair on a random instance.
CovarianceSet random_cov(Rng& rng, int antennas, int num_bs) {
    CovarianceSet cov;
    cov.num_ue = 2;
    cov.num_bs = num_bs;
    cov.antennas = antennas;
    cov.R.assign(2, std::vector<arma::cx_mat>(num_bs));
    cov.large_scale.set_size(2, num_bs);
    cov.aoa.set_size(2, num_bs);
    for (int k = 0; k < 2; ++k) {
        for (int n = 0; n < num_bs; ++n) {
            const double varsigma = 0.1 + 4.0 * rng.uniform();
            const double r = 0.8 * rng.uniform();
            const double theta = (2.0 * rng.uniform() - 1.0) * 3.14159265358979;
            cov.large_scale(k, n) = varsigma;
            cov.aoa(k, n) = theta;
            cov.R[k][n] = exponential_covariance(antennas, varsigma, r, theta);
        }
    }
    return cov;
}

double rel_diff(double a, double b) {
    const double scale = std::max(std::abs(a), std::abs(b));
    return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

ChannelBlock random_block(const CovarianceSet& cov, const StatMatrices& stat,
                          std::uint64_t seed, std::uint32_t index) {
    const ChannelSampler sampler(cov);
    return draw_block(sampler, stat, seed, /*drop=*/index, /*block=*/0);
}

}  // namespace

std::vector<CheckResult> run_self_checks(std::uint64_t seed, int instances) {
    std::vector<CheckResult> out;
    Rng rng(seed, StreamKind::Check);

    auto record = [&](const std::string& name, bool pass, double worst, const char* what) {
        std::ostringstream detail;
        detail << what << " = " << worst << " over " << instances << " instances";
        out.push_back({name, pass, detail.str()});
    };

    // Three-way UatF SINR agreement: trace form at the explicit W,
    // vectorized quadratic form, closed form.
    {
        double worst = 0.0;
        for (int i = 0; i < instances; ++i) {
            const int m = 2 + static_cast<int>(rng.uniform() * 7);
            const int n = 1 + static_cast<int>(rng.uniform() * 4);
            const CovarianceSet cov = random_cov(rng, m, n);
            const double rho = 0.5 + 4.0 * rng.uniform();
            const StatMatrices stat = compute_stat_matrices(cov, rho, rho * 10.0);
            const CoefficientTable alpha = compute_alpha_table(cov, stat);
            const ObeMatrices obe = obe_matrices_explicit(cov, stat, alpha);
            const ObeVectorized vec = obe_matrices_vectorized(cov, stat);
            for (int ue = 0; ue < 2; ++ue) {
                const double g1 = uatf_sinr_general(obe.W[ue], cov, stat, ue);
                const double g2 = uatf_sinr_optimal(alpha, m, ue).gamma;
                const double g3 = uatf_sinr_general(vec.mats.W[ue], cov, stat, ue);
                worst = std::max({worst, rel_diff(g1, g2), rel_diff(g2, g3)});
            }
        }
        record("uatf-three-way", worst < 1e-10, worst, "max relative difference");
    }

    // OBE dual-path collinearity with positive inner product.
    {
        double worst = 1.0;
        bool positive = true;
        for (int i = 0; i < instances; ++i) {
            const int m = 2 + static_cast<int>(rng.uniform() * 7);
            const int n = 1 + static_cast<int>(rng.uniform() * 3);
            const CovarianceSet cov = random_cov(rng, m, n);
            const StatMatrices stat = compute_stat_matrices(cov, 2.0, 20.0);
            const CoefficientTable alpha = compute_alpha_table(cov, stat);
            const ObeMatrices expl = obe_matrices_explicit(cov, stat, alpha);
            const ObeVectorized vec = obe_matrices_vectorized(cov, stat);
            for (int ue = 0; ue < 2; ++ue) {
                arma::cx_vec a(vec.w_stacked[ue].n_elem), b = vec.w_stacked[ue];
                arma::uword off = 0;
                for (int bs = 0; bs < n; ++bs) {
                    a.subvec(off, off + m * m - 1) = arma::vectorise(expl.W[ue][bs]);
                    off += m * m;
                }
                const cx inner = arma::cdot(a, b);
                const double cosine =
                    std::abs(inner) / (arma::norm(a) * arma::norm(b));
                worst = std::min(worst, cosine);
                positive = positive && std::real(inner) > 0.0;
            }
        }
        record("obe-collinearity", worst >= 1.0 - 1e-9 && positive, worst, "min |cosine|");
    }

    // MMSE combining maximizes the instantaneous SINR.
    {
        double worst = -1.0;
        for (int i = 0; i < instances; ++i) {
            const CovarianceSet cov = random_cov(rng, 6, 2);
            const StatMatrices stat = compute_stat_matrices(cov, 2.0, 20.0);
            const ChannelBlock block = random_block(cov, stat, seed ^ 0xABCD, i);
            const CombinerBank best = mmse_combiner_global(block, stat);
            const double g_best = instantaneous_sinr(best, block, stat, 0);
            for (int trial = 0; trial < 20; ++trial) {
                CombinerBank pert = best;
                for (int bs = 0; bs < 2; ++bs) {
                    arma::cx_vec d(6);
                    for (int e = 0; e < 6; ++e) d(e) = rng.cgaussian();
                    pert.v[0][bs] += 1e-3 * arma::norm(pert.v[0][bs]) / arma::norm(d) * d;
                }
                const double g = instantaneous_sinr(pert, block, stat, 0);
                worst = std::max(worst, (g - g_best) / g_best);
            }
        }
        record("mmse-optimality", worst <= 1e-8, worst, "max SINR excess of perturbations");
    }

    // Dual-path D-MMSE (estimate form vs LS form) and OBE combiner identity.
    {
        double worst = 0.0;
        for (int i = 0; i < instances; ++i) {
            const CovarianceSet cov = random_cov(rng, 5, 3);
            const StatMatrices stat = compute_stat_matrices(cov, 1.5, 15.0);
            const CoefficientTable beta = compute_beta_table(cov, stat);
            const CoefficientTable alpha = compute_alpha_table(cov, stat);
            const ChannelBlock block = random_block(cov, stat, seed ^ 0x1234, i);

            const CombinerBank direct = dmmse_combiner(block, stat, beta);
            const CombinerBank via_ls =
                dmmse_combiner_ls(block, dmmse_sigma_matrices(cov, stat, beta));
            const ObeMatrices obe = obe_matrices_explicit(cov, stat, alpha);
            const CombinerBank obe_ls = obe_combiner(obe, block);
            const double inv_m = 1.0 / 5.0;
            for (int ue = 0; ue < 2; ++ue) {
                const int j = 1 - ue;
                const cx c = alpha.sum(ue, j) / (inv_m + std::real(alpha.sum(j, j)));
                for (int bs = 0; bs < 3; ++bs) {
                    worst = std::max(worst, arma::norm(direct.v[ue][bs] - via_ls.v[ue][bs]) /
                                                arma::norm(direct.v[ue][bs]));
                    // v = Q^{-1}(hhat_k - c hhat_j), the estimate-domain identity
                    const arma::cx_vec alt = stat.Q_solver[bs].solve(
                        arma::cx_vec(block.mmse[ue][bs] - c * block.mmse[j][bs]));
                    worst = std::max(worst, arma::norm(obe_ls.v[ue][bs] - alt) /
                                                arma::norm(alt));
                }
            }
        }
        record("dual-path-identities", worst < 1e-10, worst, "max relative deviation");
    }

    // Scale invariance of both SINR functionals.
    {
        double worst = 0.0;
        for (int i = 0; i < instances; ++i) {
            const CovarianceSet cov = random_cov(rng, 4, 2);
            const StatMatrices stat = compute_stat_matrices(cov, 2.0, 8.0);
            const CoefficientTable alpha = compute_alpha_table(cov, stat);
            const ChannelBlock block = random_block(cov, stat, seed ^ 0x77, i);
            CombinerBank bank = mmse_combiner_global(block, stat);
            const double g0 = instantaneous_sinr(bank, block, stat, 0);
            const cx scale(-1.7, 4.2);
            for (auto& v : bank.v[0]) v *= scale;
            const double g1 = instantaneous_sinr(bank, block, stat, 0);
            worst = std::max(worst, rel_diff(g0, g1));

            ObeMatrices obe = obe_matrices_explicit(cov, stat, alpha);
            const double u0 = uatf_sinr_general(obe.W[0], cov, stat, 0);
            for (auto& W : obe.W[0]) W *= scale;
            const double u1 = uatf_sinr_general(obe.W[0], cov, stat, 0);
            worst = std::max(worst, rel_diff(u0, u1));
        }
        record("sinr-scale-invariance", worst < 1e-10, worst, "max relative change");
    }

    // Assumption metric: closed form vs a lambda grid search.
    {
        double worst = 0.0;
        for (int i = 0; i < instances; ++i) {
            const CovarianceSet cov = random_cov(rng, 6, 1);
            const AssumptionMetric m = assumption_metric(cov.R[0][0], cov.R[1][0], 1);
            double best = std::numeric_limits<double>::infinity();
            for (double lam = -10.0; lam <= 10.0; lam += 1e-3) {
                const double f =
                    std::pow(arma::norm(cov.R[0][0] + lam * cov.R[1][0], "fro"), 2) / 6.0;
                best = std::min(best, f);
            }
            worst = std::max(worst, std::abs(best - m.value));
        }
        record("assumption-metric-grid", worst < 1e-4, worst, "max |closed - grid|");
    }

    return out;
}

}  // namespace dmimo
