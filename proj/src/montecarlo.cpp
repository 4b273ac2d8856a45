// SPDX-License-Identifier: Apache-2.0
//
// dmimo — uplink combining and spectral-efficiency simulator for
// distributed massive MIMO under pilot contamination
// Copyright (C) 2026 dmimo contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0

#include "dmimo/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dmimo/asymptotics.hpp"

namespace dmimo {

namespace {

bool wants(const std::vector<Scheme>& schemes, Scheme s) {
    return std::find(schemes.begin(), schemes.end(), s) != schemes.end();
}

/// Everything reusable across blocks of one covariance set.
struct DropContext {
    StatMatrices stat;
    ChannelSampler sampler;
    CoefficientTable beta;
    CoefficientTable alpha;
    std::vector<std::vector<arma::cx_mat>> obe_w;  // [ue][bs]

    DropContext(const NetworkConfig& net, const CovarianceSet& cov,
                const std::vector<Scheme>& schemes)
        : stat(compute_stat_matrices(cov, net.data_snr, net.pilot_snr())), sampler(cov) {
        if (wants(schemes, Scheme::DMMSE) || wants(schemes, Scheme::MMSE))
            beta = compute_beta_table(cov, stat);
        if (wants(schemes, Scheme::OBE_EQ6) || wants(schemes, Scheme::OBE_UATF)) {
            alpha = compute_alpha_table(cov, stat);
            if (wants(schemes, Scheme::OBE_EQ6))
                obe_w = obe_matrices_explicit(cov, stat, alpha).W;
        }
    }
};

/// Per-block SINRs of the sampled schemes, all UEs, evaluated on the same
/// channel block (common random numbers across schemes). Output pointers may
/// be null for schemes that were not requested.
void evaluate_block(const DropContext& ctx, std::uint64_t seed, std::uint32_t drop,
                    std::uint32_t block_index, double* mr, double* mmse, double* dmmse,
                    double* obe) {
    const StatMatrices& st = ctx.stat;
    const int K = st.num_ue, N = st.num_bs;
    const ChannelBlock block = draw_block(ctx.sampler, st, seed, drop, block_index);

    // Shared per-BS solves t_k = Z^{-1} hhat_k and the Gram scalars
    // s(j,k) = sum_n hhat_j^H Z^{-1} hhat_k.
    arma::cx_mat s(K, K, arma::fill::zeros);
    if (mmse != nullptr || dmmse != nullptr) {
        std::vector<arma::cx_vec> t(K);
        for (int n = 0; n < N; ++n) {
            for (int k = 0; k < K; ++k) t[k] = st.Z_solver[n].solve(block.mmse[k][n]);
            for (int j = 0; j < K; ++j)
                for (int k = 0; k < K; ++k) s(j, k) += arma::cdot(block.mmse[j][n], t[k]);
        }
    }

    for (int k = 0; k < K; ++k) {
        const int j = 1 - k;  // K = 2 on this path

        if (mmse != nullptr) {
            // closed form of the SINR at the optimal combiner
            mmse[k] = std::real(s(k, k)) - std::norm(s(j, k)) / (1.0 + std::real(s(j, j)));
        }

        if (dmmse != nullptr) {
            const double inv_m = 1.0 / static_cast<double>(st.antennas);
            const cx c = ctx.beta.sum(k, j) / (inv_m + std::real(ctx.beta.sum(j, j)));
            // v = Z^{-1}(hhat_k - c hhat_j): every term of the SINR collapses
            // onto the Gram scalars, including v^H Z v
            const cx num = s(k, k) - std::conj(c) * s(j, k);
            const cx crs = s(k, j) - std::conj(c) * s(j, j);
            const double quad = std::real(s(k, k)) - 2.0 * std::real(c * s(k, j)) +
                                std::norm(c) * std::real(s(j, j));
            dmmse[k] = std::norm(num) / (std::norm(crs) + quad);
        }

        if (mr != nullptr || obe != nullptr) {
            auto sinr_of = [&](const std::vector<arma::cx_vec>& v) {
                cx sig(0, 0), crs(0, 0);
                double quad = 0.0;
                for (int n = 0; n < N; ++n) {
                    sig += arma::cdot(v[n], block.mmse[k][n]);
                    crs += arma::cdot(v[n], block.mmse[j][n]);
                    quad += std::real(arma::cdot(v[n], arma::cx_vec(st.Z[n] * v[n])));
                }
                return std::norm(sig) / (std::norm(crs) + quad);
            };
            if (mr != nullptr) mr[k] = sinr_of(block.mmse[k]);
            if (obe != nullptr) {
                std::vector<arma::cx_vec> v(N);
                for (int n = 0; n < N; ++n) v[n] = ctx.obe_w[k][n] * block.ls[n];
                obe[k] = sinr_of(v);
            }
        }
    }
}

SchemeReport make_report(Scheme scheme, int ue, const NetworkConfig& net,
                         std::vector<double>&& samples, double pred, bool keep) {
    SchemeReport r;
    r.scheme = scheme;
    r.ue = ue;
    r.blocks = samples.size();
    const SeEstimate se = se_from_sinr_samples(samples, net.pilot_length, net.coherence_block);
    r.se_mean = se.se;
    r.se_stderr = se.stderr_;
    double acc = 0.0;
    for (double g : samples) acc += g;
    r.sinr_mean = acc / static_cast<double>(samples.size());
    r.asym_pred = pred;
    if (keep) r.sinr_samples = std::move(samples);
    return r;
}

}  // namespace

std::vector<SchemeReport> monte_carlo_se(const NetworkConfig& net, const CovarianceSet& cov,
                                         const std::vector<Scheme>& schemes,
                                         const McOptions& opt) {
    if (opt.blocks < 1) throw std::invalid_argument("monte_carlo_se: blocks must be positive");
    if (schemes.empty()) throw std::invalid_argument("monte_carlo_se: no schemes requested");
    if (cov.num_ue != 2)
        throw std::invalid_argument("monte_carlo_se: pair evaluation requires two UEs");

    const DropContext ctx(net, cov, schemes);
    const int K = cov.num_ue;
    const int B = opt.blocks;
    const double nan = std::numeric_limits<double>::quiet_NaN();

    const bool do_mr = wants(schemes, Scheme::MR);
    const bool do_mmse = wants(schemes, Scheme::MMSE);
    const bool do_dmmse = wants(schemes, Scheme::DMMSE);
    const bool do_obe6 = wants(schemes, Scheme::OBE_EQ6);
    const bool sampling = do_mr || do_mmse || do_dmmse || do_obe6;

    // one slot per (block, ue); reduced in block order afterwards
    arma::mat g_mr(B, K), g_mmse(B, K), g_dmmse(B, K), g_obe(B, K);

    auto run_block = [&](int b) {
        std::vector<double> mr(K), mmse(K), dmmse(K), obe(K);
        evaluate_block(ctx, net.rng_seed, opt.drop_index, static_cast<std::uint32_t>(b),
                       do_mr ? mr.data() : nullptr, do_mmse ? mmse.data() : nullptr,
                       do_dmmse ? dmmse.data() : nullptr, do_obe6 ? obe.data() : nullptr);
        for (int k = 0; k < K; ++k) {
            if (do_mr) g_mr(b, k) = mr[k];
            if (do_mmse) g_mmse(b, k) = mmse[k];
            if (do_dmmse) g_dmmse(b, k) = dmmse[k];
            if (do_obe6) g_obe(b, k) = obe[k];
        }
    };

    if (sampling) {
        if (opt.policy == ExecPolicy::OpenMP) {
#pragma omp parallel for schedule(dynamic)
            for (int b = 0; b < B; ++b) run_block(b);
        } else {
            for (int b = 0; b < B; ++b) run_block(b);
        }
    }

    std::vector<SchemeReport> reports;
    for (Scheme scheme : schemes) {
        for (int k = 0; k < K; ++k) {
            if (scheme == Scheme::OBE_UATF) {
                // closed-form statistics only; no channel samples involved
                const UatfOptimal u = uatf_sinr_optimal(ctx.alpha, ctx.stat.antennas, k);
                SchemeReport r;
                r.scheme = scheme;
                r.ue = k;
                r.se_mean = se_from_uatf(u.gamma, net.pilot_length, net.coherence_block);
                r.se_stderr = 0.0;
                r.sinr_mean = u.gamma;
                r.asym_pred = u.gamma;
                r.blocks = 0;
                reports.push_back(std::move(r));
                continue;
            }
            const arma::mat* src = nullptr;
            double pred = nan;
            switch (scheme) {
                case Scheme::MR: src = &g_mr; break;
                case Scheme::MMSE:
                case Scheme::DMMSE:
                    src = (scheme == Scheme::MMSE) ? &g_mmse : &g_dmmse;
                    pred = static_cast<double>(ctx.stat.antennas) *
                           asymptotic_sinr_mmse(ctx.beta, k);
                    break;
                case Scheme::OBE_EQ6: src = &g_obe; break;
                default: break;
            }
            std::vector<double> samples(B);
            for (int b = 0; b < B; ++b) samples[b] = (*src)(b, k);
            reports.push_back(
                make_report(scheme, k, net, std::move(samples), pred, opt.keep_samples));
        }
    }
    return reports;
}

}  // namespace dmimo
