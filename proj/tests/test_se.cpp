// SPDX-License-Identifier: Apache-2.0
//
// dmimo — uplink combining and spectral-efficiency simulator for
// distributed massive MIMO under pilot contamination
// Copyright (C) 2026 dmimo contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0

#include <doctest.h>

#include <cmath>

#include "dmimo/covariance.hpp"
#include "dmimo/montecarlo.hpp"

using namespace dmimo;

namespace {

CovarianceSet make_cov(const std::vector<arma::cx_mat>& R1_blocks,
                       const std::vector<arma::cx_mat>& R2_blocks) {
    CovarianceSet cov;
    cov.num_ue = 2;
    cov.num_bs = static_cast<int>(R1_blocks.size());
    cov.antennas = static_cast<int>(R1_blocks[0].n_rows);
    cov.R = {R1_blocks, R2_blocks};
    cov.large_scale.ones(2, cov.num_bs);
    cov.aoa.zeros(2, cov.num_bs);
    return cov;
}

CovarianceSet random_exp_cov(Rng& rng, int antennas, int num_bs) {
    std::vector<arma::cx_mat> a, b;
    for (int n = 0; n < num_bs; ++n) {
        a.push_back(exponential_covariance(antennas, 0.2 + 3.0 * rng.uniform(),
                                           0.85 * rng.uniform(),
                                           (2 * rng.uniform() - 1) * 3.1415));
        b.push_back(exponential_covariance(antennas, 0.2 + 3.0 * rng.uniform(),
                                           0.85 * rng.uniform(),
                                           (2 * rng.uniform() - 1) * 3.1415));
    }
    return make_cov(a, b);
}

}  // namespace

TEST_CASE("instantaneous SINR: hand-built block") {
    // Z = I (zero covariances, rho = 1), injected estimates, v = hhat_1:
    // gamma = ||hhat_1||^2 when the contaminating estimate is zero
    CovarianceSet cov = make_cov({arma::cx_mat(2, 2, arma::fill::zeros)},
                                 {arma::cx_mat(2, 2, arma::fill::zeros)});
    const StatMatrices stat = compute_stat_matrices(cov, 1.0, 1.0);

    ChannelBlock blk;
    blk.mmse.assign(2, std::vector<arma::cx_vec>(1));
    blk.mmse[0][0] = arma::cx_vec{cx(1.0, 0.0), cx(0.0, 2.0)};
    blk.mmse[1][0] = arma::cx_vec{cx(0.0, 0.0), cx(0.0, 0.0)};
    blk.h = blk.mmse;
    blk.ls = {blk.mmse[0][0]};

    CombinerBank bank;
    bank.v.assign(2, std::vector<arma::cx_vec>(1));
    bank.v[0][0] = blk.mmse[0][0];
    bank.v[1][0] = blk.mmse[1][0];
    CHECK(instantaneous_sinr(bank, blk, stat, 0) == doctest::Approx(5.0));

    // scaling the combiner by 5i changes nothing
    bank.v[0][0] *= cx(0.0, 5.0);
    CHECK(instantaneous_sinr(bank, blk, stat, 0) == doctest::Approx(5.0));
}

TEST_CASE("SINR at the optimal combiner equals the closed form") {
    Rng rng(101, StreamKind::Check);
    for (int i = 0; i < 20; ++i) {
        const CovarianceSet cov = random_exp_cov(rng, 4, 2);
        const StatMatrices stat = compute_stat_matrices(cov, 2.0, 12.0);
        const ChannelSampler sampler(cov);
        const ChannelBlock blk = draw_block(sampler, stat, 103, i, 0);
        const CombinerBank bank = mmse_combiner_global(blk, stat);
        for (int ue = 0; ue < 2; ++ue) {
            const double via_eq7 = instantaneous_sinr(bank, blk, stat, ue);
            const double closed = mmse_sinr_closed_form(blk, stat, ue);
            CHECK(std::abs(via_eq7 - closed) <= 1e-10 * closed);
        }
    }
}

TEST_CASE("SE from SINR samples") {
    CHECK(se_from_sinr_samples(std::vector<double>(8, 1.0), 10, 200).se ==
          doctest::Approx(0.95));
    CHECK(se_from_sinr_samples({0.0, 0.0}, 10, 200).se == doctest::Approx(0.0));
    CHECK(se_from_sinr_samples({1.0, 3.0}, 0, 200).se == doctest::Approx(1.5));
    CHECK_THROWS_AS(se_from_sinr_samples({}, 10, 200), std::invalid_argument);

    // doubling tau_c rescales by the exact prefactor ratio
    const std::vector<double> g = {0.5, 2.5, 4.0};
    const double a = se_from_sinr_samples(g, 10, 200).se;
    const double b = se_from_sinr_samples(g, 10, 400).se;
    CHECK(b / a == doctest::Approx((1.0 - 10.0 / 400.0) / (1.0 - 10.0 / 200.0)));
}

TEST_CASE("UatF SINR: scalar substitution") {
    // all scalars one, rho = rho_tr = 1, W = 1:
    // numerator 1, interference 1, quadratic term tr(1*3*1*3) = 9
    const arma::cx_mat one(1, 1, arma::fill::ones);
    const CovarianceSet cov = make_cov({one}, {one});
    const StatMatrices stat = compute_stat_matrices(cov, 1.0, 1.0);
    const std::vector<arma::cx_mat> W = {one};
    CHECK(uatf_sinr_general(W, cov, stat, 0) == doctest::Approx(0.1));
    CHECK_THROWS_AS(uatf_sinr_general({arma::cx_mat(1, 1, arma::fill::zeros)}, cov, stat, 0),
                    std::invalid_argument);
}

TEST_CASE("UatF SINR is scale invariant") {
    Rng rng(107, StreamKind::Check);
    const CovarianceSet cov = random_exp_cov(rng, 3, 2);
    const StatMatrices stat = compute_stat_matrices(cov, 1.5, 6.0);
    const CoefficientTable alpha = compute_alpha_table(cov, stat);
    ObeMatrices obe = obe_matrices_explicit(cov, stat, alpha);
    const double g0 = uatf_sinr_general(obe.W[0], cov, stat, 0);
    for (auto& W : obe.W[0]) W *= cx(2.5, -3.5);
    const double g1 = uatf_sinr_general(obe.W[0], cov, stat, 0);
    CHECK(g1 == doctest::Approx(g0).epsilon(1e-10));
}

TEST_CASE("UatF at MR weights agrees with an empirical bound estimate") {
    // batch-mean oracle built from sampled blocks: numerator |E{v^H h_1}|^2,
    // denominator E{|v^H h_2|^2} + Var(v^H h_1) + (1/rho) E{||v||^2}
    Rng rng(109, StreamKind::Check);
    const CovarianceSet cov = random_exp_cov(rng, 2, 1);
    const double rho = 2.0, rho_tr = 10.0;
    const StatMatrices stat = compute_stat_matrices(cov, rho, rho_tr);
    const ChannelSampler sampler(cov);

    std::vector<arma::cx_mat> W_mr = {stat.mmse_filter[0][0]};
    const double closed = uatf_sinr_general(W_mr, cov, stat, 0);

    const int batches = 16, per_batch = 8000;
    std::vector<double> batch_gamma;
    for (int bb = 0; bb < batches; ++bb) {
        cx mean_s1(0, 0);
        double e_s1_sq = 0, e_s2_sq = 0, e_vnorm = 0;
        for (int i = 0; i < per_batch; ++i) {
            const ChannelBlock blk =
                draw_block(sampler, stat, 113, bb, i);
            const arma::cx_vec v = W_mr[0] * blk.ls[0];
            const cx s1 = arma::cdot(v, blk.h[0][0]);
            const cx s2 = arma::cdot(v, blk.h[1][0]);
            mean_s1 += s1;
            e_s1_sq += std::norm(s1);
            e_s2_sq += std::norm(s2);
            e_vnorm += std::pow(arma::norm(v), 2);
        }
        mean_s1 /= double(per_batch);
        e_s1_sq /= double(per_batch);
        e_s2_sq /= double(per_batch);
        e_vnorm /= double(per_batch);
        const double denom =
            e_s2_sq + (e_s1_sq - std::norm(mean_s1)) + e_vnorm / rho;
        batch_gamma.push_back(std::norm(mean_s1) / denom);
    }
    double mean = 0;
    for (double g : batch_gamma) mean += g;
    mean /= batches;
    double var = 0;
    for (double g : batch_gamma) var += (g - mean) * (g - mean);
    const double se = std::sqrt(var / (batches - 1) / batches);
    CHECK(std::abs(mean - closed) < 3.0 * se + 0.01 * closed);
}

TEST_CASE("optimal UatF SINR: three-way consistency and collinear limit") {
    Rng rng(127, StreamKind::Check);

    SUBCASE("closed form equals the trace form at the optimizing W") {
        for (int i = 0; i < 10; ++i) {
            const CovarianceSet cov = random_exp_cov(rng, 5, 3);
            const StatMatrices stat = compute_stat_matrices(cov, 1.8, 12.6);
            const CoefficientTable alpha = compute_alpha_table(cov, stat);
            const ObeMatrices obe = obe_matrices_explicit(cov, stat, alpha);
            const ObeVectorized vec = obe_matrices_vectorized(cov, stat);
            for (int ue = 0; ue < 2; ++ue) {
                const double closed = uatf_sinr_optimal(alpha, 5, ue).gamma;
                const double at_expl = uatf_sinr_general(obe.W[ue], cov, stat, ue);
                const double at_vec = uatf_sinr_general(vec.mats.W[ue], cov, stat, ue);
                CHECK(std::abs(closed - at_expl) <= 1e-10 * closed);
                CHECK(std::abs(closed - at_vec) <= 1e-10 * closed);
            }
        }
    }

    SUBCASE("fully collinear statistics keep the UatF SINR bounded") {
        std::vector<double> gammas;
        for (int m : {8, 16, 32, 64}) {
            const arma::cx_mat R1 = exponential_covariance(m, 1.0, 0.5, 0.6);
            const arma::cx_mat R2 = 0.49 * R1;  // proportional pair
            const CovarianceSet cov = make_cov({R1}, {R2});
            const StatMatrices stat = compute_stat_matrices(cov, 2.0, 8.0);
            const CoefficientTable alpha = compute_alpha_table(cov, stat);
            const UatfOptimal u = uatf_sinr_optimal(alpha, m, 0);
            // delta collapses to a11 (1/M) / (1/M + a22)
            const double a11 = std::real(alpha.sums(0, 0));
            const double a22 = std::real(alpha.sums(1, 1));
            const double inv_m = 1.0 / m;
            CHECK(u.delta == doctest::Approx(a11 * inv_m / (inv_m + a22)).epsilon(1e-12));
            // gamma = a11 / (1/M + a22) never exceeds the M-free ceiling
            CHECK(u.gamma <= a11 / a22 * (1.0 + 1e-12));
            gammas.push_back(u.gamma);
        }
        // growth stalls: doubling ratios decay toward one instead of two
        const double early = gammas[1] / gammas[0];
        const double late = gammas[3] / gammas[2];
        CHECK(late < early);
        CHECK(late < 1.3);
    }
}

TEST_CASE("SINR with the MMSE combiner is nondecreasing in the SNR") {
    Rng rng(131, StreamKind::Check);
    const CovarianceSet cov = random_exp_cov(rng, 4, 2);
    const int tau_p = 4;
    for (int b = 0; b < 50; ++b) {
        double prev = 0.0;
        for (double rho : {1.0, 2.0, 4.0}) {
            // identical underlying normal draws; only the SNR scaling changes
            const StatMatrices stat = compute_stat_matrices(cov, rho, rho * tau_p);
            const ChannelSampler sampler(cov);
            const ChannelBlock blk = draw_block(sampler, stat, 137, 0, b);
            const double g = mmse_sinr_closed_form(blk, stat, 0);
            CHECK(g > 0.0);
            CHECK(g >= prev * (1.0 - 1e-9));
            prev = g;
        }
    }
}

TEST_CASE("monte_carlo_se: determinism and bound ordering") {
    Rng rng(139, StreamKind::Check);
    const CovarianceSet cov = random_exp_cov(rng, 8, 2);
    NetworkConfig net;
    net.num_bs = 2;
    net.antennas_per_bs = 8;
    net.data_snr = 2.0;
    net.pilot_length = 10;
    net.coherence_block = 200;
    net.rng_seed = 77;
    const std::vector<Scheme> schemes = {Scheme::MR, Scheme::MMSE, Scheme::DMMSE,
                                         Scheme::OBE_EQ6, Scheme::OBE_UATF};
    McOptions opt;
    opt.blocks = 60;
    opt.keep_samples = true;

    const auto serial = monte_carlo_se(net, cov, schemes, opt);
    McOptions par = opt;
    par.policy = ExecPolicy::OpenMP;
    const auto parallel = monte_carlo_se(net, cov, schemes, par);

    REQUIRE(serial.size() == parallel.size());
    for (std::size_t i = 0; i < serial.size(); ++i) {
        CHECK(serial[i].se_mean == parallel[i].se_mean);  // bit-identical
        CHECK(serial[i].sinr_mean == parallel[i].sinr_mean);
    }

    // per-block MMSE dominance and the OBE bound ordering
    double se_mmse = 0, se_dmmse = 0, se_obe6 = 0, se_obeu = 0;
    for (const SchemeReport& r : serial) {
        if (r.ue != 0) continue;
        if (r.scheme == Scheme::MMSE) se_mmse = r.se_mean;
        if (r.scheme == Scheme::DMMSE) se_dmmse = r.se_mean;
        if (r.scheme == Scheme::OBE_EQ6) se_obe6 = r.se_mean;
        if (r.scheme == Scheme::OBE_UATF) se_obeu = r.se_mean;
    }
    CHECK(se_mmse >= se_dmmse);
    CHECK(se_obe6 >= se_obeu);  // the UatF bound underestimates the SE

    // every sampled MMSE block dominates the other schemes' blocks
    const SchemeReport* mmse_rep = nullptr;
    const SchemeReport* dmmse_rep = nullptr;
    for (const SchemeReport& r : serial) {
        if (r.ue == 0 && r.scheme == Scheme::MMSE) mmse_rep = &r;
        if (r.ue == 0 && r.scheme == Scheme::DMMSE) dmmse_rep = &r;
    }
    REQUIRE(mmse_rep != nullptr);
    REQUIRE(dmmse_rep != nullptr);
    for (std::size_t b = 0; b < mmse_rep->sinr_samples.size(); ++b)
        CHECK(mmse_rep->sinr_samples[b] >=
              dmmse_rep->sinr_samples[b] * (1.0 - 1e-12));
}
