// SPDX-License-Identifier: Apache-2.0
//
// dmimo — uplink combining and spectral-efficiency simulator for
// distributed massive MIMO under pilot contamination
// Copyright (C) 2026 dmimo contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0

#include "dmimo/covariance.hpp"

#include <sstream>
#include <stdexcept>

namespace dmimo {

std::vector<std::string> NetworkConfig::problems() const {
    std::vector<std::string> out;
    if (num_bs < 1) out.push_back("num_bs: must be a positive integer");
    if (antennas_per_bs < 1) out.push_back("antennas_per_bs: must be a positive integer");
    if (num_ue < 2) out.push_back("num_ue: at least two UEs share the pilot");
    if (!(data_snr > 0.0)) out.push_back("data_snr: must be a positive linear ratio");
    if (pilot_length < 1) out.push_back("pilot_length: must be a positive integer");
    if (coherence_block < 1) out.push_back("coherence_block: must be a positive integer");
    if (pilot_length > coherence_block)
        out.push_back("pilot_length/coherence_block: tau_p exceeds tau_c");
    if (!(correlation_factor >= 0.0) || correlation_factor >= 1.0)
        out.push_back("correlation_factor: must lie in [0, 1)");
    return out;
}

void NetworkConfig::validate() const {
    const auto p = problems();
    if (p.empty()) return;
    std::ostringstream msg;
    msg << "invalid network configuration:";
    for (const auto& s : p) msg << "\n  " << s;
    throw std::invalid_argument(msg.str());
}

std::vector<std::string> Geometry::problems() const {
    std::vector<std::string> out;
    if (bs_positions.empty()) out.push_back("bs_positions: empty");
    if (ue_positions.empty()) out.push_back("ue_positions: empty");
    for (int k = 0; k < num_ue(); ++k)
        for (int n = 0; n < num_bs(); ++n)
            if (dist(k, n) < min_distance) {
                std::ostringstream msg;
                msg << "ue_positions: UE " << k + 1 << " is " << dist(k, n) << " m from BS "
                    << n + 1 << ", below the minimum " << min_distance << " m";
                out.push_back(msg.str());
            }
    return out;
}

void Geometry::validate() const {
    const auto p = problems();
    if (p.empty()) return;
    std::ostringstream msg;
    msg << "invalid geometry:";
    for (const auto& s : p) msg << "\n  " << s;
    throw std::invalid_argument(msg.str());
}

std::string to_string(Scheme s) {
    switch (s) {
        case Scheme::MR: return "MR";
        case Scheme::MMSE: return "MMSE";
        case Scheme::DMMSE: return "DMMSE";
        case Scheme::OBE_EQ6: return "OBE_EQ6";
        case Scheme::OBE_UATF: return "OBE_UATF";
    }
    return "?";
}

std::optional<Scheme> scheme_from_string(std::string_view name) {
    for (Scheme s : kAllSchemes)
        if (to_string(s) == name) return s;
    return std::nullopt;
}

arma::cx_mat exponential_covariance(int antennas, double varsigma, double r, double theta) {
    if (antennas < 1) throw std::invalid_argument("exponential_covariance: antennas must be positive");
    if (!(varsigma > 0.0))
        throw std::invalid_argument("exponential_covariance: varsigma must be positive");
    if (!(r >= 0.0) || r >= 1.0)
        throw std::invalid_argument("exponential_covariance: correlation factor must lie in [0, 1)");

    // First column r^m e^{-im theta}; the matrix is Hermitian Toeplitz.
    arma::cx_vec col(antennas);
    double mag = varsigma;
    for (int m = 0; m < antennas; ++m) {
        col(m) = mag * cx(std::cos(m * theta), -std::sin(m * theta));
        mag *= r;
    }
    arma::cx_mat R(antennas, antennas);
    for (int c = 0; c < antennas; ++c) {
        for (int rw = 0; rw < antennas; ++rw) {
            // [R]_{rw,c} = varsigma r^{|c-rw|} e^{i (c-rw) theta}
            R(rw, c) = (c >= rw) ? std::conj(col(c - rw)) : col(rw - c);
        }
    }
    return R;
}

CovarianceDiagnostics validate_covariance(const arma::cx_mat& R) {
    if (!R.is_square()) throw std::invalid_argument("validate_covariance: matrix must be square");
    CovarianceDiagnostics d;
    d.hermitian_deviation = arma::norm(R - R.t(), "fro");
    d.trace = std::real(arma::trace(R));
    const double scale = arma::norm(R, "fro");
    d.hermitian_ok = d.hermitian_deviation <= 1e-12 * std::max(1.0, scale);
    d.trace_ok = d.trace > 0.0;
    if (d.hermitian_ok) {
        const arma::cx_mat H = 0.5 * (R + R.t());
        arma::vec eigs;
        if (!arma::eig_sym(eigs, H))
            throw std::runtime_error("validate_covariance: eigen-decomposition failed");
        d.min_eigenvalue = eigs.min();
    } else {
        d.min_eigenvalue = std::numeric_limits<double>::quiet_NaN();
    }
    const double floor = -1e-10 * d.trace / static_cast<double>(R.n_rows);
    d.psd_ok = d.hermitian_ok && d.trace_ok && d.min_eigenvalue >= std::min(floor, 0.0);
    return d;
}

arma::mat aoa_from_geometry(const Geometry& g) {
    arma::mat theta(g.num_ue(), g.num_bs());
    for (int k = 0; k < g.num_ue(); ++k) {
        for (int n = 0; n < g.num_bs(); ++n) {
            const double dx = g.ue_positions[k].x - g.bs_positions[n].x;
            const double dy = g.ue_positions[k].y - g.bs_positions[n].y;
            if (dx == 0.0 && dy == 0.0) {
                std::ostringstream msg;
                msg << "aoa_from_geometry: UE " << k + 1 << " coincides with BS " << n + 1;
                throw std::invalid_argument(msg.str());
            }
            theta(k, n) = std::atan2(dy, dx);
        }
    }
    return theta;
}

arma::mat large_scale_from_geometry(const Geometry& g, double pathloss_exponent,
                                    double reference_gain) {
    if (!(reference_gain > 0.0))
        throw std::invalid_argument("large_scale_from_geometry: reference_gain must be positive");
    arma::mat varsigma(g.num_ue(), g.num_bs());
    for (int k = 0; k < g.num_ue(); ++k)
        for (int n = 0; n < g.num_bs(); ++n)
            varsigma(k, n) = reference_gain * std::pow(g.dist(k, n), -pathloss_exponent);
    return varsigma;
}

CovarianceSet build_covariance_set(const Geometry& g, int antennas, double correlation_factor,
                                   double pathloss_exponent, double reference_gain) {
    g.validate();
    CovarianceSet cov;
    cov.num_ue = g.num_ue();
    cov.num_bs = g.num_bs();
    cov.antennas = antennas;
    cov.large_scale = large_scale_from_geometry(g, pathloss_exponent, reference_gain);
    cov.aoa = aoa_from_geometry(g);
    cov.R.resize(cov.num_ue);
    for (int k = 0; k < cov.num_ue; ++k) {
        cov.R[k].resize(cov.num_bs);
        for (int n = 0; n < cov.num_bs; ++n)
            cov.R[k][n] = exponential_covariance(antennas, cov.large_scale(k, n),
                                                 correlation_factor, cov.aoa(k, n));
    }
    return cov;
}

}  // namespace dmimo
