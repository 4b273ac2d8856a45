// SPDX-License-Identifier: Apache-2.0
//
// dmimo — uplink combining and spectral-efficiency simulator for
// distributed massive MIMO under pilot contamination
// Copyright (C) 2026 dmimo contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0

#ifndef DMIMO_COVARIANCE_HPP
#define DMIMO_COVARIANCE_HPP

#include "dmimo/types.hpp"

namespace dmimo {

/// Exponential correlation model for a uniform linear array:
/// [R]_{m,n} = varsigma * r^{|n-m|} * exp(i (n-m) theta).
/// Hermitian by construction with trace M * varsigma.
/// Rejects r outside [0,1) and non-positive varsigma.
arma::cx_mat exponential_covariance(int antennas, double varsigma, double r, double theta);

struct CovarianceDiagnostics {
    double hermitian_deviation = 0.0;  // ||R - R^H||_F
    double min_eigenvalue = 0.0;
    double trace = 0.0;
    bool hermitian_ok = false;
    bool psd_ok = false;    // min eigenvalue >= -1e-10 * tr/M
    bool trace_ok = false;  // tr > 0
    bool ok() const { return hermitian_ok && psd_ok && trace_ok; }
};

/// Reports how far a candidate covariance is from the invariants.
/// Throws on non-square input.
CovarianceDiagnostics validate_covariance(const arma::cx_mat& R);

/// Angle of arrival of each UE as seen from each BS, with the array
/// broadside fixed to the x axis: theta = atan2(dy, dx). K x N, in (-pi, pi].
/// Throws on coincident UE/BS positions.
arma::mat aoa_from_geometry(const Geometry& g);

/// Power-law pathloss: varsigma_k^n = reference_gain * d_{k,n}^{-exponent}.
/// K x N table. Distances below the geometry's minimum are rejected upstream.
arma::mat large_scale_from_geometry(const Geometry& g, double pathloss_exponent,
                                    double reference_gain);

/// Assembles the full covariance set for a geometry: exponential model per
/// (UE, BS) with pathloss-derived varsigma and geometry-derived angles.
CovarianceSet build_covariance_set(const Geometry& g, int antennas, double correlation_factor,
                                   double pathloss_exponent, double reference_gain);

}  // namespace dmimo

#endif  // DMIMO_COVARIANCE_HPP
