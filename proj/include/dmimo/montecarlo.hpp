// SPDX-License-Identifier: Apache-2.0
//
// dmimo — uplink combining and spectral-efficiency simulator for
// distributed massive MIMO under pilot contamination
// Copyright (C) 2026 dmimo contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0

#ifndef DMIMO_MONTECARLO_HPP
#define DMIMO_MONTECARLO_HPP

#include "dmimo/se.hpp"

namespace dmimo {

/// Execution policy of the block loop. Both paths produce bit-identical
/// results: every block writes into its own slot and the reduction runs in
/// block order afterwards. Serial is the reference implementation.
enum class ExecPolicy { Serial, OpenMP };

/// Per-(scheme, UE) outcome of one covariance set.
struct SchemeReport {
    Scheme scheme = Scheme::MR;
    int ue = 0;
    std::vector<double> sinr_samples;  // per block; empty for OBE_UATF
    double se_mean = 0.0;
    double se_stderr = 0.0;
    double sinr_mean = 0.0;
    double asym_pred = 0.0;  // NaN where no prediction applies
    std::size_t blocks = 0;
};

struct McOptions {
    int blocks = 200;
    std::uint32_t drop_index = 0;
    ExecPolicy policy = ExecPolicy::Serial;
    bool keep_samples = false;
};

/// Estimates the SE of every requested scheme on one covariance set:
/// per block, sample channels -> pilot -> estimates -> combiners -> SINR,
/// then average log2(1 + gamma) with the (1 - tau_p/tau_c) prefactor.
/// OBE under the UatF bound is evaluated from closed-form statistics, not
/// from channel samples. Deterministic given (seed, drop_index) regardless
/// of policy or thread count.
std::vector<SchemeReport> monte_carlo_se(const NetworkConfig& net, const CovarianceSet& cov,
                                         const std::vector<Scheme>& schemes,
                                         const McOptions& opt);

}  // namespace dmimo

#endif  // DMIMO_MONTECARLO_HPP
