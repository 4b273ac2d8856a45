// SPDX-License-Identifier: Apache-2.0
//
// dmimo — uplink combining and spectral-efficiency simulator for
// distributed massive MIMO under pilot contamination
// Copyright (C) 2026 dmimo contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0

#ifndef DMIMO_SELFCHECK_HPP
#define DMIMO_SELFCHECK_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace dmimo {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

/// Random-instance invariant suite behind the `check` CLI subcommand:
/// dual-path equalities, collinearity, SINR optimality, scale invariance
/// and the closed-form/grid agreement of the assumption metric.
std::vector<CheckResult> run_self_checks(std::uint64_t seed, int instances = 10);

}  // namespace dmimo

#endif  // DMIMO_SELFCHECK_HPP
