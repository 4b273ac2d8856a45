// SPDX-License-Identifier: Apache-2.0
//
// dmimo — uplink combining and spectral-efficiency simulator for
// distributed massive MIMO under pilot contamination
// Copyright (C) 2026 dmimo contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0

#ifndef DMIMO_RNG_HPP
#define DMIMO_RNG_HPP

#include <array>
#include <complex>
#include <cstdint>

namespace dmimo {

/// One keyed block of Philox 4x32 with 10 rounds.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::uint64_t key);

/// Stream coordinates. Each (kind, a, b, c) tuple names an independent
/// random stream for a fixed seed, so results never depend on scheduling.
enum class StreamKind : std::uint32_t {
    Channel = 1,     // a = drop, b = block, c = (ue << 16) | bs
    PilotNoise = 2,  // a = drop, b = block, c = bs
    Geometry = 3,    // a = drop
    Calibration = 4, // a = sample index
    Check = 5,       // self-check / test instances
};

/// Counter-based generator: the seed is the Philox key, the stream
/// coordinates (kind, a, b, c) occupy three counter words (c is limited to
/// 24 bits, sharing a word with the kind tag) and the fourth word counts
/// positions within the stream. Stateless apart from the position, so any
/// stream can be recreated from (seed, kind, a, b, c) alone.
class Rng {
  public:
    Rng(std::uint64_t seed, StreamKind kind, std::uint32_t a = 0, std::uint32_t b = 0,
        std::uint32_t c = 0)
        : key_(seed),
          base_{0u, b, a, (static_cast<std::uint32_t>(kind) << 24) | (c & 0xffffffu)} {}

    std::uint32_t next_u32();

    /// Uniform on (0, 1]; never returns 0 so log() is safe.
    double uniform();

    /// Uniform on [0, 1) with 53-bit resolution (for coordinates).
    double uniform53();

    /// Standard normal via Box-Muller (second value cached).
    double gaussian();

    /// Circularly symmetric complex normal, unit variance
    /// (real and imaginary parts each N(0, 1/2)).
    std::complex<double> cgaussian();

  private:
    void refill();

    std::uint64_t key_;
    std::array<std::uint32_t, 4> base_;
    std::array<std::uint32_t, 4> buf_{};
    std::uint32_t pos_ = 0;   // next counter value for word 0
    int avail_ = 0;           // unread words left in buf_
    double cached_gauss_ = 0.0;
    bool has_cached_gauss_ = false;
};

}  // namespace dmimo

#endif  // DMIMO_RNG_HPP
