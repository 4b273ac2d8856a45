// SPDX-License-Identifier: Apache-2.0
//
// dmimo — uplink combining and spectral-efficiency simulator for
// distributed massive MIMO under pilot contamination
// Copyright (C) 2026 dmimo contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0

#include "dmimo/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace dmimo {

std::vector<Vec2> GeometrySpec::resolved_bs_positions(int num_bs) const {
    if (!bs_positions.empty()) return bs_positions;
    // cell centers of the smallest g x g grid holding num_bs cells
    const int g = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(num_bs))));
    const double cell = area_side / static_cast<double>(g);
    std::vector<Vec2> out;
    out.reserve(num_bs);
    for (int i = 0; i < num_bs; ++i) {
        const int gx = i % g, gy = i / g;
        out.push_back({(gx + 0.5) * cell, (gy + 0.5) * cell});
    }
    return out;
}

namespace {

std::string trim(std::string s) {
    const auto issp = [](unsigned char c) { return std::isspace(c) != 0; };
    while (!s.empty() && issp(s.front())) s.erase(s.begin());
    while (!s.empty() && issp(s.back())) s.pop_back();
    return s;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(trim(cur));
    return out;
}

struct Parser {
    std::vector<std::string>& errors;

    bool to_double(const std::string& key, const std::string& v, double& out) {
        try {
            std::size_t used = 0;
            out = std::stod(v, &used);
            if (used != v.size()) throw std::invalid_argument("");
            return true;
        } catch (...) {
            errors.push_back(key + ": not a number: '" + v + "'");
            return false;
        }
    }

    bool to_int(const std::string& key, const std::string& v, int& out) {
        const auto* first = v.data();
        const auto* last = v.data() + v.size();
        const auto res = std::from_chars(first, last, out);
        if (res.ec != std::errc{} || res.ptr != last) {
            errors.push_back(key + ": not an integer: '" + v + "'");
            return false;
        }
        return true;
    }

    bool to_u64(const std::string& key, const std::string& v, std::uint64_t& out) {
        const auto* first = v.data();
        const auto* last = v.data() + v.size();
        const auto res = std::from_chars(first, last, out);
        if (res.ec != std::errc{} || res.ptr != last) {
            errors.push_back(key + ": not an unsigned integer: '" + v + "'");
            return false;
        }
        return true;
    }
};

}  // namespace

ConfigResult validate_config(const std::string& text) {
    ConfigResult result;
    ExperimentConfig cfg;
    Parser p{result.errors};

    double data_snr_db = 6.6;
    bool have_data_snr_db = false;
    std::optional<double> supplied_pilot_snr;

    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            result.errors.push_back("line " + std::to_string(lineno) +
                                    ": expected 'key = value', got '" + line + "'");
            continue;
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));

        if (key == "num_bs") {
            p.to_int(key, value, cfg.net.num_bs);
        } else if (key == "num_ue") {
            p.to_int(key, value, cfg.net.num_ue);
        } else if (key == "data_snr_db") {
            have_data_snr_db = p.to_double(key, value, data_snr_db);
        } else if (key == "pilot_snr") {
            double v = 0;
            if (p.to_double(key, value, v)) supplied_pilot_snr = v;
        } else if (key == "pilot_length") {
            p.to_int(key, value, cfg.net.pilot_length);
        } else if (key == "coherence_block") {
            p.to_int(key, value, cfg.net.coherence_block);
        } else if (key == "correlation_factor") {
            p.to_double(key, value, cfg.net.correlation_factor);
        } else if (key == "seed") {
            p.to_u64(key, value, cfg.net.rng_seed);
        } else if (key == "area_side_m") {
            p.to_double(key, value, cfg.geometry.area_side);
        } else if (key == "min_distance_m") {
            p.to_double(key, value, cfg.geometry.min_distance);
        } else if (key == "bs_positions") {
            cfg.geometry.bs_positions.clear();
            for (const std::string& pair : split(value, ';')) {
                if (pair.empty()) continue;
                const auto xy = split(pair, ',');
                Vec2 pos;
                if (xy.size() != 2 || !p.to_double(key, xy[0], pos.x) ||
                    !p.to_double(key, xy[1], pos.y)) {
                    result.errors.push_back(key + ": expected 'x,y; x,y; ...'");
                    break;
                }
                cfg.geometry.bs_positions.push_back(pos);
            }
        } else if (key == "m_grid") {
            cfg.m_grid.clear();
            for (const std::string& tok : split(value, ',')) {
                int m = 0;
                if (p.to_int(key, tok, m)) cfg.m_grid.push_back(m);
            }
        } else if (key == "schemes") {
            cfg.schemes.clear();
            for (const std::string& tok : split(value, ',')) {
                if (tok.empty()) continue;
                if (auto s = scheme_from_string(tok)) {
                    cfg.schemes.push_back(*s);
                } else {
                    result.errors.push_back(key + ": unknown scheme '" + tok + "'");
                }
            }
        } else if (key == "drops") {
            p.to_int(key, value, cfg.drops);
        } else if (key == "blocks_per_drop") {
            p.to_int(key, value, cfg.blocks_per_drop);
        } else if (key == "calibration_drops") {
            p.to_int(key, value, cfg.calibration_drops);
        } else if (key == "pathloss_exponent") {
            p.to_double(key, value, cfg.pathloss_exponent);
        } else if (key == "snr_target_db") {
            p.to_double(key, value, cfg.snr_target_db);
        } else if (key == "snr_norm_divisor") {
            if (value == "M" || value == "N") {
                cfg.snr_divisor = value[0];
            } else {
                result.errors.push_back("snr_norm_divisor: must be 'M' or 'N', got '" + value +
                                        "'");
            }
        } else if (key == "out") {
            cfg.out_path = value;
        } else if (key == "threads") {
            p.to_int(key, value, cfg.threads);
        } else {
            result.errors.push_back(key + ": unknown key");
        }
    }

    if (have_data_snr_db) cfg.net.data_snr = std::pow(10.0, data_snr_db / 10.0);

    // rho_tr is defined as rho * tau_p; a disagreeing supplied value is an error
    if (supplied_pilot_snr) {
        const double expected = cfg.net.pilot_snr();
        if (std::abs(*supplied_pilot_snr - expected) > 1e-9 * std::max(1.0, expected))
            result.errors.push_back(
                "pilot_snr: must equal data_snr * pilot_length (= " + std::to_string(expected) +
                "); drop the key or fix data_snr_db/pilot_length");
    }

    for (const std::string& s : cfg.net.problems()) result.errors.push_back(s);

    if (cfg.m_grid.empty()) result.errors.push_back("m_grid: must not be empty");
    for (std::size_t i = 0; i < cfg.m_grid.size(); ++i) {
        if (cfg.m_grid[i] < 1) result.errors.push_back("m_grid: entries must be positive");
        if (i > 0 && cfg.m_grid[i] <= cfg.m_grid[i - 1]) {
            result.errors.push_back("m_grid: must be strictly increasing");
            break;
        }
    }
    if (cfg.schemes.empty()) result.errors.push_back("schemes: must not be empty");
    if (cfg.drops < 1) result.errors.push_back("drops: must be positive");
    if (cfg.blocks_per_drop < 1) result.errors.push_back("blocks_per_drop: must be positive");
    if (cfg.calibration_drops < 1)
        result.errors.push_back("calibration_drops: must be positive");
    if (!(cfg.geometry.area_side > 0))
        result.errors.push_back("area_side_m: must be positive");
    if (cfg.geometry.min_distance < 0)
        result.errors.push_back("min_distance_m: must be nonnegative");
    if (!(cfg.pathloss_exponent > 0))
        result.errors.push_back("pathloss_exponent: must be positive");
    if (cfg.threads < 0) result.errors.push_back("threads: must be nonnegative");
    if (cfg.out_path.empty()) result.errors.push_back("out: must not be empty");

    if (result.errors.empty()) result.config = std::move(cfg);
    return result;
}

ConfigResult load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        ConfigResult r;
        r.errors.push_back("config file not readable: " + path);
        return r;
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return validate_config(buf.str());
}

std::string default_config_text() {
    return R"(# dmimo experiment configuration (defaults shown)
num_bs = 4
num_ue = 2
data_snr_db = 6.6
pilot_length = 10
coherence_block = 200
correlation_factor = 0.5
seed = 1

area_side_m = 140
min_distance_m = 20
# bs_positions = 35,35; 105,35; 35,105; 105,105   # default: grid cell centers

m_grid = 20, 40, 60, 80, 100
schemes = MR, MMSE, DMMSE, OBE_EQ6, OBE_UATF
drops = 100
blocks_per_drop = 200

pathloss_exponent = 3.7
snr_target_db = 6.6
snr_norm_divisor = M
calibration_drops = 1000

out = results.csv
threads = 0
)";
}

}  // namespace dmimo
