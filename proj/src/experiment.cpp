// SPDX-License-Identifier: Apache-2.0
//
// dmimo — uplink combining and spectral-efficiency simulator for
// distributed massive MIMO under pilot contamination
// Copyright (C) 2026 dmimo contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0

#include "dmimo/experiment.hpp"

#include <omp.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "dmimo/asymptotics.hpp"
#include "dmimo/covariance.hpp"
#include "dmimo/rng.hpp"

namespace dmimo {

namespace {

Geometry sample_geometry(const GeometrySpec& spec, int num_ue, Rng& rng) {
    Geometry g;
    g.min_distance = spec.min_distance;
    g.bs_positions = spec.bs_positions;
    g.ue_positions.resize(num_ue);
    constexpr int kMaxAttempts = 100000;
    for (int k = 0; k < num_ue; ++k) {
        bool placed = false;
        for (int attempt = 0; attempt < kMaxAttempts && !placed; ++attempt) {
            const Vec2 pos{rng.uniform53() * spec.area_side, rng.uniform53() * spec.area_side};
            placed = true;
            for (const Vec2& bs : g.bs_positions) {
                if (distance(pos, bs) < spec.min_distance) {
                    placed = false;
                    break;
                }
            }
            if (placed) g.ue_positions[k] = pos;
        }
        if (!placed)
            throw std::invalid_argument(
                "drop_ues: could not place a UE outside the exclusion disks; "
                "area_side_m/min_distance_m are infeasible");
    }
    return g;
}

std::string format_value(double v) {
    if (std::isnan(v)) return "nan";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

std::string plot_script(const std::string& csv_name) {
    std::ostringstream s;
    s << "#!/usr/bin/env python3\n"
      << "\"\"\"Renders SE-vs-M curves from the sweep CSV (one line per scheme,\n"
      << "SE averaged over the UEs). Usage: python3 this_script.py [csv]\"\"\"\n"
      << "import csv, sys, collections\n"
      << "import matplotlib\n"
      << "matplotlib.use(\"Agg\")\n"
      << "import matplotlib.pyplot as plt\n\n"
      << "path = sys.argv[1] if len(sys.argv) > 1 else \"" << csv_name << "\"\n"
      << "rows = list(csv.DictReader(open(path)))\n"
      << "curves = collections.defaultdict(dict)\n"
      << "for r in rows:\n"
      << "    curves[r[\"scheme\"]].setdefault(int(r[\"M\"]), []).append(float(r[\"se_mean\"]))\n"
      << "plt.figure(figsize=(7, 5))\n"
      << "for scheme, by_m in curves.items():\n"
      << "    ms = sorted(by_m)\n"
      << "    se = [sum(by_m[m]) / len(by_m[m]) for m in ms]\n"
      << "    plt.plot(ms, se, marker=\"o\", label=scheme)\n"
      << "plt.xlabel(\"Antennas per BS, M\")\n"
      << "plt.ylabel(\"Average SE per UE [bit/s/Hz]\")\n"
      << "plt.grid(True, alpha=0.4)\n"
      << "plt.legend()\n"
      << "out = path.rsplit(\".\", 1)[0] + \".png\"\n"
      << "plt.savefig(out, dpi=150, bbox_inches=\"tight\")\n"
      << "print(\"wrote\", out)\n";
    return s.str();
}

std::string replace_extension(const std::string& path, const std::string& suffix) {
    const auto dot = path.find_last_of('.');
    const auto slash = path.find_last_of("/\\");
    if (dot == std::string::npos || (slash != std::string::npos && dot < slash))
        return path + suffix;
    return path.substr(0, dot) + suffix;
}

}  // namespace

Geometry drop_ues(const GeometrySpec& spec, int num_ue, std::uint64_t seed,
                  std::uint32_t drop_index) {
    // an empty BS list simply means no exclusion constraints
    Rng rng(seed, StreamKind::Geometry, drop_index);
    return sample_geometry(spec, num_ue, rng);
}

double calibrate_reference_gain(const GeometrySpec& spec, int num_ue, int num_bs,
                                double pathloss_exponent, double rho, double target_db,
                                char snr_divisor, int antennas, std::uint64_t seed,
                                int calibration_drops) {
    if (calibration_drops < 1)
        throw std::invalid_argument("calibrate_reference_gain: needs at least one drop");
    GeometrySpec resolved = spec;
    resolved.bs_positions = spec.resolved_bs_positions(num_bs);

    double acc = 0.0;
    std::size_t count = 0;
    for (int i = 0; i < calibration_drops; ++i) {
        Rng rng(seed, StreamKind::Calibration, static_cast<std::uint32_t>(i));
        const Geometry g = sample_geometry(resolved, num_ue, rng);
        for (int k = 0; k < num_ue; ++k) {
            for (int n = 0; n < num_bs; ++n) {
                acc += std::pow(g.dist(k, n), -pathloss_exponent);
                ++count;
            }
        }
    }
    const double mean_pathgain = acc / static_cast<double>(count);
    const double target = std::pow(10.0, target_db / 10.0);
    double gain = target / (rho * mean_pathgain);
    if (snr_divisor == 'N')
        gain *= static_cast<double>(num_bs) / static_cast<double>(antennas);
    return gain;
}

std::string csv_encode(const std::vector<ResultRow>& rows) {
    std::ostringstream out;
    out << "scheme,M,ue,se_mean,se_stderr,sinr_mean,asym_pred,est_mults,comb_mults\n";
    for (const ResultRow& r : rows) {
        out << to_string(r.scheme) << ',' << r.m << ',' << r.ue << ','
            << format_value(r.se_mean) << ',' << format_value(r.se_stderr) << ','
            << format_value(r.sinr_mean) << ',' << format_value(r.asym_pred) << ','
            << r.est_mults << ',' << r.comb_mults << '\n';
    }
    return out.str();
}

ExperimentResult run_experiment(const ExperimentConfig& cfg, ExecPolicy policy) {
    cfg.net.validate();
    if (cfg.schemes.empty()) throw std::invalid_argument("run_experiment: schemes empty");
    if (cfg.m_grid.empty()) throw std::invalid_argument("run_experiment: m_grid empty");

    const auto t0 = std::chrono::steady_clock::now();
    if (cfg.threads > 0) omp_set_num_threads(cfg.threads);

    GeometrySpec geo = cfg.geometry;
    geo.bs_positions = cfg.geometry.resolved_bs_positions(cfg.net.num_bs);

    // reference gain per grid point; the 'M' normalization is M-independent
    // so one calibration covers the whole sweep
    const int grid_size = static_cast<int>(cfg.m_grid.size());
    std::vector<double> gain(grid_size);
    for (int mi = 0; mi < grid_size; ++mi) {
        if (cfg.snr_divisor == 'M' && mi > 0) {
            gain[mi] = gain[0];
            continue;
        }
        gain[mi] = calibrate_reference_gain(geo, cfg.net.num_ue, cfg.net.num_bs,
                                            cfg.pathloss_exponent, cfg.net.data_snr,
                                            cfg.snr_target_db, cfg.snr_divisor, cfg.m_grid[mi],
                                            cfg.net.rng_seed, cfg.calibration_drops);
    }

    // one slot per (drop, m) work item; reduced deterministically afterwards
    const int items = cfg.drops * grid_size;
    std::vector<std::vector<SchemeReport>> slots(items);
    std::vector<std::string> failures(items);

    auto run_item = [&](int item) {
        const int d = item / grid_size;
        const int mi = item % grid_size;
        try {
            const Geometry g = drop_ues(geo, cfg.net.num_ue, cfg.net.rng_seed,
                                        static_cast<std::uint32_t>(d));
            const CovarianceSet cov =
                build_covariance_set(g, cfg.m_grid[mi], cfg.net.correlation_factor,
                                     cfg.pathloss_exponent, gain[mi]);
            NetworkConfig net = cfg.net;
            net.antennas_per_bs = cfg.m_grid[mi];
            McOptions opt;
            opt.blocks = cfg.blocks_per_drop;
            opt.drop_index = static_cast<std::uint32_t>(d);
            opt.policy = ExecPolicy::Serial;  // parallelism lives on the item axis
            slots[item] = monte_carlo_se(net, cov, cfg.schemes, opt);
        } catch (const std::exception& e) {
            failures[item] = e.what();
        }
    };

    if (policy == ExecPolicy::OpenMP) {
#pragma omp parallel for schedule(dynamic)
        for (int item = 0; item < items; ++item) run_item(item);
    } else {
        for (int item = 0; item < items; ++item) run_item(item);
    }

    for (int item = 0; item < items; ++item)
        if (!failures[item].empty())
            throw std::runtime_error("run_experiment: work item failed: " + failures[item]);

    // reduce over drops for every (scheme, m, ue)
    ExperimentResult result;
    result.reference_gain = gain[0];
    for (Scheme scheme : cfg.schemes) {
        for (int mi = 0; mi < grid_size; ++mi) {
            for (int ue = 0; ue < cfg.net.num_ue; ++ue) {
                std::vector<double> se_d, sinr_d, pred_d, stderr_d;
                for (int d = 0; d < cfg.drops; ++d) {
                    const auto& reports = slots[d * grid_size + mi];
                    for (const SchemeReport& r : reports) {
                        if (r.scheme == scheme && r.ue == ue) {
                            se_d.push_back(r.se_mean);
                            sinr_d.push_back(r.sinr_mean);
                            pred_d.push_back(r.asym_pred);
                            stderr_d.push_back(r.se_stderr);
                        }
                    }
                }
                ResultRow row;
                row.scheme = scheme;
                row.m = cfg.m_grid[mi];
                row.ue = ue + 1;
                const double n = static_cast<double>(se_d.size());
                double mean = 0, sinr = 0, pred = 0;
                for (std::size_t i = 0; i < se_d.size(); ++i) {
                    mean += se_d[i];
                    sinr += sinr_d[i];
                    pred += pred_d[i];
                }
                mean /= n;
                sinr /= n;
                pred /= n;
                double var = 0;
                for (double v : se_d) var += (v - mean) * (v - mean);
                row.se_mean = mean;
                row.sinr_mean = sinr;
                row.asym_pred = pred;
                // stderr over drops; a single drop falls back to its block-level error
                row.se_stderr = (se_d.size() > 1)
                                    ? std::sqrt(var / (n - 1.0) / n)
                                    : stderr_d[0];
                const ComplexityCount cc =
                    complexity_count(scheme, cfg.net.num_bs, cfg.m_grid[mi],
                                     cfg.net.pilot_length);
                row.est_mults = cc.estimation_mults;
                row.comb_mults = cc.combiner_mults;
                result.rows.push_back(row);
            }
        }
    }

    // outputs
    result.csv_path = cfg.out_path;
    result.plot_path = replace_extension(cfg.out_path, "_plot.py");
    {
        std::ofstream csv(result.csv_path, std::ios::binary);
        if (!csv) throw std::invalid_argument("run_experiment: cannot write " + result.csv_path);
        csv << csv_encode(result.rows);
    }
    {
        std::ofstream py(result.plot_path, std::ios::binary);
        if (!py) throw std::invalid_argument("run_experiment: cannot write " + result.plot_path);
        const auto slash = result.csv_path.find_last_of("/\\");
        py << plot_script(slash == std::string::npos ? result.csv_path
                                                     : result.csv_path.substr(slash + 1));
    }

    result.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return result;
}

std::string format_summary_table(const ExperimentResult& result) {
    std::ostringstream out;
    out << "scheme     M   ue   se_mean    se_stderr  sinr_mean    asym_pred\n";
    for (const ResultRow& r : result.rows) {
        char line[160];
        std::snprintf(line, sizeof line, "%-9s %4d  %2d  %9.4f  %9.4f  %11.4f  %11.4f\n",
                      to_string(r.scheme).c_str(), r.m, r.ue, r.se_mean, r.se_stderr,
                      r.sinr_mean, r.asym_pred);
        out << line;
    }
    char tail[96];
    std::snprintf(tail, sizeof tail, "reference_gain = %.6g, wall = %.1f s\n",
                  result.reference_gain, result.wall_seconds);
    out << tail;
    return out.str();
}

}  // namespace dmimo
