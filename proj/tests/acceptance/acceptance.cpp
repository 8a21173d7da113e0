// Acceptance gate: one PASS/FAIL line per primary criterion.
// Usage: qpn_acceptance [output_dir]   (stats CSVs are written there if given)

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "qpn/config.hpp"
#include "qpn/ensemble.hpp"
#include "qpn/io.hpp"

using namespace qpn;

namespace {

constexpr std::size_t kSeeds = 10;  // desk-scale replicate count

int failures = 0;

void report(int id, bool pass, const std::string& detail) {
    std::printf("%s criterion %d: %s\n", pass ? "PASS" : "FAIL", id, detail.c_str());
    std::fflush(stdout);
    if (!pass) ++failures;
}

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

const PointStats& find(const EnsembleStats& s, Protocol p, double c, double gamma = -1, double tuning = 100.0) {
    for (const auto& ps : s.points) {
        if (ps.protocol == p && ps.point.c_total == c && ps.point.tuning_ghz == tuning &&
            (gamma < 0 || ps.point.gamma_ghz == gamma))
            return ps;
    }
    std::fprintf(stderr, "missing sweep point\n");
    std::exit(2);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Criterion 11 pieces. Each returns the number of disagreements.

long spatial_index_oracle(const ModelConfig& base) {
    long bad = 0;
    for (std::uint64_t seed : {1, 2, 3}) {
        ModelConfig m = base;
        m.crystal.sphere_radius_nm = 15.0;
        m.crystal.c_total = 0.02;
        m.crystal.site_filter = 0;
        m.crystal.seed = seed;
        const auto crystal = build_crystal(m.lattice, m.crystal);
        std::vector<Vec3> pts;
        for (const auto& d : crystal.dopants) pts.push_back(d.position);
        const double r_max = search_radius_nm(m.rules, m.material);
        const auto index = build_index(crystal, r_max);
        for (double r : {r_max, 5.0, 0.7}) {
            for (const auto& q : pts) bad += index.neighbors_within(q, r) != oracle::neighbors_brute(pts, q, r);
        }
    }
    return bad;
}

long reserved_oracle(const LevelStructure& lv, const ControlRegionSpec& ctrl, double& measure_gap) {
    const IntervalSet ghz = reserved_offsets(lv, ctrl);
    std::vector<Interval> mhz;
    for (const auto& iv : ghz.intervals()) mhz.push_back({iv.lo * 1e3, iv.hi * 1e3});
    const IntervalSet set(mhz);
    const double step = 0.1;
    const double limit = set.intervals().back().hi + 50.0;
    long bad = 0, hits = 0;
    for (long k = std::lround(-limit / step); k <= std::lround(limit / step); ++k) {
        // the grid is offset so no sample sits exactly where two windows touch
        const double x = k * step + 0.0123;
        bool near_edge = false;
        for (const auto& iv : set.intervals()) near_edge |= std::abs(x - iv.lo) < 1e-6 || std::abs(x - iv.hi) < 1e-6;
        const bool want = oracle::reserved_by_scan(x, lv, ctrl);
        hits += want;
        if (!near_edge && want != set.contains(x)) ++bad;
    }
    measure_gap = std::abs(hits * step - set.measure());
    if (measure_gap > step * (2.0 * static_cast<double>(set.size()) + 1.0)) ++bad;
    return bad;
}

long candidate_oracle(const ModelConfig& base) {
    long bad = 0;
    const double k = oracle::coupling_hz_m3(base.material.delta_mu_cm, base.material.epsilon_dc);
    for (std::uint64_t seed : {4, 5}) {
        ModelConfig m = base;
        m.crystal.sphere_radius_nm = 15.0;
        m.crystal.c_total = 0.02;
        m.crystal.seed = seed;
        const auto crystal = realize(m).crystal;
        const double r_max = search_radius_nm(m.rules, m.material);
        const auto index = build_index(crystal, r_max);
        SpectralLedger ledger(m.levels, m.ctrl, m.tuning);
        std::vector<bool> is_qubit(crystal.size(), false);
        Rng rng = make_rng(seed);
        for (int n = 0; n < 30 && !crystal.empty(); ++n) {
            const auto pick = uniform_index(rng, crystal.size());
            if (!is_qubit[pick] && ledger.admissible(crystal.dopants[pick].frequency_ghz)) {
                ledger.add(crystal.dopants[pick].frequency_ghz);
                is_qubit[pick] = true;
            }
        }
        const SearchContext ctx{crystal, index, ledger, m.rules, m.material, r_max, is_qubit};
        for (std::uint32_t q = 0; q < crystal.size(); ++q) {
            if (!is_qubit[q]) continue;
            const auto& a = crystal.dopants[q];
            for (bool blockade_only : {false, true}) {
                std::vector<std::uint32_t> want;
                for (std::uint32_t d = 0; d < crystal.size(); ++d) {
                    if (d == q || is_qubit[d]) continue;
                    const auto& b = crystal.dopants[d];
                    const double mhz =
                        oracle::dipole_shift_hz({a.position.x, a.position.y, a.position.z},
                                                {a.dipole_direction.x, a.dipole_direction.y, a.dipole_direction.z},
                                                {b.position.x, b.position.y, b.position.z},
                                                {b.dipole_direction.x, b.dipole_direction.y, b.dipole_direction.z}, k) *
                        1e-6;
                    const auto type = classify_interaction(mhz, m.rules);
                    if (type == GateType::None || (blockade_only && type != GateType::Blockade)) continue;
                    if (!ledger.admissible(b.frequency_ghz)) continue;
                    want.push_back(d);
                }
                bad += find_candidates(ctx, q, blockade_only) != want;
            }
        }
    }
    return bad;
}

}  // namespace

int main(int argc, char** argv) {
    const std::filesystem::path out_dir = argc > 1 ? argv[1] : "";
    auto save = [&](const char* name, const EnsembleStats& s) {
        if (!out_dir.empty()) write_file_atomic(out_dir / name, stats_csv(s));
    };

    const RunConfig defaults = default_run_config();
    const ModelConfig& model = defaults.model;
    const double spacing = min_channel_spacing(model.levels, model.ctrl);
    const auto t_start = std::chrono::steady_clock::now();

    // 1. linewidth law
    {
        const double g1 = inhomogeneous_fwhm(model.line, 0.01), g5 = inhomogeneous_fwhm(model.line, 0.05);
        report(1, std::abs(g1 - 19.8) < 1e-9 && std::abs(g5 - 91.8) < 1e-9,
               fmt("fwhm(1%%) = %.6f GHz, fwhm(5%%) = %.6f GHz", g1, g5));
    }

    // 2. reserved spectrum
    {
        const double measure = reserved_offsets(model.levels, model.ctrl).measure();
        report(2, measure >= 1.5 && measure <= 2.0 && spacing >= 0.75 && spacing <= 1.0,
               fmt("reserved measure %.4f GHz in [1.5, 2.0], min channel spacing %.4f GHz in [0.75, 1.0]", measure,
                   spacing));
    }

    // 4. FRET
    {
        const double rc = fret_critical_distance(model.material);
        const double rate = fret_rate(0.35, model.material), radiative = 1.0 / model.material.optical_t1_s;
        report(4, rc >= 0.29 && rc <= 0.32 && rate < radiative,
               fmt("critical distance %.4f nm in [0.29, 0.32]; rate(0.35 nm) %.1f /s < 1/T1 %.1f /s", rc, rate,
                   radiative));
    }

    // Main ensemble: coupled linewidth, 100 GHz, all protocols.
    SweepSpec main_spec;
    main_spec.concentrations = {0.001, 0.01, 0.05};
    main_spec.tuning_ranges_ghz = {100.0};
    main_spec.realizations_per_point = kSeeds;
    main_spec.base_seed = 0;
    auto t0 = std::chrono::steady_clock::now();
    const EnsembleStats main_stats = run_sweep(main_spec, model, {1, {}});
    const double main_seconds = seconds_since(t0);
    save("main_sweep.csv", main_stats);

    // 10. decoupled sweeps, starfish, 100 GHz
    SweepSpec fixed_gamma;
    fixed_gamma.concentrations = {0.01, 0.02, 0.05};
    fixed_gamma.protocols = {Protocol::Starfish};
    fixed_gamma.realizations_per_point = kSeeds;
    fixed_gamma.linewidth_mode = LinewidthMode::FixedGamma;
    fixed_gamma.fixed_gamma_ghz = 19.8;
    const EnsembleStats gamma_stats = run_sweep(fixed_gamma, model);
    save("fixed_gamma.csv", gamma_stats);

    SweepSpec fixed_c;
    fixed_c.concentrations = {0.01};
    fixed_c.protocols = {Protocol::Starfish};
    fixed_c.realizations_per_point = kSeeds;
    fixed_c.linewidth_mode = LinewidthMode::FixedConcentrationVaryGamma;
    fixed_c.gammas_ghz = {19.8, 50.0, 91.8};
    const EnsembleStats c_stats = run_sweep(fixed_c, model);
    save("fixed_concentration.csv", c_stats);

    // 3. ceiling over every 100 GHz run
    {
        const auto ceiling = static_cast<std::size_t>(std::floor(100.0 / spacing)) + 1;
        std::size_t runs = 0, worst = 0, failed = 0;
        for (const auto* s : {&main_stats, &gamma_stats, &c_stats}) {
            for (const auto& ps : s->points) {
                for (const auto& r : ps.replicates) {
                    ++runs;
                    worst = std::max(worst, r.qubits);
                    failed += r.failed;
                }
            }
        }
        report(3, worst <= ceiling && failed == 0,
               fmt("max qubits %zu <= ceiling %zu over %zu runs at 100 GHz (%zu failed runs)", worst, ceiling, runs,
                   failed));
    }

    // 5. saturation
    {
        bool pass = true;
        std::string detail;
        for (auto p : {Protocol::Starfish, Protocol::CompactStarfish}) {
            const double m1 = find(main_stats, p, 0.01).mean_qubits, m5 = find(main_stats, p, 0.05).mean_qubits;
            const double rel = std::abs(m5 - m1) / std::min(m1, m5);
            pass &= m1 >= 70 && m1 <= 120 && m5 >= 70 && m5 <= 120 && rel < 0.25;
            detail += fmt("%s mean qubits %.1f (1%%), %.1f (5%%), rel diff %.3f; ", std::string(to_string(p)).c_str(),
                          m1, m5, rel);
        }
        report(5, pass, detail + "bands [70, 120], rel diff < 0.25");
    }

    // 6. growth at low concentration
    {
        const auto& low = find(main_stats, Protocol::Line, 0.001);
        const auto& mid = find(main_stats, Protocol::Line, 0.01);
        report(6, low.mean_qubits >= 15 && low.mean_qubits <= 45 && mid.mean_qubits >= 60 && mid.mean_qubits <= 120,
               fmt("line mean qubits %.1f +- %.1f at 0.1%% in [15, 45], %.1f +- %.1f at 1%% in [60, 120]",
                   low.mean_qubits, low.std_qubits, mid.mean_qubits, mid.std_qubits));
    }

    // 7. connectivity ordering
    {
        const double line = find(main_stats, Protocol::Line, 0.01).mean_degree;
        const double star = find(main_stats, Protocol::Starfish, 0.01).mean_degree;
        const auto& csf = find(main_stats, Protocol::CompactStarfish, 0.01);
        report(7, csf.mean_degree >= star && star > line && csf.mean_degree >= 30 && csf.mean_degree <= 70,
               fmt("mean degree at 1%%: compact starfish %.2f +- %.2f >= starfish %.2f > line %.2f; compact starfish "
                   "in [30, 70]",
                   csf.mean_degree, csf.std_degree, star, line));
    }

    // 9. gate-type imbalance over the criterion 7 runs
    {
        std::size_t inter = 0, block = 0;
        for (auto p : {Protocol::Line, Protocol::Starfish, Protocol::CompactStarfish}) {
            for (const auto& r : find(main_stats, p, 0.01).replicates) {
                inter += r.interaction_edges;
                block += r.blockade_edges;
            }
        }
        report(9, inter > block, fmt("interaction edges %zu > blockade edges %zu", inter, block));
    }

    // 10. decoupled concentration and linewidth
    {
        std::vector<double> degree;
        for (double c : fixed_gamma.concentrations) degree.push_back(find(gamma_stats, Protocol::Starfish, c).mean_degree);
        const bool increasing = degree[0] < degree[1] && degree[1] < degree[2];
        std::vector<double> qubits;
        for (double g : fixed_c.gammas_ghz) qubits.push_back(find(c_stats, Protocol::Starfish, 0.01, g).mean_qubits);
        const auto [lo, hi] = std::minmax_element(qubits.begin(), qubits.end());
        const double spread = (*hi - *lo) / *lo;
        report(10, increasing && spread < 0.15,
               fmt("fixed gamma 19.8 GHz: starfish mean degree %.2f, %.2f, %.2f at c = 1, 2, 5%% (strictly increasing); "
                   "fixed c = 1%%: mean qubits %.1f, %.1f, %.1f at gamma 19.8, 50, 91.8 GHz, spread %.3f < 0.15",
                   degree[0], degree[1], degree[2], qubits[0], qubits[1], qubits[2], spread));
    }

    // 8. 1000 GHz tuning range
    {
        SweepSpec large;
        large.concentrations = {0.05};
        large.tuning_ranges_ghz = {1000.0};
        large.protocols = {Protocol::CompactStarfish};
        large.realizations_per_point = 3;
        t0 = std::chrono::steady_clock::now();
        const auto stats = run_sweep(large, model);
        save("large_range.csv", stats);
        const auto& ps = stats.points.front();
        const auto ceiling = static_cast<std::size_t>(std::floor(1000.0 / spacing)) + 1;
        std::size_t worst = 0;
        for (const auto& r : ps.replicates) worst = std::max(worst, r.qubits);
        report(8, ps.mean_qubits >= 500 && ps.mean_qubits <= 1200 && ps.mean_degree >= 60 && ps.mean_degree <= 150 &&
                      worst <= ceiling && ps.failed == 0,
               fmt("compact starfish, 1000 GHz, 5%%, 3 seeds, %.0f nm sphere: mean qubits %.1f in [500, 1200], mean "
                   "degree %.2f in [60, 150], max %zu <= ceiling %zu (%.1f s)",
                   model.crystal.sphere_radius_nm, ps.mean_qubits, ps.mean_degree, worst, ceiling, seconds_since(t0)));
    }

    // 11. oracle suites
    {
        double measure_gap = 0.0;
        const long spatial = spatial_index_oracle(model);
        const long reserved = reserved_oracle(model.levels, model.ctrl, measure_gap);
        const long candidates = candidate_oracle(model);
        report(11, spatial == 0 && reserved == 0 && candidates == 0,
               fmt("disagreements: spatial index %ld, reserved comb scan %ld (measure gap %.3f MHz), candidate sets %ld",
                   spatial, reserved, measure_gap, candidates));
    }

    // 12. determinism: the main sweep again on several threads
    {
        const std::string reference = stats_csv(main_stats);
        t0 = std::chrono::steady_clock::now();
        const auto again = run_sweep(main_spec, model, {4, {}});
        const bool same = stats_csv(again) == reference;
        bool replicates_same = true;
        for (std::size_t i = 0; i < again.points.size(); ++i) {
            for (std::size_t r = 0; r < again.points[i].replicates.size(); ++r) {
                const auto& a = again.points[i].replicates[r];
                const auto& b = main_stats.points[i].replicates[r];
                replicates_same &= a.crystal_seed == b.crystal_seed && a.qubits == b.qubits &&
                                   a.interaction_edges == b.interaction_edges && a.blockade_edges == b.blockade_edges;
            }
        }
        report(12, same && replicates_same,
               fmt("main sweep (%zu rows) on 1 and 4 threads: stats CSV %s, replicates %s (%.1f s and %.1f s)",
                   main_stats.points.size(), same ? "identical" : "differs", replicates_same ? "identical" : "differ",
                   main_seconds, seconds_since(t0)));
    }

    std::printf("%d of 12 criteria failed (%.1f s)\n", failures, seconds_since(t_start));
    return failures == 0 ? 0 : 1;
}
