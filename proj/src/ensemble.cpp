#include "qpn/ensemble.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <mutex>
#include <thread>

#include "qpn/errors.hpp"

namespace qpn {

void ModelConfig::validate() const {
    lattice.validate();
    crystal.validate();
    material.validate();
    line.validate();
    tuning.validate();
    ctrl.validate();
    rules.validate();
    protocol.validate();
}

Realization realize(const ModelConfig& model, unsigned threads) {
    Realization out;
    CrystalRealization crystal = build_crystal(model.lattice, model.crystal, threads);
    out.dopants_in_sphere = crystal.size();
    out.fwhm_ghz = inhomogeneous_fwhm(model.line, model.crystal.c_total);
    assign_frequencies(crystal, out.fwhm_ghz, model.line.line_center_ghz, model.crystal.seed);
    out.crystal = apply_tuning_filter(crystal, model.tuning);
    return out;
}

std::uint64_t protocol_seed_for(std::uint64_t crystal_seed, Protocol protocol) {
    return mix64(crystal_seed, 0x70726f746f636f6cULL, static_cast<std::uint64_t>(protocol) + 1);
}

ProcessorNode generate_node(const ModelConfig& model, const Realization& realization) {
    ProtocolConfig cfg = model.protocol;
    cfg.seed = model.protocol_seed.value_or(protocol_seed_for(model.crystal.seed, cfg.protocol));
    const NodeSetup setup{model.rules, model.levels, model.ctrl, model.tuning, model.material};
    return run_protocol(realization.crystal, cfg, setup);
}

ProcessorNode generate_node(const ModelConfig& model, unsigned threads) {
    return generate_node(model, realize(model, threads));
}

std::uint64_t derive_seed(std::uint64_t base_seed, std::uint64_t point_index, std::uint64_t replicate_index) {
    return mix64(base_seed, point_index, replicate_index);
}

void SweepSpec::validate() const {
    if (concentrations.empty() || tuning_ranges_ghz.empty() || protocols.empty()) {
        throw ConfigError("sweep grid must not be empty");
    }
    if (realizations_per_point < 1) throw ConfigError("realizations_per_point must be at least 1");
    for (double c : concentrations) {
        if (!(c > 0.0 && c <= 1.0)) throw ConfigError("sweep concentrations must lie in (0, 1]");
    }
    for (double t : tuning_ranges_ghz) {
        if (!(t > 0.0)) throw ConfigError("sweep tuning ranges must be positive");
    }
    if (linewidth_mode == LinewidthMode::FixedGamma && !(fixed_gamma_ghz > 0.0)) {
        throw ConfigError("fixed linewidth must be positive");
    }
    if (linewidth_mode == LinewidthMode::FixedConcentrationVaryGamma) {
        if (gammas_ghz.empty()) throw ConfigError("linewidth sweep needs a non-empty gamma list");
        for (double g : gammas_ghz) {
            if (!(g > 0.0)) throw ConfigError("sweep linewidths must be positive");
        }
    }
}

std::vector<CrystalPoint> crystal_points(const SweepSpec& spec, const SpectralLineModel& line) {
    std::vector<CrystalPoint> pts;
    for (double tuning : spec.tuning_ranges_ghz) {
        for (double c : spec.concentrations) {
            std::vector<double> gammas;
            switch (spec.linewidth_mode) {
                case LinewidthMode::Coupled: {
                    SpectralLineModel coupled = line;
                    coupled.explicit_gamma_ghz.reset();
                    gammas = {inhomogeneous_fwhm(coupled, c)};
                    break;
                }
                case LinewidthMode::FixedGamma: gammas = {spec.fixed_gamma_ghz}; break;
                case LinewidthMode::FixedConcentrationVaryGamma: gammas = spec.gammas_ghz; break;
            }
            for (double g : gammas) pts.push_back({pts.size(), c, g, tuning});
        }
    }
    return pts;
}

std::pair<double, double> mean_std(const std::vector<double>& values) {
    if (values.empty()) return {0.0, 0.0};
    double sum = 0.0;
    for (double v : values) sum += v;
    const double mean = sum / static_cast<double>(values.size());
    if (values.size() < 2) return {mean, 0.0};
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    return {mean, std::sqrt(ss / static_cast<double>(values.size() - 1))};
}

EnsembleStats run_sweep(const SweepSpec& spec, const ModelConfig& model, const SweepOptions& options) {
    spec.validate();
    model.validate();
    const auto points = crystal_points(spec, model.line);
    const std::size_t reps = spec.realizations_per_point;
    const std::size_t n_protocols = spec.protocols.size();

    // results[protocol][point][replicate]
    std::vector<std::vector<std::vector<ReplicateResult>>> results(
        n_protocols, std::vector<std::vector<ReplicateResult>>(points.size(), std::vector<ReplicateResult>(reps)));
    std::vector<std::vector<double>> seconds(n_protocols, std::vector<double>(points.size(), 0.0));

    std::atomic<std::size_t> next{0};
    std::mutex log_mutex;
    const std::size_t total = points.size() * reps;

    auto worker = [&] {
        for (std::size_t task = next++; task < total; task = next++) {
            const auto& pt = points[task / reps];
            const std::size_t rep = task % reps;
            ModelConfig m = model;
            m.crystal.c_total = pt.c_total;
            m.crystal.seed = derive_seed(spec.base_seed, pt.index, rep);
            m.line.explicit_gamma_ghz = pt.gamma_ghz;
            m.tuning = TuningRange::total_width(pt.tuning_ghz, model.tuning.center_ghz);
            m.protocol_seed.reset();

            const auto t0 = std::chrono::steady_clock::now();
            Realization realization;
            std::string realize_error;
            try {
                realization = realize(m);
            } catch (const std::exception& e) {
                realize_error = e.what();
            }
            const double realize_s =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() / static_cast<double>(n_protocols);

            for (std::size_t p = 0; p < n_protocols; ++p) {
                auto& slot = results[p][pt.index][rep];
                slot.crystal_seed = m.crystal.seed;
                const auto t1 = std::chrono::steady_clock::now();
                if (!realize_error.empty()) {
                    slot.failed = true;
                    slot.note = realize_error;
                } else {
                    try {
                        m.protocol.protocol = spec.protocols[p];
                        const ProcessorNode node = generate_node(m, realization);
                        slot.qubits = node.qubits.size();
                        slot.degree = connections_per_qubit(node).value_or(0.0);
                        slot.interaction_edges = node.count(GateType::Interaction);
                        slot.blockade_edges = node.count(GateType::Blockade);
                        if (!node.diagnostic.empty()) {
                            slot.failed = true;
                            slot.note = node.diagnostic;
                        }
                    } catch (const std::exception& e) {
                        slot.failed = true;
                        slot.note = e.what();
                    }
                }
                const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t1).count();
                std::lock_guard lock(log_mutex);
                seconds[p][pt.index] += dt + realize_s;
                if (options.log) {
                    options.log(std::string(to_string(spec.protocols[p])) + " c=" + std::to_string(pt.c_total) +
                                " gamma=" + std::to_string(pt.gamma_ghz) + " range=" + std::to_string(pt.tuning_ghz) +
                                " rep=" + std::to_string(rep) + " qubits=" + std::to_string(slot.qubits) +
                                " degree=" + std::to_string(slot.degree) + (slot.failed ? " FAILED: " + slot.note : ""));
                }
            }
        }
    };

    const unsigned threads = std::max(1u, options.threads);
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    }

    EnsembleStats stats;
    for (std::size_t p = 0; p < n_protocols; ++p) {
        for (const auto& pt : points) {
            PointStats ps;
            ps.protocol = spec.protocols[p];
            ps.point = pt;
            ps.replicates = results[p][pt.index];
            ps.n_realizations = reps;
            std::vector<double> q, d;
            for (const auto& r : ps.replicates) {
                // failed realizations enter as empty nodes
                q.push_back(static_cast<double>(r.qubits));
                d.push_back(r.degree);
                if (r.failed) ++ps.failed;
            }
            std::tie(ps.mean_qubits, ps.std_qubits) = mean_std(q);
            std::tie(ps.mean_degree, ps.std_degree) = mean_std(d);
            ps.wall_seconds = seconds[p][pt.index];
            stats.points.push_back(std::move(ps));
        }
    }
    return stats;
}

}  // namespace qpn
