#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "qpn/lattice.hpp"
#include "qpn/physics.hpp"
#include "qpn/protocols.hpp"
#include "qpn/spectral.hpp"

namespace qpn {

/// Every model parameter needed to go from a seed to a processor node.
struct ModelConfig {
    LatticeSpec lattice = default_y2sio5_lattice();
    CrystalParams crystal;
    MaterialConstants material;
    SpectralLineModel line;
    TuningRange tuning = TuningRange::total_width(100.0);
    LevelStructure levels = default_level_structure();
    ControlRegionSpec ctrl = default_control_regions();
    GateRules rules = make_gate_rules(default_level_structure());
    ProtocolConfig protocol;
    /// When unset the protocol seed is derived from the crystal seed.
    std::optional<std::uint64_t> protocol_seed;

    void validate() const;
};

struct Realization {
    CrystalRealization crystal;  // frequency-assigned and tuning-filtered
    std::size_t dopants_in_sphere = 0;
    double fwhm_ghz = 0.0;
};

/// lattice -> frequencies -> tuning filter for `model.crystal.seed`.
Realization realize(const ModelConfig& model, unsigned threads = 1);

/// Protocol seed used for a given crystal seed when none is configured.
std::uint64_t protocol_seed_for(std::uint64_t crystal_seed, Protocol protocol);

/// One end-to-end node for the configured seed and protocol.
ProcessorNode generate_node(const ModelConfig& model, unsigned threads = 1);
ProcessorNode generate_node(const ModelConfig& model, const Realization& realization);

/// Stable seed hash over (base, point, replicate); SplitMix64 chaining.
std::uint64_t derive_seed(std::uint64_t base_seed, std::uint64_t point_index, std::uint64_t replicate_index);

enum class LinewidthMode { Coupled, FixedGamma, FixedConcentrationVaryGamma };

struct SweepSpec {
    std::vector<double> concentrations{0.001, 0.002, 0.005, 0.01, 0.02, 0.05};
    std::vector<double> tuning_ranges_ghz{100.0};  // total widths
    std::vector<Protocol> protocols{Protocol::Line, Protocol::Starfish, Protocol::CompactStarfish};
    std::size_t realizations_per_point = 10;
    std::uint64_t base_seed = 0;
    LinewidthMode linewidth_mode = LinewidthMode::Coupled;
    double fixed_gamma_ghz = 19.8;
    std::vector<double> gammas_ghz;  // FixedConcentrationVaryGamma only

    void validate() const;
};

/// A crystal-level grid point; all protocols share its realizations.
struct CrystalPoint {
    std::size_t index = 0;
    double c_total = 0.0;
    double gamma_ghz = 0.0;
    double tuning_ghz = 0.0;
};

std::vector<CrystalPoint> crystal_points(const SweepSpec& spec, const SpectralLineModel& line);

struct ReplicateResult {
    std::uint64_t crystal_seed = 0;
    std::size_t qubits = 0;
    double degree = 0.0;
    std::size_t interaction_edges = 0;
    std::size_t blockade_edges = 0;
    bool failed = false;
    std::string note;
};

struct PointStats {
    Protocol protocol = Protocol::Starfish;
    CrystalPoint point;
    std::size_t n_realizations = 0;
    double mean_qubits = 0.0;
    double std_qubits = 0.0;
    double mean_degree = 0.0;
    double std_degree = 0.0;
    std::size_t failed = 0;
    double wall_seconds = 0.0;
    std::vector<ReplicateResult> replicates;
};

struct EnsembleStats {
    std::vector<PointStats> points;  // protocol-major, then crystal point
};

struct SweepOptions {
    unsigned threads = 1;
    std::function<void(const std::string&)> log;
};

/// Runs every (crystal point, replicate) pipeline and aggregates mean and
/// sample standard deviation per (protocol, point). Results are slotted by
/// (point, replicate), so they do not depend on thread count or scheduling.
EnsembleStats run_sweep(const SweepSpec& spec, const ModelConfig& model, const SweepOptions& options = {});

/// Mean and sample standard deviation (n - 1); std is 0 for fewer than two values.
std::pair<double, double> mean_std(const std::vector<double>& values);

}  // namespace qpn
