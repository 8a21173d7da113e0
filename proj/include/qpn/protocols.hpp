#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qpn/lattice.hpp"
#include "qpn/physics.hpp"
#include "qpn/spatial_index.hpp"
#include "qpn/spectral.hpp"

namespace qpn {

enum class Protocol { Line, Starfish, CompactStarfish };
enum class FirstQubitRule { NearestCenter, RandomInRange };

std::string_view to_string(Protocol p);
std::optional<Protocol> parse_protocol(std::string_view name);
std::string_view to_string(FirstQubitRule r);
std::optional<FirstQubitRule> parse_first_qubit_rule(std::string_view name);

struct ProtocolConfig {
    Protocol protocol = Protocol::Starfish;
    std::optional<std::size_t> max_qubits;
    FirstQubitRule first_qubit_rule = FirstQubitRule::NearestCenter;
    std::uint64_t seed = 0;

    void validate() const;
};

struct Qubit {
    std::uint32_t dopant_id = 0;
    Vec3 position;
    double nu_ghz = 0.0;
    /// Index of the qubit it was found around; -1 for the first qubit.
    std::int64_t parent = -1;
};

struct Edge {
    std::uint32_t i = 0;  // 0-based qubit indices, i < j
    std::uint32_t j = 0;
    GateType type = GateType::None;
    double delta_nu_mhz = 0.0;
};

struct ProcessorNode {
    std::vector<Qubit> qubits;  // discovery order
    std::vector<Edge> edges;    // all classifiable qubit pairs, sorted by (i, j)
    Protocol protocol = Protocol::Starfish;
    std::uint64_t seed = 0;
    std::string diagnostic;  // non-empty when no seed ion was admissible

    std::size_t count(GateType type) const;
};

/// Everything a candidate query needs. References must outlive the context.
struct SearchContext {
    const CrystalRealization& crystal;
    const SpatialIndex& index;
    const SpectralLedger& ledger;
    const GateRules& rules;
    const MaterialConstants& material;
    double r_max_nm;
    /// One flag per dopant (by position in crystal.dopants).
    const std::vector<bool>& is_qubit;
};

/// Radius past which no pair can reach the smallest usable shift.
double search_radius_nm(const GateRules& rules, const MaterialConstants& material);

/// Non-qubit dopants that can run a two-qubit gate with the dopant at
/// `qubit_index` and whose frequency the ledger still admits, ascending.
std::vector<std::uint32_t> find_candidates(const SearchContext& ctx, std::uint32_t qubit_index, bool blockade_only);

struct NodeSetup {
    const GateRules& rules;
    const LevelStructure& levels;
    const ControlRegionSpec& ctrl;
    const TuningRange& range;
    const MaterialConstants& material;
};

/// Builds a processor node from a frequency-assigned, tuning-filtered crystal.
ProcessorNode run_protocol(const CrystalRealization& crystal, const ProtocolConfig& cfg, const NodeSetup& setup);

/// Mean degree 2|E|/|Q|; empty when the node has no qubits.
std::optional<double> connections_per_qubit(const ProcessorNode& node);

}  // namespace qpn
