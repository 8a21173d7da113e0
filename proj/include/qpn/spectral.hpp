#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "qpn/interval_set.hpp"
#include "qpn/physics.hpp"

namespace qpn {

enum class GroundLevel : int { Zero = 0, One = 1, Aux = 2 };
enum class ExcitedLevel : int { E = 0, E32 = 1, Third = 2 };

/// Hyperfine offsets (MHz) of the three ground and three excited levels.
/// Index order is {|0>, |1>, |aux>} and {|e>, |3/2e>, third}; the first entry
/// of each triple is the zero reference by convention.
struct LevelStructure {
    std::array<double, 3> ground_offsets_mhz{};
    std::array<double, 3> excited_offsets_mhz{};

    /// Optical transition offset relative to |0> -> |e>, MHz.
    double transition_mhz(int ground, int excited) const {
        return excited_offsets_mhz[static_cast<std::size_t>(excited)] - ground_offsets_mhz[static_cast<std::size_t>(ground)];
    }
    double transition_mhz(GroundLevel g, ExcitedLevel e) const {
        return transition_mhz(static_cast<int>(g), static_cast<int>(e));
    }

    /// Strict check: distinct offsets and nine distinct transitions.
    void validate() const;
};

struct ControlRegion {
    int ground = 0;
    int excited = 0;
    double width_mhz = 20.0;
};

struct ControlRegionSpec {
    std::vector<ControlRegion> regions;
    void validate() const;
};

enum class GateType { None, Interaction, Blockade };
std::string_view to_string(GateType type);

struct GateRules {
    double interaction_min_mhz = 0.1;
    double blockade_min_mhz = 7.0;
    double tq_pulse_bandwidth_mhz = 7.0;
    /// Signed shifts (MHz) unusable for any two-qubit gate.
    IntervalSet forbidden_shifts;

    void validate() const;
};

/// Site-1 153Eu defaults; data/default.yaml carries the same values.
LevelStructure default_level_structure();
ControlRegionSpec default_control_regions();

/// Frequencies (GHz, relative to the qubit's own |0> -> |e> line) where another
/// qubit's |0> -> |e> transition may not sit.
///
/// First, every offset at which a non-qubit ion could be pumped by this
/// qubit's control light is collected: a spectator transition (s, j) falling
/// inside a control region marks all transitions from the other two ground
/// states as forbidden drive frequencies. Second, a second qubit's own control
/// regions may not touch that forbidden drive set, which maps it back onto the
/// second qubit's |0> -> |e> frequency.
IntervalSet reserved_offsets(const LevelStructure& levels, const ControlRegionSpec& ctrl);
IntervalSet reserved_intervals(double nu_q_ghz, const LevelStructure& levels, const ControlRegionSpec& ctrl);

/// Best-case frequency footprint per qubit: half the reserved measure, GHz.
double min_channel_spacing(const LevelStructure& levels, const ControlRegionSpec& ctrl);

/// Dipole shifts (signed MHz) that push another |0>/|1> transition into
/// resonance with a gate pulse, plus the too-slow band around zero.
IntervalSet forbidden_shift_intervals(const LevelStructure& levels, double interaction_min_mhz,
                                      double tq_pulse_bandwidth_mhz);

/// Gate rules with a computed (or explicitly overridden) forbidden set. The
/// band (-interaction_min, +interaction_min) is always included.
GateRules make_gate_rules(const LevelStructure& levels, double interaction_min_mhz = 0.1,
                          double blockade_min_mhz = 7.0, std::optional<double> tq_pulse_bandwidth_mhz = {},
                          std::optional<std::vector<Interval>> forbidden_override = {});

GateType classify_interaction(double delta_nu_mhz, const GateRules& rules);

/// Frequency bookkeeping for the qubits of one node.
class SpectralLedger {
   public:
    SpectralLedger(const LevelStructure& levels, const ControlRegionSpec& ctrl, const TuningRange& range);

    /// In the tuning range, outside every reserved set, and no existing qubit
    /// inside the candidate's own reserved set.
    bool admissible(double candidate_ghz) const;
    /// Throws ContractError if `nu_ghz` is not admissible.
    void add(double nu_ghz);

    std::span<const double> qubit_frequencies() const { return frequencies_; }
    const IntervalSet& reserved_union() const { return reserved_union_; }
    std::span<const IntervalSet> per_qubit_reserved() const { return per_qubit_; }
    const IntervalSet& offsets() const { return offsets_; }
    const TuningRange& range() const { return range_; }
    std::size_t size() const { return frequencies_.size(); }

    /// Re-derives both ledger invariants from scratch.
    bool invariants_hold() const;

   private:
    IntervalSet offsets_;
    TuningRange range_;
    std::vector<double> frequencies_;
    std::vector<double> sorted_frequencies_;
    std::vector<IntervalSet> per_qubit_;
    IntervalSet reserved_union_;
};

}  // namespace qpn
