#include "qpn/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "qpn/errors.hpp"

namespace qpn {

namespace {
constexpr double kMhzPerGhz = 1000.0;
}

void LevelStructure::validate() const {
    for (const auto* triple : {&ground_offsets_mhz, &excited_offsets_mhz}) {
        const auto& t = *triple;
        if (t[0] == t[1] || t[0] == t[2] || t[1] == t[2]) throw ConfigError("level offsets must be pairwise distinct");
    }
    std::set<double> comb;
    for (int g = 0; g < 3; ++g) {
        for (int e = 0; e < 3; ++e) comb.insert(transition_mhz(g, e));
    }
    if (comb.size() != 9) throw ConfigError("level offsets must produce nine distinct transitions");
}

void ControlRegionSpec::validate() const {
    if (regions.empty()) throw ConfigError("at least one control region is required");
    for (const auto& r : regions) {
        if (!(r.width_mhz > 0.0)) throw ConfigError("control region widths must be positive");
        if (r.ground < 0 || r.ground > 2 || r.excited < 0 || r.excited > 2) {
            throw ConfigError("control region references an unknown level");
        }
    }
}

std::string_view to_string(GateType type) {
    switch (type) {
        case GateType::Interaction: return "interaction";
        case GateType::Blockade: return "blockade";
        case GateType::None: break;
    }
    return "none";
}

void GateRules::validate() const {
    if (!(interaction_min_mhz > 0.0 && interaction_min_mhz < blockade_min_mhz)) {
        throw ConfigError("gate rules need 0 < interaction_min < blockade_min");
    }
    if (!(tq_pulse_bandwidth_mhz > 0.0)) throw ConfigError("two-qubit pulse bandwidth must be positive");
}

LevelStructure default_level_structure() {
    // |0> = +-1/2g, |1> = +-5/2g, |aux> = +-3/2g; |e> = +-1/2e, |3/2e> = +-3/2e, third = +-5/2e
    return {{0.0, 209.2, 90.0}, {0.0, 196.0, 457.0}};
}

ControlRegionSpec default_control_regions() {
    return {{{0, 0, 20.0}, {1, 0, 20.0}, {2, 1, 2.0}}};
}

IntervalSet reserved_offsets(const LevelStructure& levels, const ControlRegionSpec& ctrl) {
    // forbidden drive frequencies, MHz relative to nu_q
    std::vector<Interval> drive;
    for (const auto& region : ctrl.regions) {
        const double centre = levels.transition_mhz(region.ground, region.excited);
        const double half = region.width_mhz / 2.0;
        for (int s = 0; s < 3; ++s) {
            for (int j = 0; j < 3; ++j) {
                const double source = levels.transition_mhz(s, j);
                for (int s2 = 0; s2 < 3; ++s2) {
                    if (s2 == s) continue;
                    for (int j2 = 0; j2 < 3; ++j2) {
                        const double shift = levels.transition_mhz(s2, j2) - source;
                        drive.push_back({centre - half + shift, centre + half + shift});
                    }
                }
            }
        }
    }
    const IntervalSet forbidden_drive(std::move(drive));

    IntervalSet reserved;
    for (const auto& region : ctrl.regions) {
        const double centre = levels.transition_mhz(region.ground, region.excited);
        reserved = reserved.united(forbidden_drive.dilated(region.width_mhz / 2.0).translated(-centre));
    }
    std::vector<Interval> ghz;
    ghz.reserve(reserved.size());
    for (const auto& iv : reserved.intervals()) ghz.push_back({iv.lo / kMhzPerGhz, iv.hi / kMhzPerGhz});
    return IntervalSet(std::move(ghz));
}

IntervalSet reserved_intervals(double nu_q_ghz, const LevelStructure& levels, const ControlRegionSpec& ctrl) {
    return reserved_offsets(levels, ctrl).translated(nu_q_ghz);
}

double min_channel_spacing(const LevelStructure& levels, const ControlRegionSpec& ctrl) {
    return reserved_offsets(levels, ctrl).measure() / 2.0;
}

IntervalSet forbidden_shift_intervals(const LevelStructure& levels, double interaction_min_mhz,
                                      double tq_pulse_bandwidth_mhz) {
    std::vector<Interval> out{{-interaction_min_mhz, interaction_min_mhz}};
    const double half = tq_pulse_bandwidth_mhz / 2.0;
    for (int pulse_ground : {0, 1}) {
        const double pulse = levels.transition_mhz(pulse_ground, 0);
        for (int g : {0, 1}) {
            for (int e = 0; e < 3; ++e) {
                const double t = levels.transition_mhz(g, e);
                if (t == pulse) continue;
                out.push_back({pulse - t - half, pulse - t + half});
            }
        }
    }
    return IntervalSet(std::move(out));
}

GateRules make_gate_rules(const LevelStructure& levels, double interaction_min_mhz, double blockade_min_mhz,
                          std::optional<double> tq_pulse_bandwidth_mhz,
                          std::optional<std::vector<Interval>> forbidden_override) {
    GateRules rules;
    rules.interaction_min_mhz = interaction_min_mhz;
    rules.blockade_min_mhz = blockade_min_mhz;
    rules.tq_pulse_bandwidth_mhz = tq_pulse_bandwidth_mhz.value_or(blockade_min_mhz);
    rules.validate();
    if (forbidden_override) {
        auto pieces = *forbidden_override;
        pieces.push_back({-interaction_min_mhz, interaction_min_mhz});
        rules.forbidden_shifts = IntervalSet(std::move(pieces));
    } else {
        rules.forbidden_shifts = forbidden_shift_intervals(levels, interaction_min_mhz, rules.tq_pulse_bandwidth_mhz);
    }
    return rules;
}

GateType classify_interaction(double delta_nu_mhz, const GateRules& rules) {
    const double magnitude = std::abs(delta_nu_mhz);
    if (magnitude < rules.interaction_min_mhz || rules.forbidden_shifts.contains(delta_nu_mhz)) return GateType::None;
    return magnitude < rules.blockade_min_mhz ? GateType::Interaction : GateType::Blockade;
}

SpectralLedger::SpectralLedger(const LevelStructure& levels, const ControlRegionSpec& ctrl, const TuningRange& range)
    : offsets_(reserved_offsets(levels, ctrl)), range_(range) {}

bool SpectralLedger::admissible(double candidate) const {
    if (!range_.contains(candidate)) return false;
    if (reserved_union_.contains(candidate)) return false;
    if (offsets_.empty() || sorted_frequencies_.empty()) return true;
    // any existing qubit inside candidate + offsets?
    const auto spans = offsets_.intervals();
    const double lo = candidate + spans.front().lo;
    const double hi = candidate + spans.back().hi;
    auto it = std::lower_bound(sorted_frequencies_.begin(), sorted_frequencies_.end(), lo);
    for (; it != sorted_frequencies_.end() && *it < hi; ++it) {
        if (offsets_.contains(*it - candidate)) return false;
    }
    return true;
}

void SpectralLedger::add(double nu) {
    if (!admissible(nu)) throw ContractError("frequency " + std::to_string(nu) + " GHz is not admissible");
    frequencies_.push_back(nu);
    sorted_frequencies_.insert(std::upper_bound(sorted_frequencies_.begin(), sorted_frequencies_.end(), nu), nu);
    per_qubit_.push_back(offsets_.translated(nu));
    for (const auto& iv : per_qubit_.back().intervals()) reserved_union_.insert(iv.lo, iv.hi);
}

bool SpectralLedger::invariants_hold() const {
    IntervalSet rebuilt;
    for (const auto& set : per_qubit_) rebuilt = rebuilt.united(set);
    if (!(rebuilt == reserved_union_)) return false;
    for (std::size_t i = 0; i < frequencies_.size(); ++i) {
        for (std::size_t j = 0; j < frequencies_.size(); ++j) {
            if (i != j && per_qubit_[j].contains(frequencies_[i])) return false;
        }
    }
    return true;
}

}  // namespace qpn
