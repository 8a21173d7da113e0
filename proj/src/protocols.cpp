#include "qpn/protocols.hpp"

#include <algorithm>
#include <limits>

#include "qpn/errors.hpp"

namespace qpn {

std::string_view to_string(Protocol p) {
    switch (p) {
        case Protocol::Line: return "line";
        case Protocol::Starfish: return "starfish";
        case Protocol::CompactStarfish: return "compact_starfish";
    }
    return "unknown";
}

std::optional<Protocol> parse_protocol(std::string_view name) {
    if (name == "line") return Protocol::Line;
    if (name == "starfish") return Protocol::Starfish;
    if (name == "compact_starfish" || name == "compact-starfish" || name == "csf") return Protocol::CompactStarfish;
    return std::nullopt;
}

std::string_view to_string(FirstQubitRule r) {
    return r == FirstQubitRule::NearestCenter ? "nearest_center" : "random_in_range";
}

std::optional<FirstQubitRule> parse_first_qubit_rule(std::string_view name) {
    if (name == "nearest_center") return FirstQubitRule::NearestCenter;
    if (name == "random_in_range") return FirstQubitRule::RandomInRange;
    return std::nullopt;
}

void ProtocolConfig::validate() const {
    if (max_qubits && *max_qubits < 1) throw ConfigError("max_qubits must be at least 1");
}

std::size_t ProcessorNode::count(GateType type) const {
    return static_cast<std::size_t>(
        std::count_if(edges.begin(), edges.end(), [type](const Edge& e) { return e.type == type; }));
}

double search_radius_nm(const GateRules& rules, const MaterialConstants& material) {
    return interaction_radius_nm(rules.interaction_min_mhz * 1e6, material);
}

namespace {

struct Partner {
    std::uint32_t index;
    GateType type;
};

// Dopants within r_max whose shift on `qubit_index` is usable, ignoring the
// ledger and qubit membership; those only shrink the set over time.
std::vector<Partner> interacting_partners(const SearchContext& ctx, std::uint32_t qubit_index, bool blockade_only) {
    const auto& dopants = ctx.crystal.dopants;
    const Dopant& q = dopants[qubit_index];
    std::vector<Partner> out;
    for (auto idx : ctx.index.neighbors_within(q.position, ctx.r_max_nm)) {
        if (idx == qubit_index) continue;
        const double shift_mhz = dipole_shift_hz(dopants[idx], q, ctx.material) * 1e-6;
        const GateType type = classify_interaction(shift_mhz, ctx.rules);
        if (type == GateType::None || (blockade_only && type != GateType::Blockade)) continue;
        out.push_back({idx, type});
    }
    return out;
}

bool still_available(const SearchContext& ctx, std::uint32_t idx) {
    return !ctx.is_qubit[idx] && ctx.ledger.admissible(ctx.crystal.dopants[idx].frequency_ghz);
}

class NodeBuilder {
   public:
    NodeBuilder(const CrystalRealization& crystal, const ProtocolConfig& cfg, const NodeSetup& setup)
        : crystal_(crystal),
          cfg_(cfg),
          setup_(setup),
          r_max_(search_radius_nm(setup.rules, setup.material)),
          index_(build_index(crystal, r_max_)),
          ledger_(setup.levels, setup.ctrl, setup.range),
          is_qubit_(crystal.size(), false),
          rng_(make_rng(cfg.seed)),
          ctx_{crystal_, index_, ledger_, setup.rules, setup.material, r_max_, is_qubit_} {
        node_.protocol = cfg.protocol;
        node_.seed = cfg.seed;
    }

    ProcessorNode run() {
        if (!place_first_qubit()) {
            node_.diagnostic = "no dopant with an admissible frequency";
            return std::move(node_);
        }
        switch (cfg_.protocol) {
            case Protocol::Starfish: starfish(false); break;
            case Protocol::Line: line(); break;
            case Protocol::CompactStarfish:
                starfish(true);
                starfish(false);
                break;
        }
        complete_edges();
        return std::move(node_);
    }

   private:
    bool full() const { return cfg_.max_qubits && node_.qubits.size() >= *cfg_.max_qubits; }

    bool place_first_qubit() {
        std::vector<std::uint32_t> eligible;
        for (std::uint32_t i = 0; i < crystal_.size(); ++i) {
            if (ledger_.admissible(crystal_.dopants[i].frequency_ghz)) eligible.push_back(i);
        }
        if (eligible.empty()) return false;
        std::uint32_t pick = eligible.front();
        if (cfg_.first_qubit_rule == FirstQubitRule::RandomInRange) {
            pick = eligible[uniform_index(rng_, eligible.size())];
        } else {
            double best = std::numeric_limits<double>::infinity();
            for (auto i : eligible) {
                const double r2 = crystal_.dopants[i].position.norm2();
                if (r2 < best) {
                    best = r2;
                    pick = i;
                }
            }
        }
        add_qubit(pick, -1);
        return true;
    }

    void add_qubit(std::uint32_t dopant_index, std::int64_t parent) {
        const Dopant& d = crystal_.dopants[dopant_index];
        ledger_.add(d.frequency_ghz);
        is_qubit_[dopant_index] = true;
        qubit_dopant_.push_back(dopant_index);
        node_.qubits.push_back({d.id, d.position, d.frequency_ghz, parent});
    }

    // One search step around qubit `qs`: adds a random candidate if any.
    bool grow_from(std::size_t qs, bool blockade_only) {
        if (cached_qs_ != qs || cached_blockade_ != blockade_only) {
            partners_ = interacting_partners(ctx_, qubit_dopant_[qs], blockade_only);
            cached_qs_ = qs;
            cached_blockade_ = blockade_only;
        }
        candidates_.clear();
        for (const auto& p : partners_) {
            if (still_available(ctx_, p.index)) candidates_.push_back(p.index);
        }
        if (candidates_.empty()) return false;
        add_qubit(candidates_[uniform_index(rng_, candidates_.size())], static_cast<std::int64_t>(qs));
        return true;
    }

    // Searches around qubit 1 until exhausted, then qubit 2, and so on.
    void starfish(bool blockade_only) {
        cached_qs_ = kNoCache;
        std::size_t qs = 0;
        while (qs < node_.qubits.size() && !full()) {
            if (!grow_from(qs, blockade_only)) ++qs;
        }
    }

    // Searches around the newest qubit; falls back to earlier ones when it is
    // exhausted. Candidate sets only shrink, so an exhausted qubit stays so.
    void line() {
        cached_qs_ = kNoCache;
        std::vector<bool> exhausted;
        auto qs = static_cast<std::int64_t>(node_.qubits.size()) - 1;
        while (qs >= 0 && !full()) {
            exhausted.resize(node_.qubits.size(), false);
            if (grow_from(static_cast<std::size_t>(qs), false)) {
                qs = static_cast<std::int64_t>(node_.qubits.size()) - 1;
                continue;
            }
            exhausted[static_cast<std::size_t>(qs)] = true;
            do {
                --qs;
            } while (qs >= 0 && exhausted[static_cast<std::size_t>(qs)]);
        }
    }

    void complete_edges() {
        const double r2 = r_max_ * r_max_;
        const auto n = node_.qubits.size();
        for (std::size_t i = 0; i < n; ++i) {
            const Dopant& a = crystal_.dopants[qubit_dopant_[i]];
            for (std::size_t j = i + 1; j < n; ++j) {
                const Dopant& b = crystal_.dopants[qubit_dopant_[j]];
                if ((a.position - b.position).norm2() > r2) continue;
                const double shift_mhz = dipole_shift_hz(a, b, setup_.material) * 1e-6;
                const GateType type = classify_interaction(shift_mhz, setup_.rules);
                if (type == GateType::None) continue;
                node_.edges.push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j), type, shift_mhz});
            }
        }
    }

    static constexpr std::size_t kNoCache = std::numeric_limits<std::size_t>::max();

    const CrystalRealization& crystal_;
    const ProtocolConfig& cfg_;
    const NodeSetup& setup_;
    double r_max_;
    SpatialIndex index_;
    SpectralLedger ledger_;
    std::vector<bool> is_qubit_;
    Rng rng_;
    SearchContext ctx_;
    ProcessorNode node_;
    std::vector<std::uint32_t> qubit_dopant_;
    std::size_t cached_qs_ = kNoCache;
    bool cached_blockade_ = false;
    std::vector<Partner> partners_;
    std::vector<std::uint32_t> candidates_;
};

}  // namespace

std::vector<std::uint32_t> find_candidates(const SearchContext& ctx, std::uint32_t qubit_index, bool blockade_only) {
    std::vector<std::uint32_t> out;
    for (const auto& p : interacting_partners(ctx, qubit_index, blockade_only)) {
        if (still_available(ctx, p.index)) out.push_back(p.index);
    }
    return out;
}

ProcessorNode run_protocol(const CrystalRealization& crystal, const ProtocolConfig& cfg, const NodeSetup& setup) {
    cfg.validate();
    return NodeBuilder(crystal, cfg, setup).run();
}

std::optional<double> connections_per_qubit(const ProcessorNode& node) {
    if (node.qubits.empty()) return std::nullopt;
    return 2.0 * static_cast<double>(node.edges.size()) / static_cast<double>(node.qubits.size());
}

}  // namespace qpn
