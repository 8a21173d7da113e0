#include "qpn/manifest.hpp"

#include <chrono>
#include <ctime>

#include "qpn/io.hpp"

namespace qpn {

namespace {

nlohmann::json vec(const Vec3& v) { return {v.x, v.y, v.z}; }

const char* ground_name(int g) { return g == 0 ? "0" : (g == 1 ? "1" : "aux"); }
const char* excited_name(int e) { return e == 0 ? "e" : (e == 1 ? "3/2e" : "third"); }

}  // namespace

nlohmann::json config_to_json(const RunConfig& cfg) {
    using nlohmann::json;
    const auto& m = cfg.model;
    json j;
    j["config_file"] = cfg.source.string();
    j["lattice_file"] = cfg.lattice_path.string();
    j["lattice"] = {{"name", m.lattice.name},
                    {"cell_volume_nm3", m.lattice.cell_volume()},
                    {"yttrium_density_nm3", m.lattice.yttrium_density()},
                    {"positions", m.lattice.yttrium_sites.size()}};
    json orient = json::array();
    for (const auto& d : m.crystal.orientations.directions) orient.push_back(vec(d));
    j["crystal"] = {{"concentration", m.crystal.c_total},
                    {"radius_nm", m.crystal.sphere_radius_nm},
                    {"site_filter", m.crystal.site_filter},
                    {"site1_fraction", m.crystal.site1_fraction},
                    {"seed", m.crystal.seed},
                    {"max_expected_dopants", m.crystal.max_expected_dopants},
                    {"orientation", m.crystal.orientations.isotropic ? "isotropic" : "set"},
                    {"orientation_set", orient}};
    j["material"] = {{"delta_mu_cm", m.material.delta_mu_cm},
                     {"epsilon_dc", m.material.epsilon_dc},
                     {"optical_t1_s", m.material.optical_t1_s},
                     {"c_dd_nm6_per_s", m.material.c_dd_nm6_per_s}};
    j["line"] = {{"gamma0_ghz", m.line.gamma0_ghz},
                 {"gamma_c_ghz", m.line.gamma_c_ghz},
                 {"fixed_gamma_ghz", m.line.explicit_gamma_ghz ? json(*m.line.explicit_gamma_ghz) : json(nullptr)},
                 {"center_ghz", m.line.line_center_ghz}};
    j["tuning"] = {{"range_ghz", 2.0 * m.tuning.half_width_ghz}, {"center_ghz", m.tuning.center_ghz}};
    j["levels"] = {{"ground_offsets_mhz", m.levels.ground_offsets_mhz},
                   {"excited_offsets_mhz", m.levels.excited_offsets_mhz}};
    json regions = json::array();
    for (const auto& r : m.ctrl.regions) {
        regions.push_back({{"ground", ground_name(r.ground)}, {"excited", excited_name(r.excited)}, {"width_mhz", r.width_mhz}});
    }
    j["control_regions"] = regions;
    json forbidden = json::array();
    for (const auto& iv : m.rules.forbidden_shifts.intervals()) forbidden.push_back({iv.lo, iv.hi});
    j["gate"] = {{"interaction_min_mhz", m.rules.interaction_min_mhz},
                 {"blockade_min_mhz", m.rules.blockade_min_mhz},
                 {"tq_pulse_bandwidth_mhz", m.rules.tq_pulse_bandwidth_mhz},
                 {"forbidden_shifts_mhz", forbidden},
                 {"forbidden_overridden", cfg.gate.forbidden_shifts_mhz.has_value()}};
    j["protocol"] = {{"name", to_string(m.protocol.protocol)},
                     {"max_qubits", m.protocol.max_qubits ? json(*m.protocol.max_qubits) : json(nullptr)},
                     {"first_qubit", to_string(m.protocol.first_qubit_rule)},
                     {"seed", m.protocol_seed ? json(*m.protocol_seed) : json(nullptr)}};
    json protocols = json::array();
    for (auto p : cfg.sweep.protocols) protocols.push_back(to_string(p));
    j["sweep"] = {{"concentrations", cfg.sweep.concentrations},
                  {"tuning_ranges_ghz", cfg.sweep.tuning_ranges_ghz},
                  {"protocols", protocols},
                  {"realizations", cfg.sweep.realizations_per_point},
                  {"base_seed", cfg.sweep.base_seed},
                  {"linewidth_mode", to_string(cfg.sweep.linewidth_mode)},
                  {"fixed_gamma_ghz", cfg.sweep.fixed_gamma_ghz},
                  {"gammas_ghz", cfg.sweep.gammas_ghz}};
    j["threads"] = cfg.threads;
    return j;
}

nlohmann::json manifest_header(const std::string& command, const std::string& status) {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char stamp[32];
    std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    return {{"schema", kManifestSchema},
            {"tool", "qpnode"},
            {"version", QPN_VERSION},
            {"command", command},
            {"status", status},
            {"created_utc", stamp},
            {"schemas",
             {{"qubits", kQubitSchema}, {"edges", kEdgeSchema}, {"stats", kStatsSchema}, {"intervals", kIntervalSchema}}}};
}

}  // namespace qpn
