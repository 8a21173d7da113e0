#include "qpn/config.hpp"

#include <yaml-cpp/yaml.h>

#include <fstream>
#include <set>
#include <sstream>

#include "qpn/errors.hpp"

namespace qpn {

namespace {

class Reader {
   public:
    explicit Reader(std::string origin) : origin_(std::move(origin)) {}

    [[noreturn]] void fail(const YAML::Node& node, const std::string& msg) const {
        const auto mark = node.Mark();
        std::ostringstream os;
        os << origin_;
        if (!mark.is_null()) os << ':' << mark.line + 1 << ':' << mark.column + 1;
        os << ": " << msg;
        throw ConfigError(os.str());
    }

    void require_map(const YAML::Node& node, const std::string& where) const {
        if (!node.IsMap()) fail(node, "'" + where + "' must be a mapping");
    }

    void allow_keys(const YAML::Node& node, const std::string& where, std::initializer_list<const char*> keys) const {
        require_map(node, where);
        const std::set<std::string> allowed(keys.begin(), keys.end());
        for (const auto& kv : node) {
            const auto key = kv.first.as<std::string>();
            if (!allowed.contains(key)) {
                fail(kv.first, "unknown key '" + key + "' in " + (where.empty() ? std::string("top level") : where));
            }
        }
    }

    template <typename T>
    T get(const YAML::Node& node, const std::string& key) const {
        try {
            return node.as<T>();
        } catch (const YAML::Exception&) {
            fail(node, "key '" + key + "' has the wrong type");
        }
    }

    double number(const YAML::Node& parent, const char* key, double fallback) const {
        const auto n = parent[key];
        return n ? get<double>(n, key) : fallback;
    }

    double positive(const YAML::Node& parent, const char* key, double fallback) const {
        const double v = number(parent, key, fallback);
        if (!(v > 0.0)) fail(parent[key] ? parent[key] : parent, std::string("'") + key + "' must be positive");
        return v;
    }

    std::optional<double> optional_number(const YAML::Node& parent, const char* key) const {
        const auto n = parent[key];
        if (!n || n.IsNull()) return std::nullopt;
        return get<double>(n, key);
    }

    Vec3 vec3(const YAML::Node& node, const std::string& key) const {
        if (!node.IsSequence() || node.size() != 3) fail(node, "'" + key + "' must be a list of three numbers");
        return {get<double>(node[0], key), get<double>(node[1], key), get<double>(node[2], key)};
    }

    std::vector<double> numbers(const YAML::Node& node, const std::string& key) const {
        if (!node.IsSequence()) fail(node, "'" + key + "' must be a list");
        std::vector<double> out;
        for (const auto& v : node) out.push_back(get<double>(v, key));
        return out;
    }

    const std::string& origin() const { return origin_; }

   private:
    std::string origin_;
};

YAML::Node parse_yaml(const std::string& text, const std::string& origin) {
    try {
        return YAML::Load(text);
    } catch (const YAML::ParserException& e) {
        throw ConfigError(origin + ":" + std::to_string(e.mark.line + 1) + ":" + std::to_string(e.mark.column + 1) +
                          ": " + e.msg);
    }
}

std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

int ground_level(const Reader& r, const YAML::Node& node) {
    const auto name = r.get<std::string>(node, "ground");
    if (name == "0") return 0;
    if (name == "1") return 1;
    if (name == "aux") return 2;
    r.fail(node, "unknown ground level '" + name + "' (expected 0, 1 or aux)");
}

int excited_level(const Reader& r, const YAML::Node& node) {
    const auto name = r.get<std::string>(node, "excited");
    if (name == "e") return 0;
    if (name == "3/2e") return 1;
    if (name == "third") return 2;
    r.fail(node, "unknown excited level '" + name + "' (expected e, 3/2e or third)");
}

void read_crystal(const Reader& r, const YAML::Node& n, CrystalParams& c) {
    r.allow_keys(n, "crystal", {"concentration", "radius_nm", "site_filter", "site1_fraction", "seed",
                                "max_expected_dopants", "orientation", "orientation_set"});
    c.c_total = r.number(n, "concentration", c.c_total);
    if (!(c.c_total >= 0.0 && c.c_total <= 1.0)) {
        r.fail(n["concentration"], "'concentration' must lie in [0, 1], got " + std::to_string(c.c_total));
    }
    c.sphere_radius_nm = r.positive(n, "radius_nm", c.sphere_radius_nm);
    if (n["site_filter"]) {
        c.site_filter = r.get<int>(n["site_filter"], "site_filter");
        if (c.site_filter < 0 || c.site_filter > 2) r.fail(n["site_filter"], "'site_filter' must be 0, 1 or 2");
    }
    c.site1_fraction = r.number(n, "site1_fraction", c.site1_fraction);
    if (!(c.site1_fraction >= 0.0 && c.site1_fraction <= 1.0)) {
        r.fail(n["site1_fraction"], "'site1_fraction' must lie in [0, 1]");
    }
    if (n["seed"]) c.seed = r.get<std::uint64_t>(n["seed"], "seed");
    c.max_expected_dopants = r.positive(n, "max_expected_dopants", c.max_expected_dopants);
    if (n["orientation"]) {
        const auto mode = r.get<std::string>(n["orientation"], "orientation");
        if (mode == "isotropic") {
            c.orientations = OrientationSet::make_isotropic();
        } else if (mode == "set") {
            c.orientations.isotropic = false;
        } else {
            r.fail(n["orientation"], "'orientation' must be 'set' or 'isotropic'");
        }
    }
    if (n["orientation_set"]) {
        const auto list = n["orientation_set"];
        if (!list.IsSequence() || list.size() == 0) r.fail(list, "'orientation_set' must be a non-empty list");
        c.orientations.directions.clear();
        for (const auto& v : list) {
            const Vec3 d = r.vec3(v, "orientation_set");
            if (std::abs(d.norm() - 1.0) > 1e-6) r.fail(v, "orientation vectors must have unit length");
            c.orientations.directions.push_back(d.normalized());
        }
    }
    if (!c.orientations.isotropic && c.orientations.directions.empty()) {
        r.fail(n, "orientation 'set' requires a non-empty 'orientation_set'");
    }
}

void read_material(const Reader& r, const YAML::Node& n, MaterialConstants& m) {
    r.allow_keys(n, "material", {"delta_mu_cm", "epsilon_dc", "optical_t1_s", "c_dd_nm6_per_s"});
    m.delta_mu_cm = r.positive(n, "delta_mu_cm", m.delta_mu_cm);
    m.epsilon_dc = r.positive(n, "epsilon_dc", m.epsilon_dc);
    m.optical_t1_s = r.positive(n, "optical_t1_s", m.optical_t1_s);
    m.c_dd_nm6_per_s = r.positive(n, "c_dd_nm6_per_s", m.c_dd_nm6_per_s);
}

void read_line(const Reader& r, const YAML::Node& n, SpectralLineModel& l) {
    r.allow_keys(n, "line", {"gamma0_ghz", "gamma_c_ghz", "fixed_gamma_ghz", "center_ghz"});
    l.gamma0_ghz = r.positive(n, "gamma0_ghz", l.gamma0_ghz);
    l.gamma_c_ghz = r.number(n, "gamma_c_ghz", l.gamma_c_ghz);
    if (l.gamma_c_ghz < 0.0) r.fail(n["gamma_c_ghz"], "'gamma_c_ghz' must be non-negative");
    l.explicit_gamma_ghz = r.optional_number(n, "fixed_gamma_ghz");
    if (l.explicit_gamma_ghz && !(*l.explicit_gamma_ghz > 0.0)) r.fail(n["fixed_gamma_ghz"], "'fixed_gamma_ghz' must be positive");
    l.line_center_ghz = r.number(n, "center_ghz", l.line_center_ghz);
}

void read_tuning(const Reader& r, const YAML::Node& n, TuningRange& t) {
    r.allow_keys(n, "tuning", {"range_ghz", "center_ghz"});
    t.half_width_ghz = r.positive(n, "range_ghz", 2.0 * t.half_width_ghz) / 2.0;
    t.center_ghz = r.number(n, "center_ghz", t.center_ghz);
}

void read_levels(const Reader& r, const YAML::Node& n, RunConfig& cfg) {
    r.allow_keys(n, "levels", {"ground_offsets_mhz", "excited_offsets_mhz", "allow_degenerate"});
    auto& lv = cfg.model.levels;
    for (const auto& [key, target] : {std::pair{"ground_offsets_mhz", &lv.ground_offsets_mhz},
                                      std::pair{"excited_offsets_mhz", &lv.excited_offsets_mhz}}) {
        if (!n[key]) continue;
        const auto v = r.numbers(n[key], key);
        if (v.size() != 3) r.fail(n[key], std::string("'") + key + "' needs exactly three values");
        std::copy(v.begin(), v.end(), target->begin());
    }
    if (n["allow_degenerate"]) cfg.allow_degenerate_levels = r.get<bool>(n["allow_degenerate"], "allow_degenerate");
    if (!cfg.allow_degenerate_levels) {
        try {
            lv.validate();
        } catch (const ConfigError& e) {
            r.fail(n, e.what());
        }
    }
}

void read_regions(const Reader& r, const YAML::Node& n, ControlRegionSpec& ctrl) {
    if (!n.IsSequence() || n.size() == 0) r.fail(n, "'control_regions' must be a non-empty list");
    ctrl.regions.clear();
    for (const auto& item : n) {
        r.allow_keys(item, "control_regions entry", {"ground", "excited", "width_mhz"});
        if (!item["ground"] || !item["excited"] || !item["width_mhz"]) {
            r.fail(item, "control region needs 'ground', 'excited' and 'width_mhz'");
        }
        ctrl.regions.push_back({ground_level(r, item["ground"]), excited_level(r, item["excited"]),
                                r.positive(item, "width_mhz", 0.0)});
    }
}

void read_gate(const Reader& r, const YAML::Node& n, GateRulesConfig& g) {
    r.allow_keys(n, "gate", {"interaction_min_mhz", "blockade_min_mhz", "tq_pulse_bandwidth_mhz", "forbidden_shifts_mhz"});
    g.interaction_min_mhz = r.positive(n, "interaction_min_mhz", g.interaction_min_mhz);
    g.blockade_min_mhz = r.positive(n, "blockade_min_mhz", g.blockade_min_mhz);
    if (!(g.interaction_min_mhz < g.blockade_min_mhz)) r.fail(n, "'interaction_min_mhz' must be below 'blockade_min_mhz'");
    g.tq_pulse_bandwidth_mhz = r.optional_number(n, "tq_pulse_bandwidth_mhz");
    if (g.tq_pulse_bandwidth_mhz && !(*g.tq_pulse_bandwidth_mhz > 0.0)) {
        r.fail(n["tq_pulse_bandwidth_mhz"], "'tq_pulse_bandwidth_mhz' must be positive");
    }
    const auto list = n["forbidden_shifts_mhz"];
    if (list && !list.IsNull()) {
        if (!list.IsSequence()) r.fail(list, "'forbidden_shifts_mhz' must be a list of [lo, hi] pairs");
        std::vector<Interval> pieces;
        for (const auto& pair : list) {
            const auto v = r.numbers(pair, "forbidden_shifts_mhz");
            if (v.size() != 2 || !(v[1] > v[0])) r.fail(pair, "forbidden shift intervals must be [lo, hi] with lo < hi");
            pieces.push_back({v[0], v[1]});
        }
        g.forbidden_shifts_mhz = std::move(pieces);
    }
}

void read_protocol(const Reader& r, const YAML::Node& n, RunConfig& cfg) {
    r.allow_keys(n, "protocol", {"name", "max_qubits", "first_qubit", "seed"});
    auto& p = cfg.model.protocol;
    if (n["name"]) {
        const auto name = r.get<std::string>(n["name"], "name");
        const auto parsed = parse_protocol(name);
        if (!parsed) r.fail(n["name"], "unknown protocol '" + name + "'");
        p.protocol = *parsed;
    }
    if (n["max_qubits"] && !n["max_qubits"].IsNull()) {
        const auto cap = r.get<long long>(n["max_qubits"], "max_qubits");
        if (cap < 1) r.fail(n["max_qubits"], "'max_qubits' must be at least 1");
        p.max_qubits = static_cast<std::size_t>(cap);
    }
    if (n["first_qubit"]) {
        const auto name = r.get<std::string>(n["first_qubit"], "first_qubit");
        const auto parsed = parse_first_qubit_rule(name);
        if (!parsed) r.fail(n["first_qubit"], "unknown first-qubit rule '" + name + "'");
        p.first_qubit_rule = *parsed;
    }
    if (n["seed"] && !n["seed"].IsNull()) cfg.model.protocol_seed = r.get<std::uint64_t>(n["seed"], "seed");
}

void read_sweep(const Reader& r, const YAML::Node& n, SweepSpec& s) {
    r.allow_keys(n, "sweep", {"concentrations", "tuning_ranges_ghz", "protocols", "realizations", "base_seed",
                              "linewidth_mode", "fixed_gamma_ghz", "gammas_ghz"});
    if (n["concentrations"]) {
        s.concentrations = r.numbers(n["concentrations"], "concentrations");
        if (s.concentrations.empty()) r.fail(n["concentrations"], "'concentrations' must not be empty");
        for (double c : s.concentrations) {
            if (!(c > 0.0 && c <= 1.0)) r.fail(n["concentrations"], "sweep concentrations must lie in (0, 1]");
        }
    }
    if (n["tuning_ranges_ghz"]) {
        s.tuning_ranges_ghz = r.numbers(n["tuning_ranges_ghz"], "tuning_ranges_ghz");
        if (s.tuning_ranges_ghz.empty()) r.fail(n["tuning_ranges_ghz"], "'tuning_ranges_ghz' must not be empty");
    }
    if (n["protocols"]) {
        const auto list = n["protocols"];
        if (!list.IsSequence() || list.size() == 0) r.fail(list, "'protocols' must be a non-empty list");
        s.protocols.clear();
        for (const auto& item : list) {
            const auto name = r.get<std::string>(item, "protocols");
            const auto parsed = parse_protocol(name);
            if (!parsed) r.fail(item, "unknown protocol '" + name + "'");
            s.protocols.push_back(*parsed);
        }
    }
    if (n["realizations"]) {
        const auto reps = r.get<long long>(n["realizations"], "realizations");
        if (reps < 1) r.fail(n["realizations"], "'realizations' must be at least 1");
        s.realizations_per_point = static_cast<std::size_t>(reps);
    }
    if (n["base_seed"]) s.base_seed = r.get<std::uint64_t>(n["base_seed"], "base_seed");
    if (n["linewidth_mode"]) {
        const auto name = r.get<std::string>(n["linewidth_mode"], "linewidth_mode");
        const auto parsed = parse_linewidth_mode(name);
        if (!parsed) r.fail(n["linewidth_mode"], "unknown linewidth mode '" + name + "'");
        s.linewidth_mode = *parsed;
    }
    s.fixed_gamma_ghz = r.positive(n, "fixed_gamma_ghz", s.fixed_gamma_ghz);
    if (n["gammas_ghz"]) s.gammas_ghz = r.numbers(n["gammas_ghz"], "gammas_ghz");
}

RunConfig parse_run_config(const YAML::Node& root, const Reader& r, const std::filesystem::path& base_dir) {
    RunConfig cfg = default_run_config();
    if (root.IsNull()) {
        cfg.finalize();
        return cfg;
    }
    r.allow_keys(root, "", {"schema_version", "lattice_file", "crystal", "material", "line", "tuning", "levels",
                            "control_regions", "gate", "protocol", "sweep", "output_dir", "threads"});
    if (root["schema_version"] && r.get<int>(root["schema_version"], "schema_version") != 1) {
        r.fail(root["schema_version"], "unsupported schema_version (expected 1)");
    }
    if (root["lattice_file"]) {
        cfg.lattice_path = base_dir / r.get<std::string>(root["lattice_file"], "lattice_file");
        if (!std::filesystem::exists(cfg.lattice_path)) {
            r.fail(root["lattice_file"], "lattice file '" + cfg.lattice_path.string() + "' does not exist");
        }
        cfg.model.lattice = load_lattice(cfg.lattice_path);
    }
    if (root["crystal"]) read_crystal(r, root["crystal"], cfg.model.crystal);
    if (root["material"]) read_material(r, root["material"], cfg.model.material);
    if (root["line"]) read_line(r, root["line"], cfg.model.line);
    if (root["tuning"]) read_tuning(r, root["tuning"], cfg.model.tuning);
    if (root["levels"]) read_levels(r, root["levels"], cfg);
    if (root["control_regions"]) read_regions(r, root["control_regions"], cfg.model.ctrl);
    if (root["gate"]) read_gate(r, root["gate"], cfg.gate);
    if (root["protocol"]) read_protocol(r, root["protocol"], cfg);
    if (root["sweep"]) read_sweep(r, root["sweep"], cfg.sweep);
    if (root["output_dir"]) cfg.output_dir = r.get<std::string>(root["output_dir"], "output_dir");
    if (root["threads"]) {
        const auto t = r.get<long long>(root["threads"], "threads");
        if (t < 1) r.fail(root["threads"], "'threads' must be at least 1");
        cfg.threads = static_cast<unsigned>(t);
    }
    try {
        cfg.finalize();
    } catch (const ConfigError& e) {
        r.fail(root, e.what());
    }
    return cfg;
}

}  // namespace

void RunConfig::finalize() {
    if (!allow_degenerate_levels) model.levels.validate();
    model.rules = make_gate_rules(model.levels, gate.interaction_min_mhz, gate.blockade_min_mhz,
                                  gate.tq_pulse_bandwidth_mhz, gate.forbidden_shifts_mhz);
    model.validate();
    sweep.validate();
}

RunConfig default_run_config() {
    RunConfig cfg;
    cfg.model.crystal.c_total = 0.01;
    cfg.model.crystal.sphere_radius_nm = 100.0;
    cfg.model.crystal.seed = 1;
    cfg.model.crystal.orientations.isotropic = false;
    // C2/c site-symmetry images of one dipole direction
    const double a = 0.5, b = 0.5, c = std::sqrt(0.5);
    cfg.model.crystal.orientations.directions = {{a, b, c}, {-a, b, -c}, {-a, -b, -c}, {a, -b, c}};
    cfg.model.tuning = TuningRange::total_width(100.0);
    cfg.finalize();
    return cfg;
}

RunConfig load_run_config_text(const std::string& yaml, const std::filesystem::path& origin) {
    const Reader r(origin.string());
    return parse_run_config(parse_yaml(yaml, origin.string()), r, origin.has_parent_path() ? origin.parent_path() : ".");
}

RunConfig load_run_config(const std::filesystem::path& path) {
    RunConfig cfg = load_run_config_text(read_text(path), path);
    cfg.source = path;
    return cfg;
}

LatticeSpec load_lattice_text(const std::string& yaml, const std::string& origin) {
    const Reader r(origin);
    const YAML::Node root = parse_yaml(yaml, origin);
    r.allow_keys(root, "lattice", {"name", "cell_vectors_nm", "yttrium_sites"});
    LatticeSpec spec;
    if (root["name"]) spec.name = r.get<std::string>(root["name"], "name");
    const auto cell = root["cell_vectors_nm"];
    if (!cell || !cell.IsSequence() || cell.size() != 3) r.fail(root, "'cell_vectors_nm' must list three vectors");
    for (std::size_t i = 0; i < 3; ++i) spec.cell_vectors[i] = r.vec3(cell[i], "cell_vectors_nm");
    const auto sites = root["yttrium_sites"];
    if (!sites || !sites.IsSequence()) r.fail(root, "'yttrium_sites' must be a list");
    for (const auto& s : sites) {
        r.allow_keys(s, "yttrium_sites entry", {"fractional", "site"});
        if (!s["fractional"] || !s["site"]) r.fail(s, "site entries need 'fractional' and 'site'");
        spec.yttrium_sites.push_back({r.vec3(s["fractional"], "fractional"), r.get<int>(s["site"], "site")});
    }
    try {
        spec.validate();
    } catch (const ConfigError& e) {
        r.fail(root, e.what());
    }
    return spec;
}

LatticeSpec load_lattice(const std::filesystem::path& path) { return load_lattice_text(read_text(path), path.string()); }

std::optional<LinewidthMode> parse_linewidth_mode(std::string_view name) {
    if (name == "coupled") return LinewidthMode::Coupled;
    if (name == "fixed_gamma") return LinewidthMode::FixedGamma;
    if (name == "fixed_concentration") return LinewidthMode::FixedConcentrationVaryGamma;
    return std::nullopt;
}

std::string_view to_string(LinewidthMode mode) {
    switch (mode) {
        case LinewidthMode::Coupled: return "coupled";
        case LinewidthMode::FixedGamma: return "fixed_gamma";
        case LinewidthMode::FixedConcentrationVaryGamma: return "fixed_concentration";
    }
    return "coupled";
}

}  // namespace qpn
