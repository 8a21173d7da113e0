// qpnode: build processor nodes in randomly doped crystals.
//
// Exit codes: 0 ok, 1 invalid configuration, 2 runtime failure, 3 I/O failure.

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "qpn/config.hpp"
#include "qpn/ensemble.hpp"
#include "qpn/errors.hpp"
#include "qpn/io.hpp"
#include "qpn/manifest.hpp"

namespace fs = std::filesystem;
using namespace qpn;

namespace {

enum Exit { kOk = 0, kInvalid = 1, kRuntime = 2, kIo = 3 };

struct Overrides {
    std::string config;
    std::string lattice;
    std::optional<double> concentration;
    std::optional<double> radius_nm;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> protocol;
    std::optional<double> tuning_range_ghz;
    std::optional<double> gamma_ghz;
    std::optional<std::size_t> max_qubits;
    std::optional<std::string> first_qubit;
    std::optional<std::uint64_t> protocol_seed;
    std::optional<std::string> out;
    std::optional<unsigned> threads;
};

struct SweepOverrides {
    std::vector<double> concentrations;
    std::vector<double> tuning_ranges_ghz;
    std::vector<std::string> protocols;
    std::optional<std::size_t> realizations;
    std::optional<std::uint64_t> base_seed;
    std::optional<std::string> linewidth_mode;
    std::optional<double> fixed_gamma_ghz;
    std::vector<double> gammas_ghz;
};

void add_common(CLI::App* cmd, Overrides& o) {
    cmd->add_option("-c,--config", o.config, "YAML run configuration (defaults built in)");
    cmd->add_option("--lattice", o.lattice, "YAML lattice file, replaces lattice_file");
    cmd->add_option("--concentration", o.concentration, "crystal.concentration (fraction, e.g. 0.01)");
    cmd->add_option("--radius-nm", o.radius_nm, "crystal.radius_nm");
    cmd->add_option("--seed", o.seed, "crystal.seed");
    cmd->add_option("--protocol", o.protocol, "protocol.name: line, starfish, compact_starfish");
    cmd->add_option("--tuning-range-ghz", o.tuning_range_ghz, "tuning.range_ghz (total width)");
    cmd->add_option("--gamma-ghz", o.gamma_ghz, "line.fixed_gamma_ghz (decouples the width from c)");
    cmd->add_option("--max-qubits", o.max_qubits, "protocol.max_qubits");
    cmd->add_option("--first-qubit", o.first_qubit, "protocol.first_qubit: nearest_center, random_in_range");
    cmd->add_option("--protocol-seed", o.protocol_seed, "protocol.seed");
    cmd->add_option("-o,--out", o.out, "output_dir");
    cmd->add_option("-j,--threads", o.threads, "threads");
}

RunConfig resolve(const Overrides& o) {
    RunConfig cfg = o.config.empty() ? default_run_config() : load_run_config(o.config);
    if (!o.lattice.empty()) {
        cfg.lattice_path = o.lattice;
        cfg.model.lattice = load_lattice(o.lattice);
    }
    auto& m = cfg.model;
    if (o.concentration) {
        if (!(*o.concentration >= 0.0 && *o.concentration <= 1.0)) {
            throw ConfigError("--concentration must lie in [0, 1]");
        }
        m.crystal.c_total = *o.concentration;
    }
    if (o.radius_nm) m.crystal.sphere_radius_nm = *o.radius_nm;
    if (o.seed) m.crystal.seed = *o.seed;
    if (o.protocol) {
        const auto p = parse_protocol(*o.protocol);
        if (!p) throw ConfigError("unknown protocol '" + *o.protocol + "'");
        m.protocol.protocol = *p;
    }
    if (o.tuning_range_ghz) m.tuning = TuningRange::total_width(*o.tuning_range_ghz, m.tuning.center_ghz);
    if (o.gamma_ghz) m.line.explicit_gamma_ghz = *o.gamma_ghz;
    if (o.max_qubits) m.protocol.max_qubits = *o.max_qubits;
    if (o.first_qubit) {
        const auto r = parse_first_qubit_rule(*o.first_qubit);
        if (!r) throw ConfigError("unknown first-qubit rule '" + *o.first_qubit + "'");
        m.protocol.first_qubit_rule = *r;
    }
    if (o.protocol_seed) m.protocol_seed = *o.protocol_seed;
    if (o.out) cfg.output_dir = *o.out;
    if (o.threads) {
        if (*o.threads < 1) throw ConfigError("--threads must be at least 1");
        cfg.threads = *o.threads;
    }
    cfg.finalize();
    return cfg;
}

void apply_sweep(const SweepOverrides& s, RunConfig& cfg) {
    auto& sw = cfg.sweep;
    if (!s.concentrations.empty()) sw.concentrations = s.concentrations;
    if (!s.tuning_ranges_ghz.empty()) sw.tuning_ranges_ghz = s.tuning_ranges_ghz;
    if (!s.protocols.empty()) {
        sw.protocols.clear();
        for (const auto& name : s.protocols) {
            const auto p = parse_protocol(name);
            if (!p) throw ConfigError("unknown protocol '" + name + "'");
            sw.protocols.push_back(*p);
        }
    }
    if (s.realizations) sw.realizations_per_point = *s.realizations;
    if (s.base_seed) sw.base_seed = *s.base_seed;
    if (s.linewidth_mode) {
        const auto mode = parse_linewidth_mode(*s.linewidth_mode);
        if (!mode) throw ConfigError("unknown linewidth mode '" + *s.linewidth_mode + "'");
        sw.linewidth_mode = *mode;
    }
    if (s.fixed_gamma_ghz) sw.fixed_gamma_ghz = *s.fixed_gamma_ghz;
    if (!s.gammas_ghz.empty()) sw.gammas_ghz = s.gammas_ghz;
    cfg.finalize();
}

void ensure_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) throw IoError("cannot create output directory " + dir.string());
}

int cmd_generate(const RunConfig& cfg) {
    ensure_dir(cfg.output_dir);
    const Realization real = realize(cfg.model, cfg.threads);
    const ProcessorNode node = generate_node(cfg.model, real);

    write_file_atomic(cfg.output_dir / "qubits.csv", qubits_csv(node));
    write_file_atomic(cfg.output_dir / "edges.csv", edges_csv(node));

    auto manifest = manifest_header("generate", "complete");
    manifest["config"] = config_to_json(cfg);
    const auto degree = connections_per_qubit(node);
    manifest["result"] = {{"protocol", to_string(node.protocol)},
                          {"crystal_seed", cfg.model.crystal.seed},
                          {"protocol_seed", node.seed},
                          {"gamma_inh_ghz", real.fwhm_ghz},
                          {"dopants_in_sphere", real.dopants_in_sphere},
                          {"dopants_in_range", real.crystal.size()},
                          {"qubits", node.qubits.size()},
                          {"edges", node.edges.size()},
                          {"interaction_edges", node.count(GateType::Interaction)},
                          {"blockade_edges", node.count(GateType::Blockade)},
                          {"mean_degree", degree ? nlohmann::json(*degree) : nlohmann::json(nullptr)},
                          {"diagnostic", node.diagnostic}};
    manifest["files"] = {{"qubits", "qubits.csv"}, {"edges", "edges.csv"}};
    write_file_atomic(cfg.output_dir / "manifest.json", manifest.dump(2) + "\n");

    std::cout << "protocol " << to_string(node.protocol) << ": " << node.qubits.size() << " qubits, "
              << node.edges.size() << " edges";
    if (degree) std::cout << ", mean degree " << *degree;
    std::cout << "\n";
    if (!node.diagnostic.empty()) std::cerr << "warning: " << node.diagnostic << "\n";
    std::cout << "wrote " << cfg.output_dir.string() << "/{qubits.csv,edges.csv,manifest.json}\n";
    return kOk;
}

int cmd_sweep(const RunConfig& cfg) {
    ensure_dir(cfg.output_dir);
    const fs::path manifest_path = cfg.output_dir / "manifest.json";
    const fs::path stats_path = cfg.output_dir / "stats.csv";

    // A stale stats file from an earlier run must not pass for this one.
    std::error_code ec;
    fs::remove(stats_path, ec);
    auto manifest = manifest_header("sweep", "incomplete");
    manifest["config"] = config_to_json(cfg);
    write_file_atomic(manifest_path, manifest.dump(2) + "\n");

    SweepOptions options;
    options.threads = cfg.threads;
    options.log = [](const std::string& line) { std::cerr << line << "\n"; };
    const EnsembleStats stats = run_sweep(cfg.sweep, cfg.model, options);

    write_file_atomic(stats_path, stats_csv(stats));

    nlohmann::json points = nlohmann::json::array();
    for (const auto& p : stats.points) {
        points.push_back({{"protocol", to_string(p.protocol)},
                          {"c_total", p.point.c_total},
                          {"gamma_inh_ghz", p.point.gamma_ghz},
                          {"tuning_ghz", p.point.tuning_ghz},
                          {"failed_realizations", p.failed},
                          {"wall_seconds", p.wall_seconds}});
    }
    manifest = manifest_header("sweep", "complete");
    manifest["config"] = config_to_json(cfg);
    manifest["points"] = points;
    manifest["files"] = {{"stats", "stats.csv"}};
    write_file_atomic(manifest_path, manifest.dump(2) + "\n");
    std::cout << "wrote " << stats_path.string() << " (" << stats.points.size() << " rows)\n";
    return kOk;
}

void print_set(std::ostream& os, const std::string& title, const IntervalSet& set, const char* unit) {
    os << title << " (" << set.intervals().size() << " intervals, total " << set.measure() << ' ' << unit << ")\n";
    for (const auto& iv : set.intervals()) os << "  [" << iv.lo << ", " << iv.hi << ")\n";
}

int cmd_intervals(const RunConfig& cfg, const std::string& format, std::optional<double> nu_ghz) {
    const auto& m = cfg.model;
    const IntervalSet offsets = reserved_offsets(m.levels, m.ctrl);
    const IntervalSet& forbidden = m.rules.forbidden_shifts;
    const double spacing = min_channel_spacing(m.levels, m.ctrl);

    std::vector<IntervalRow> rows;
    for (const auto& iv : offsets.intervals()) rows.push_back({"reserved", iv.lo, iv.hi, "GHz"});
    IntervalSet absolute;
    if (nu_ghz) {
        absolute = reserved_intervals(*nu_ghz, m.levels, m.ctrl);
        for (const auto& iv : absolute.intervals()) rows.push_back({"reserved_absolute", iv.lo, iv.hi, "GHz"});
    }
    for (const auto& iv : forbidden.intervals()) rows.push_back({"forbidden_shift", iv.lo, iv.hi, "MHz"});

    if (format == "csv") {
        std::cout << intervals_csv(rows);
        return kOk;
    }
    std::ostringstream os;
    os.precision(6);
    print_set(os, "reserved offsets relative to nu_q", offsets, "GHz");
    if (nu_ghz) print_set(os, "reserved frequencies around nu_q = " + std::to_string(*nu_ghz) + " GHz", absolute, "GHz");
    os << "reserved total: " << offsets.measure() << " GHz\n";
    os << "minimum channel spacing: " << spacing << " GHz\n";
    os << "qubit ceiling for " << 2.0 * m.tuning.half_width_ghz << " GHz tuning: "
       << static_cast<long long>(std::floor(2.0 * m.tuning.half_width_ghz / spacing)) + 1 << "\n";
    print_set(os, "forbidden dipole shifts", forbidden, "MHz");
    std::cout << os.str();
    return kOk;
}

int cmd_fret(const RunConfig& cfg, double distance_nm) {
    if (!(distance_nm > 0.0)) throw ConfigError("--distance-nm must be positive");
    const auto& mat = cfg.model.material;
    const double rate = fret_rate(distance_nm, mat);
    const double radiative = 1.0 / mat.optical_t1_s;
    const bool significant = !(rate < radiative);
    std::cout << "distance: " << distance_nm << " nm\n"
              << "transfer rate: " << rate << " 1/s\n"
              << "radiative rate 1/T1: " << radiative << " 1/s\n"
              << "critical distance: " << fret_critical_distance(mat) << " nm\n"
              << "verdict: " << (significant ? "significant" : "negligible") << "\n";
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Quantum processor nodes in randomly doped rare-earth crystals"};
    app.set_version_flag("--version", std::string("qpnode ") + QPN_VERSION);
    app.require_subcommand(1);

    Overrides o;
    SweepOverrides s;
    std::string format = "text";
    std::optional<double> nu_ghz;
    double distance_nm = 0.0;

    auto* gen = app.add_subcommand("generate", "build one node and write qubits.csv, edges.csv, manifest.json");
    add_common(gen, o);

    auto* sweep = app.add_subcommand("sweep", "run an ensemble and write stats.csv and manifest.json");
    add_common(sweep, o);
    sweep->add_option("--concentrations", s.concentrations, "sweep.concentrations")->delimiter(',');
    sweep->add_option("--tuning-ranges-ghz", s.tuning_ranges_ghz, "sweep.tuning_ranges_ghz")->delimiter(',');
    sweep->add_option("--protocols", s.protocols, "sweep.protocols")->delimiter(',');
    sweep->add_option("--realizations", s.realizations, "sweep.realizations");
    sweep->add_option("--base-seed", s.base_seed, "sweep.base_seed");
    sweep->add_option("--linewidth-mode", s.linewidth_mode, "sweep.linewidth_mode: coupled, fixed_gamma, fixed_concentration");
    sweep->add_option("--fixed-gamma-ghz", s.fixed_gamma_ghz, "sweep.fixed_gamma_ghz");
    sweep->add_option("--gammas-ghz", s.gammas_ghz, "sweep.gammas_ghz")->delimiter(',');

    auto* iv = app.add_subcommand("intervals", "print reserved and forbidden interval sets");
    add_common(iv, o);
    iv->add_option("--format", format, "text or csv")->check(CLI::IsMember({"text", "csv"}));
    iv->add_option("--nu-ghz", nu_ghz, "also print reserved frequencies around this qubit frequency");

    auto* fret = app.add_subcommand("fret", "compare the energy-transfer rate with 1/T1");
    add_common(fret, o);
    fret->add_option("-d,--distance-nm", distance_nm, "ion separation")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kInvalid;
    }

    try {
        RunConfig cfg = resolve(o);
        if (*sweep) {
            apply_sweep(s, cfg);
            return cmd_sweep(cfg);
        }
        if (*gen) return cmd_generate(cfg);
        if (*iv) return cmd_intervals(cfg, format, nu_ghz);
        return cmd_fret(cfg, distance_nm);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInvalid;
    } catch (const IoError& e) {
        std::cerr << "I/O error: " << e.what() << "\n";
        return kIo;
    } catch (const fs::filesystem_error& e) {
        std::cerr << "I/O error: " << e.what() << "\n";
        return kIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kRuntime;
    }
}
