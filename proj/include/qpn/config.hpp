#pragma once

#include <filesystem>
#include <optional>
#include <vector>

#include "qpn/ensemble.hpp"

namespace qpn {

struct GateRulesConfig {
    double interaction_min_mhz = 0.1;
    double blockade_min_mhz = 7.0;
    std::optional<double> tq_pulse_bandwidth_mhz;
    std::optional<std::vector<Interval>> forbidden_shifts_mhz;
};

/// Fully resolved run configuration. Call `finalize()` after changing any
/// field so derived values (gate rules) are rebuilt and invariants rechecked.
struct RunConfig {
    std::filesystem::path source;        // empty for built-in defaults
    std::filesystem::path lattice_path;  // empty for the built-in cell
    ModelConfig model;
    GateRulesConfig gate;
    bool allow_degenerate_levels = false;
    SweepSpec sweep;
    std::filesystem::path output_dir = "out";
    unsigned threads = 1;

    void finalize();
};

/// Parses a YAML run configuration. Unknown keys and out-of-range values are
/// rejected with a ConfigError of the form "file:line:column: message".
RunConfig load_run_config(const std::filesystem::path& path);
RunConfig load_run_config_text(const std::string& yaml, const std::filesystem::path& origin = "<string>");

/// Built-in defaults, identical to data/default.yaml.
RunConfig default_run_config();

/// Parses a YAML lattice description (cell vectors in nm, fractional
/// yttrium positions with site ids).
LatticeSpec load_lattice(const std::filesystem::path& path);
LatticeSpec load_lattice_text(const std::string& yaml, const std::string& origin = "<string>");

std::optional<LinewidthMode> parse_linewidth_mode(std::string_view name);
std::string_view to_string(LinewidthMode mode);

}  // namespace qpn
