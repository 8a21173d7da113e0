#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "qpn/ensemble.hpp"
#include "qpn/interval_set.hpp"
#include "qpn/protocols.hpp"

namespace qpn {

inline constexpr const char* kQubitSchema = "qpnode.qubits/1";
inline constexpr const char* kEdgeSchema = "qpnode.edges/1";
inline constexpr const char* kStatsSchema = "qpnode.stats/1";
inline constexpr const char* kIntervalSchema = "qpnode.intervals/1";
inline constexpr const char* kManifestSchema = "qpnode.manifest/1";

inline constexpr const char* kQubitHeader = "index,dopant_id,x_nm,y_nm,z_nm,nu_ghz";
inline constexpr const char* kEdgeHeader = "i,j,gate_type,delta_nu_mhz";
inline constexpr const char* kStatsHeader =
    "protocol,c_total,gamma_inh_ghz,tuning_ghz,n_realizations,mean_qubits,std_qubits,mean_degree,std_degree";
inline constexpr const char* kIntervalHeader = "set,lo,hi,unit";

/// Writes through a sibling temporary file and renames it into place.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

// Qubit and edge indices are 1-based in files (discovery order).
std::string qubits_csv(const ProcessorNode& node);
std::string edges_csv(const ProcessorNode& node);
std::string stats_csv(const EnsembleStats& stats);

struct IntervalRow {
    std::string set;
    double lo = 0.0;
    double hi = 0.0;
    std::string unit;
};
std::string intervals_csv(const std::vector<IntervalRow>& rows);

struct QubitRecord {
    std::size_t index = 0;
    std::uint32_t dopant_id = 0;
    Vec3 position;
    double nu_ghz = 0.0;
};
struct EdgeRecord {
    std::size_t i = 0;
    std::size_t j = 0;
    GateType type = GateType::None;
    double delta_nu_mhz = 0.0;
};
struct StatsRecord {
    std::string protocol;
    double c_total = 0.0;
    double gamma_inh_ghz = 0.0;
    double tuning_ghz = 0.0;
    std::size_t n_realizations = 0;
    double mean_qubits = 0.0;
    double std_qubits = 0.0;
    double mean_degree = 0.0;
    double std_degree = 0.0;
};

// Strict parsers for the documented schemas; throw IoError on any mismatch.
std::vector<QubitRecord> parse_qubits_csv(const std::string& text);
std::vector<EdgeRecord> parse_edges_csv(const std::string& text);
std::vector<StatsRecord> parse_stats_csv(const std::string& text);
std::vector<IntervalRow> parse_intervals_csv(const std::string& text);

std::string read_file(const std::filesystem::path& path);

}  // namespace qpn
