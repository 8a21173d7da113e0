#include "qpn/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <system_error>

#include "qpn/errors.hpp"

namespace qpn {

namespace {

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream is(line);
    while (std::getline(is, field, ',')) out.push_back(field);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

std::vector<std::vector<std::string>> read_rows(const std::string& text, const char* header) {
    std::istringstream is(text);
    std::string line;
    if (!std::getline(is, line) || line != header) {
        throw IoError(std::string("expected header '") + header + "', got '" + line + "'");
    }
    const std::size_t width = split(header).size();
    std::vector<std::vector<std::string>> rows;
    std::size_t lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty()) continue;
        auto fields = split(line);
        if (fields.size() != width) {
            throw IoError("line " + std::to_string(lineno) + ": expected " + std::to_string(width) + " fields");
        }
        rows.push_back(std::move(fields));
    }
    return rows;
}

double to_double(const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        throw IoError("not a number: '" + s + "'");
    }
    if (used != s.size()) throw IoError("not a number: '" + s + "'");
    return v;
}

std::uint64_t to_uint(const std::string& s) {
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) throw IoError("not an integer: '" + s + "'");
    return v;
}

}  // namespace

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
    namespace fs = std::filesystem;
    std::error_code ec;
    if (path.has_parent_path()) {
        fs::create_directories(path.parent_path(), ec);
        if (ec) throw IoError("cannot create directory " + path.parent_path().string() + ": " + ec.message());
    }
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
        out << content;
        out.flush();
        if (!out) throw IoError("write failed for " + tmp.string());
    }
    fs::rename(tmp, path, ec);
    if (ec) throw IoError("cannot rename " + tmp.string() + " to " + path.string() + ": " + ec.message());
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

std::string qubits_csv(const ProcessorNode& node) {
    std::string out = std::string(kQubitHeader) + "\n";
    for (std::size_t q = 0; q < node.qubits.size(); ++q) {
        const auto& qb = node.qubits[q];
        out += std::to_string(q + 1) + "," + std::to_string(qb.dopant_id) + "," + fmt(qb.position.x) + "," +
               fmt(qb.position.y) + "," + fmt(qb.position.z) + "," + fmt(qb.nu_ghz) + "\n";
    }
    return out;
}

std::string edges_csv(const ProcessorNode& node) {
    std::string out = std::string(kEdgeHeader) + "\n";
    for (const auto& e : node.edges) {
        out += std::to_string(e.i + 1) + "," + std::to_string(e.j + 1) + "," + std::string(to_string(e.type)) + "," +
               fmt(e.delta_nu_mhz) + "\n";
    }
    return out;
}

std::string stats_csv(const EnsembleStats& stats) {
    std::string out = std::string(kStatsHeader) + "\n";
    for (const auto& p : stats.points) {
        out += std::string(to_string(p.protocol)) + "," + fmt(p.point.c_total) + "," + fmt(p.point.gamma_ghz) + "," +
               fmt(p.point.tuning_ghz) + "," + std::to_string(p.n_realizations) + "," + fmt(p.mean_qubits) + "," +
               fmt(p.std_qubits) + "," + fmt(p.mean_degree) + "," + fmt(p.std_degree) + "\n";
    }
    return out;
}

std::string intervals_csv(const std::vector<IntervalRow>& rows) {
    std::string out = std::string(kIntervalHeader) + "\n";
    for (const auto& r : rows) out += r.set + "," + fmt(r.lo) + "," + fmt(r.hi) + "," + r.unit + "\n";
    return out;
}

std::vector<QubitRecord> parse_qubits_csv(const std::string& text) {
    std::vector<QubitRecord> out;
    for (const auto& f : read_rows(text, kQubitHeader)) {
        out.push_back({static_cast<std::size_t>(to_uint(f[0])), static_cast<std::uint32_t>(to_uint(f[1])),
                       {to_double(f[2]), to_double(f[3]), to_double(f[4])}, to_double(f[5])});
    }
    return out;
}

std::vector<EdgeRecord> parse_edges_csv(const std::string& text) {
    std::vector<EdgeRecord> out;
    for (const auto& f : read_rows(text, kEdgeHeader)) {
        GateType type;
        if (f[2] == "interaction") {
            type = GateType::Interaction;
        } else if (f[2] == "blockade") {
            type = GateType::Blockade;
        } else {
            throw IoError("unknown gate type '" + f[2] + "'");
        }
        out.push_back({static_cast<std::size_t>(to_uint(f[0])), static_cast<std::size_t>(to_uint(f[1])), type,
                       to_double(f[3])});
    }
    return out;
}

std::vector<StatsRecord> parse_stats_csv(const std::string& text) {
    std::vector<StatsRecord> out;
    for (const auto& f : read_rows(text, kStatsHeader)) {
        if (!parse_protocol(f[0])) throw IoError("unknown protocol '" + f[0] + "'");
        out.push_back({f[0], to_double(f[1]), to_double(f[2]), to_double(f[3]), static_cast<std::size_t>(to_uint(f[4])),
                       to_double(f[5]), to_double(f[6]), to_double(f[7]), to_double(f[8])});
    }
    return out;
}

std::vector<IntervalRow> parse_intervals_csv(const std::string& text) {
    std::vector<IntervalRow> out;
    for (const auto& f : read_rows(text, kIntervalHeader)) {
        if (f[3] != "GHz" && f[3] != "MHz") throw IoError("unknown unit '" + f[3] + "'");
        out.push_back({f[0], to_double(f[1]), to_double(f[2]), f[3]});
    }
    return out;
}

}  // namespace qpn
