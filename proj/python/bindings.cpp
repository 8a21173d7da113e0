#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "qpn/config.hpp"
#include "qpn/errors.hpp"
#include "qpn/io.hpp"
#include "qpn/manifest.hpp"

namespace py = pybind11;
using namespace qpn;

namespace {

Protocol protocol_from(const std::string& name) {
    const auto p = parse_protocol(name);
    if (!p) throw ConfigError("unknown protocol '" + name + "'");
    return *p;
}

std::vector<std::pair<double, double>> pairs(const IntervalSet& set) {
    std::vector<std::pair<double, double>> out;
    for (const auto& iv : set.intervals()) out.emplace_back(iv.lo, iv.hi);
    return out;
}

py::dict node_dict(const ProcessorNode& node) {
    py::list qubits, edges;
    for (const auto& q : node.qubits) {
        qubits.append(py::dict(py::arg("dopant_id") = q.dopant_id,
                               py::arg("position_nm") = py::make_tuple(q.position.x, q.position.y, q.position.z),
                               py::arg("nu_ghz") = q.nu_ghz, py::arg("parent") = q.parent));
    }
    for (const auto& e : node.edges) {
        edges.append(py::dict(py::arg("i") = e.i, py::arg("j") = e.j, py::arg("gate_type") = std::string(to_string(e.type)),
                              py::arg("delta_nu_mhz") = e.delta_nu_mhz));
    }
    py::dict out;
    out["protocol"] = std::string(to_string(node.protocol));
    out["seed"] = node.seed;
    out["qubits"] = qubits;
    out["edges"] = edges;
    out["mean_degree"] = connections_per_qubit(node);
    out["diagnostic"] = node.diagnostic;
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Processor-node construction in randomly doped rare-earth crystals";
    m.attr("__version__") = QPN_VERSION;

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<IoError>(m, "IoError", PyExc_OSError);

    py::class_<RunConfig>(m, "Config")
        .def(py::init(&default_run_config))
        .def_static("load", &load_run_config, py::arg("path"))
        .def_static("from_yaml", [](const std::string& text) { return load_run_config_text(text); }, py::arg("text"))
        .def_property(
            "concentration", [](const RunConfig& c) { return c.model.crystal.c_total; },
            [](RunConfig& c, double v) { c.model.crystal.c_total = v; })
        .def_property(
            "radius_nm", [](const RunConfig& c) { return c.model.crystal.sphere_radius_nm; },
            [](RunConfig& c, double v) { c.model.crystal.sphere_radius_nm = v; })
        .def_property(
            "seed", [](const RunConfig& c) { return c.model.crystal.seed; },
            [](RunConfig& c, std::uint64_t v) { c.model.crystal.seed = v; })
        .def_property(
            "protocol", [](const RunConfig& c) { return std::string(to_string(c.model.protocol.protocol)); },
            [](RunConfig& c, const std::string& v) { c.model.protocol.protocol = protocol_from(v); })
        .def_property(
            "tuning_range_ghz", [](const RunConfig& c) { return 2.0 * c.model.tuning.half_width_ghz; },
            [](RunConfig& c, double v) { c.model.tuning = TuningRange::total_width(v, c.model.tuning.center_ghz); })
        .def_property(
            "fixed_gamma_ghz", [](const RunConfig& c) { return c.model.line.explicit_gamma_ghz; },
            [](RunConfig& c, std::optional<double> v) { c.model.line.explicit_gamma_ghz = v; })
        .def_property(
            "max_qubits", [](const RunConfig& c) { return c.model.protocol.max_qubits; },
            [](RunConfig& c, std::optional<std::size_t> v) { c.model.protocol.max_qubits = v; })
        .def_property(
            "sweep_concentrations", [](const RunConfig& c) { return c.sweep.concentrations; },
            [](RunConfig& c, std::vector<double> v) { c.sweep.concentrations = std::move(v); })
        .def_property(
            "sweep_tuning_ranges_ghz", [](const RunConfig& c) { return c.sweep.tuning_ranges_ghz; },
            [](RunConfig& c, std::vector<double> v) { c.sweep.tuning_ranges_ghz = std::move(v); })
        .def_property(
            "sweep_protocols",
            [](const RunConfig& c) {
                std::vector<std::string> out;
                for (auto p : c.sweep.protocols) out.emplace_back(to_string(p));
                return out;
            },
            [](RunConfig& c, const std::vector<std::string>& v) {
                c.sweep.protocols.clear();
                for (const auto& name : v) c.sweep.protocols.push_back(protocol_from(name));
            })
        .def_property(
            "realizations", [](const RunConfig& c) { return c.sweep.realizations_per_point; },
            [](RunConfig& c, std::size_t v) { c.sweep.realizations_per_point = v; })
        .def_property(
            "base_seed", [](const RunConfig& c) { return c.sweep.base_seed; },
            [](RunConfig& c, std::uint64_t v) { c.sweep.base_seed = v; })
        .def_readwrite("threads", &RunConfig::threads)
        .def("validate", &RunConfig::finalize, "Rebuild gate rules and check every invariant.")
        .def("to_json", [](const RunConfig& c) { return config_to_json(c).dump(); });

    m.def(
        "generate",
        [](RunConfig cfg) {
            cfg.finalize();
            py::gil_scoped_release release;
            const auto node = generate_node(cfg.model, cfg.threads);
            py::gil_scoped_acquire acquire;
            return node_dict(node);
        },
        py::arg("config"), "Build one processor node for the configured seed and protocol.");

    m.def(
        "sweep",
        [](RunConfig cfg) {
            cfg.finalize();
            EnsembleStats stats;
            {
                py::gil_scoped_release release;
                stats = run_sweep(cfg.sweep, cfg.model, {cfg.threads, {}});
            }
            py::list rows;
            for (const auto& p : stats.points) {
                py::list qubits;
                for (const auto& r : p.replicates) qubits.append(r.qubits);
                rows.append(py::dict(py::arg("protocol") = std::string(to_string(p.protocol)),
                                     py::arg("c_total") = p.point.c_total, py::arg("gamma_inh_ghz") = p.point.gamma_ghz,
                                     py::arg("tuning_ghz") = p.point.tuning_ghz,
                                     py::arg("n_realizations") = p.n_realizations,
                                     py::arg("mean_qubits") = p.mean_qubits, py::arg("std_qubits") = p.std_qubits,
                                     py::arg("mean_degree") = p.mean_degree, py::arg("std_degree") = p.std_degree,
                                     py::arg("failed") = p.failed, py::arg("qubits") = qubits));
            }
            return py::make_tuple(rows, stats_csv(stats));
        },
        py::arg("config"), "Run the configured ensemble; returns (rows, stats CSV text).");

    m.def(
        "reserved_offsets_ghz", [](const RunConfig& c) { return pairs(reserved_offsets(c.model.levels, c.model.ctrl)); },
        py::arg("config"));
    m.def(
        "min_channel_spacing_ghz", [](const RunConfig& c) { return min_channel_spacing(c.model.levels, c.model.ctrl); },
        py::arg("config"));
    m.def("forbidden_shifts_mhz", [](const RunConfig& c) { return pairs(c.model.rules.forbidden_shifts); },
          py::arg("config"));
    m.def(
        "classify_shift",
        [](const RunConfig& c, double delta_nu_mhz) {
            return std::string(to_string(classify_interaction(delta_nu_mhz, c.model.rules)));
        },
        py::arg("config"), py::arg("delta_nu_mhz"));
    m.def(
        "dipole_shift_hz",
        [](std::array<double, 3> pa, std::array<double, 3> ua, std::array<double, 3> pb, std::array<double, 3> ub) {
            return dipole_shift_hz({pa[0], pa[1], pa[2]}, Vec3{ua[0], ua[1], ua[2]}.normalized(), {pb[0], pb[1], pb[2]},
                                   Vec3{ub[0], ub[1], ub[2]}.normalized(), MaterialConstants{});
        },
        py::arg("pos_a_nm"), py::arg("dir_a"), py::arg("pos_b_nm"), py::arg("dir_b"));
    m.def(
        "inhomogeneous_fwhm_ghz", [](double c) { return inhomogeneous_fwhm(SpectralLineModel{}, c); },
        py::arg("c_total"));
    m.def("fret_rate", [](double d) { return fret_rate(d, MaterialConstants{}); }, py::arg("distance_nm"));
    m.def("fret_critical_distance_nm", [] { return fret_critical_distance(MaterialConstants{}); });
    m.def("derive_seed", &derive_seed, py::arg("base_seed"), py::arg("point_index"), py::arg("replicate_index"));
}
