// Copyright 2026 The nmrsim Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include "nmrsim/circuit.hpp"
#include "nmrsim/config.hpp"
#include "nmrsim/dense.hpp"
#include "nmrsim/errors.hpp"
#include "nmrsim/experiment.hpp"
#include "nmrsim/hamiltonian.hpp"
#include "nmrsim/mitigation.hpp"
#include "nmrsim/noise.hpp"
#include "nmrsim/spectrum.hpp"
#include "nmrsim/spin_system.hpp"
#include "nmrsim/statevector.hpp"
#include "nmrsim/transpiler.hpp"
#include "nmrsim/trotter.hpp"

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

namespace py = pybind11;
using namespace nmrsim;

namespace {

py::array_t<complex_t> to_numpy(const Statevector &s) {
    py::array_t<complex_t> out(static_cast<py::ssize_t>(s.size()));
    std::copy(s.amplitudes().begin(), s.amplitudes().end(), out.mutable_data());
    return out;
}

MagnetizationAxis parse_axis(const std::string &a) {
    if (a == "x" || a == "X") {
        return MagnetizationAxis::X;
    }
    if (a == "y" || a == "Y") {
        return MagnetizationAxis::Y;
    }
    throw ArgumentError("axis must be 'x' or 'y'");
}

py::dict report_dict(const TranspileReport &r) {
    py::dict d;
    d["width"] = r.width;
    d["two_qubit_depth"] = r.two_qubit_depth;
    d["one_qubit_gates"] = r.one_qubit_gate_count;
    d["two_qubit_gates"] = r.two_qubit_gate_count;
    d["swaps"] = r.swap_count;
    d["dd_gates"] = r.dd_gates_inserted;
    return d;
}

ShotCounts counts_from_dict(const std::map<std::string, std::uint64_t> &counts,
                            const std::vector<int> &measured) {
    ShotCounts c;
    c.measured = measured;
    c.counts = counts;
    for (const auto &[k, n] : counts) {
        if (k.size() != measured.size()) {
            throw ArgumentError("bitstring length differs from the measured qubit count");
        }
        c.n_shots += n;
    }
    return c;
}

ExperimentConfig config_from(const std::string &path, const std::map<std::string, std::string> &overrides) {
    ExperimentConfig cfg = load_config(path);
    for (const auto &[k, v] : overrides) {
        apply_setting(cfg, k, v);
    }
    cfg.validate();
    return cfg;
}

} // namespace

PYBIND11_MODULE(_nmrsim, m) {
    m.doc() = "NMR spectra from one-step Trotter circuits: core bindings";
    m.attr("__version__") = NMRSIM_VERSION;

    static py::exception<Error> base(m, "NmrsimError", PyExc_RuntimeError);
    static py::exception<CapabilityError> capability(m, "CapabilityError", base.ptr());
    static py::exception<MitigationError> mitigation(m, "MitigationError", base.ptr());
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) {
                std::rethrow_exception(p);
            }
        } catch (const CapabilityError &e) {
            py::set_error(capability, e.what());
        } catch (const RoutingError &e) {
            py::set_error(capability, e.what());
        } catch (const MitigationError &e) {
            py::set_error(mitigation, e.what());
        } catch (const ArgumentError &e) {
            py::set_error(PyExc_ValueError, e.what());
        } catch (const Error &e) {
            py::set_error(base, e.what());
        }
    });

    py::class_<SpinSystem>(m, "SpinSystem")
        .def_static("load", [](const std::filesystem::path &p) { return load_spin_system(p); })
        .def_static("parse", [](const std::string &text, const std::string &label) {
            return parse_spin_system(text, label);
        }, py::arg("text"), py::arg("label") = "")
        .def_readonly("n_spins", &SpinSystem::n_spins)
        .def_readonly("shifts_ppm", &SpinSystem::shifts_ppm)
        .def_readonly("couplings_hz", &SpinSystem::couplings_hz)
        .def_readonly("label", &SpinSystem::label)
        .def_property_readonly("isotopes", [](const SpinSystem &s) {
            std::vector<std::string> out;
            for (const auto &i : s.isotopes) {
                out.push_back(i.symbol);
            }
            return out;
        })
        .def("spins_of", &SpinSystem::spins_of)
        .def("nonzero_coupling_count", &SpinSystem::nonzero_coupling_count)
        .def("subsystem", [](const SpinSystem &s, const std::vector<int> &keep) { return subsystem(s, keep); })
        .def("to_text", [](const SpinSystem &s) { return format_spin_system(s); });

    py::class_<FieldConfig>(m, "FieldConfig")
        .def(py::init([](double b0) { return FieldConfig{b0}; }), py::arg("b0_tesla"))
        .def_static("from_proton_mhz", &FieldConfig::from_proton_mhz)
        .def_readonly("b0_tesla", &FieldConfig::b0_tesla);

    py::class_<PauliTermList>(m, "PauliTermList")
        .def_readonly("n_spins", &PauliTermList::n_spins)
        .def_property_readonly("z_terms", [](const PauliTermList &h) {
            std::vector<std::pair<int, double>> out;
            for (const auto &z : h.z_terms) {
                out.emplace_back(z.spin, z.omega);
            }
            return out;
        })
        .def_property_readonly("coupling_terms", [](const PauliTermList &h) {
            std::vector<std::tuple<int, int, double>> out;
            for (const auto &c : h.coupling_terms) {
                out.emplace_back(c.i, c.j, c.c);
            }
            return out;
        })
        .def("dense", &dense_hamiltonian);

    m.def("offset_frequencies", &offset_frequencies);
    m.def("build_rotating_hamiltonian", &build_rotating_hamiltonian);

    py::class_<Circuit>(m, "Circuit")
        .def_property_readonly("width", &Circuit::width)
        .def_property_readonly("time_point", &Circuit::time_point)
        .def_property_readonly("measured_qubits", &Circuit::measured_qubits)
        .def_property_readonly("gate_count", [](const Circuit &c) { return c.gates().size(); })
        .def("one_qubit_gate_count", &Circuit::one_qubit_gate_count)
        .def("two_qubit_gate_count", &Circuit::two_qubit_gate_count)
        .def("two_qubit_depth", [](const Circuit &c) { return logical_two_qubit_depth(c); })
        .def("to_text", [](const Circuit &c) { return serialize_circuit(c); })
        .def_static("from_text", [](const std::string &t) { return parse_circuit(t); })
        .def("unitary", [](const Circuit &c) { return circuit_unitary(c); })
        .def_readonly("final_layout", &Circuit::final_layout);

    m.def("trotter_step", &trotter_step, py::arg("h"), py::arg("t"));
    m.def("measurement_circuit", [](const PauliTermList &h, double t, const std::string &axis,
                                    const std::vector<int> &observed) {
        return measurement_circuit(h, t, parse_axis(axis), observed);
    }, py::arg("h"), py::arg("t"), py::arg("axis"), py::arg("observed"));

    m.def("run_circuit", [](const Circuit &c, int max_width) {
        return to_numpy(run_circuit(c, RunOptions{max_width, true}));
    }, py::arg("circuit"), py::arg("max_width") = kDefaultMaxWidth);
    m.def("transverse_magnetization", [](const Circuit &c, const std::vector<int> &observed) {
        return transverse_magnetization(run_circuit(c), observed);
    }, py::arg("circuit"), py::arg("observed"),
       "Runs the circuit and returns <M_X> + i <M_Y> over the observed qubits.");
    m.def("sample_shots", [](const Circuit &c, std::uint64_t shots, std::uint64_t seed) {
        return sample_shots(run_circuit(c), c.measured_qubits(), shots, seed).counts;
    }, py::arg("circuit"), py::arg("shots"), py::arg("seed") = 0);

    py::class_<NoiseModel>(m, "NoiseModel")
        .def(py::init<>())
        .def_static("superconducting", &NoiseModel::superconducting_defaults)
        .def_static("trapped_ion", &NoiseModel::trapped_ion_defaults)
        .def_static("load", [](const std::filesystem::path &p) { return load_noise_model(p); })
        .def_readwrite("p1", &NoiseModel::p1)
        .def_readwrite("p2", &NoiseModel::p2)
        .def_readwrite("p_ro", &NoiseModel::p_ro)
        .def_readwrite("t2_idle", &NoiseModel::t2_idle)
        .def_readwrite("dd_suppression", &NoiseModel::dd_suppression)
        .def("at_run", &NoiseModel::at_run);

    m.def("noisy_run", [](const Circuit &c, const NoiseModel &nm, std::uint64_t shots, std::uint64_t seed) {
        return noisy_run(c, nm, shots, seed).counts;
    }, py::arg("circuit"), py::arg("noise"), py::arg("shots"), py::arg("seed") = 0);

    m.def("analytic_confusion", [](const NoiseModel &nm, const std::vector<int> &measured, std::size_t group_size) {
        const auto cm = analytic_confusion(nm, measured, contiguous_groups(measured, group_size));
        return cm.matrices;
    }, py::arg("noise"), py::arg("measured"), py::arg("group_size") = 1);
    m.def("mitigate_counts", [](const std::map<std::string, std::uint64_t> &counts,
                                const std::vector<int> &measured, const NoiseModel &nm,
                                std::size_t group_size, double tau) {
        const auto cm = analytic_confusion(nm, measured, contiguous_groups(measured, group_size));
        auto q = mitigate_counts(counts_from_dict(counts, measured), cm);
        if (tau >= 0.0) {
            q = rescale_low_confidence(q, tau);
        }
        return q.probs;
    }, py::arg("counts"), py::arg("measured"), py::arg("noise"), py::arg("group_size") = 1,
       py::arg("tau") = -1.0, "Analytic-confusion mitigation; tau >= 0 also applies rescaling.");
    m.def("randomized_time_ordering", &randomized_time_ordering, py::arg("k"), py::arg("seed"));

    m.def("transpile", [](const Circuit &c, const std::string &target, const std::string &basis,
                          bool dd, std::uint64_t seed) {
        TranspileOptions opt;
        opt.target = parse_target(target);
        opt.basis = basis == "ms" ? NativeBasis::MS : NativeBasis::CZ;
        opt.dynamical_decoupling = dd;
        opt.seed = seed;
        std::optional<CouplingMap> map;
        if (opt.target == TargetKind::HeavyHex) {
            map = heavy_hex_map();
        } else if (opt.target == TargetKind::AllToAll) {
            map = all_to_all_map(std::max(36, c.width()));
        }
        const auto r = transpile(c, map ? &*map : nullptr, opt);
        py::dict d;
        d["circuit"] = r.circuit;
        d["logical"] = report_dict(r.logical);
        d["routed"] = report_dict(r.routed);
        d["final"] = report_dict(r.final);
        d["layout"] = r.layout;
        return d;
    }, py::arg("circuit"), py::arg("target") = "heavy-hex", py::arg("basis") = "cz",
       py::arg("dd") = false, py::arg("seed") = 0);

    m.def("to_spectrum", [](const std::vector<complex_t> &samples, double dwell, double reference_hz,
                            int pad, std::optional<double> lb, double phase0, double carrier_ppm) {
        FidSeries fid{dwell, samples, {}};
        SpectrumOptions opt{pad, lb, phase0, reference_hz, carrier_ppm};
        const auto s = to_spectrum(fid, opt);
        return py::make_tuple(s.ppm, s.intensity);
    }, py::arg("samples"), py::arg("dwell_time"), py::arg("reference_hz"), py::arg("pad") = 2,
       py::arg("apodization_hz") = py::none(), py::arg("phase0") = 0.0, py::arg("carrier_ppm") = 0.0);
    m.def("mse", py::overload_cast<const std::vector<double> &, const std::vector<double> &>(&mse));
    m.def("cosine_similarity", &cosine_similarity);
    m.def("peak_positions", [](const std::vector<double> &ppm, const std::vector<double> &intensity,
                               double threshold) {
        Spectrum s;
        s.ppm = ppm;
        s.intensity = intensity;
        return peak_positions(s, threshold);
    }, py::arg("ppm"), py::arg("intensity"), py::arg("threshold") = 0.1);

    m.def("simulate", [](const std::string &config, const std::map<std::string, std::string> &overrides) {
        const auto cfg = config_from(config, overrides);
        const auto ex = resolve_experiment(cfg);
        SimulationResult res;
        {
            py::gil_scoped_release release;
            res = run_simulation(cfg, ex);
        }
        py::dict d;
        d["samples"] = res.fid.samples;
        d["dwell_time"] = res.fid.dwell_time;
        d["reference_hz"] = ex.reference_hz;
        d["observed"] = ex.observed;
        return d;
    }, py::arg("config"), py::arg("overrides") = std::map<std::string, std::string>{},
       "Runs a config and returns the FID without writing files.");
    m.def("depth_stats", [](const std::string &config, const std::map<std::string, std::string> &overrides) {
        const auto cfg = config_from(config, overrides);
        const auto ex = resolve_experiment(cfg);
        py::list rows;
        for (const auto &r : run_depth_stats(cfg, ex)) {
            py::dict d = report_dict(r.report);
            d["time_index"] = r.index;
            d["stage"] = r.stage;
            rows.append(d);
        }
        return rows;
    }, py::arg("config"), py::arg("overrides") = std::map<std::string, std::string>{});
}
