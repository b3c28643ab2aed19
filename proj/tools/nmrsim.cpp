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
// Command line front end. Every subcommand reads a key = value config (see
// nmrsim/config.hpp) and accepts `--set key=value` overrides.

#include "nmrsim/config.hpp"
#include "nmrsim/errors.hpp"
#include "nmrsim/experiment.hpp"
#include "nmrsim/spectrum.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace nmrsim;

struct ConfigArgs {
    std::string path;
    std::vector<std::string> sets;
    int threads = 0;
    std::string output;
};

void add_config_args(CLI::App *cmd, ConfigArgs &a) {
    cmd->add_option("config", a.path, "experiment config file")->required();
    cmd->add_option("--set", a.sets, "override a config key (key=value)");
    cmd->add_option("--threads", a.threads, "worker threads");
    cmd->add_option("-o,--output", a.output, "output directory");
}

ExperimentConfig load_with_overrides(const ConfigArgs &a) {
    ExperimentConfig cfg = load_config(a.path);
    for (const auto &s : a.sets) {
        const auto eq = s.find('=');
        if (eq == std::string::npos) {
            throw ArgumentError("--set expects key=value, got '" + s + "'");
        }
        apply_setting(cfg, s.substr(0, eq), s.substr(eq + 1));
    }
    if (a.threads > 0) {
        cfg.threads = a.threads;
    }
    if (!a.output.empty()) {
        cfg.output = std::filesystem::absolute(a.output);
    }
    cfg.validate();
    return cfg;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

int cmd_simulate(const ConfigArgs &a) {
    const auto cfg = load_with_overrides(a);
    const auto ex = resolve_experiment(cfg);
    const auto res = run_simulation(cfg, ex);
    write_simulation_outputs(cfg, ex, res);
    std::cout << "wrote " << res.fid.samples.size() << " FID samples to "
              << (cfg.resolve(cfg.output) / "fid.csv").string() << " in "
              << fmt(res.wall_seconds) << " s\n";
    return 0;
}

int cmd_depth_stats(const ConfigArgs &a) {
    const auto cfg = load_with_overrides(a);
    const auto ex = resolve_experiment(cfg);
    const auto rows = run_depth_stats(cfg, ex);
    write_depth_outputs(cfg, rows);
    std::cout << "system " << ex.system.label << ": " << ex.system.n_spins << " spins, "
              << ex.system.nonzero_coupling_count() << " nonzero couplings\n";
    std::cout << "stage,mean_depth,min,max,two_qubit_gates(first row)\n";
    for (const char *stage : {"logical", "routed", "consolidated"}) {
        std::vector<int> d;
        std::size_t first = 0;
        for (const auto &r : rows) {
            if (r.stage == stage) {
                if (d.empty()) {
                    first = r.report.two_qubit_gate_count;
                }
                d.push_back(r.report.two_qubit_depth);
            }
        }
        const auto s = depth_statistics(d);
        std::cout << stage << ',' << fmt(s.mean) << ',' << s.min << ',' << s.max << ','
                  << first << '\n';
    }
    return 0;
}

int cmd_shot_protocol(const ConfigArgs &a) {
    const auto cfg = load_with_overrides(a);
    const auto ex = resolve_experiment(cfg);
    const auto res = run_shot_protocol(cfg, ex);
    write_shot_outputs(cfg, res);
    std::cout << "shots,mse\n";
    for (std::size_t i = 0; i < res.grid.size(); ++i) {
        std::cout << res.grid[i] << ',' << fmt(res.mse[i]) << '\n';
    }
    std::cout << "selected " << res.selected << " shots\n";
    return 0;
}

struct SpectrumArgs {
    std::string fid;
    double reference_mhz = 0.0;
    int pad = 2;
    double lb = 0.0;
    double phase0 = 0.0;
    double carrier_ppm = 0.0;
    double threshold = 0.1;
    std::string out;
    std::string svg;
};

int cmd_spectrum(const SpectrumArgs &a) {
    const auto fid = read_fid_csv(a.fid);
    SpectrumOptions opt;
    opt.pad_factor = a.pad;
    if (a.lb > 0.0) {
        opt.apodization_hz = a.lb;
    }
    opt.phase0 = a.phase0;
    opt.carrier_ppm = a.carrier_ppm;
    opt.reference_hz = a.reference_mhz * 1e6;
    if (opt.reference_hz <= 0.0) {
        const auto manifest = std::filesystem::path(a.fid).parent_path() / "manifest.json";
        std::ifstream in(manifest);
        if (!in) {
            throw ArgumentError("pass --reference-mhz or keep manifest.json next to the FID");
        }
        opt.reference_hz = nlohmann::json::parse(in).at("reference_hz").get<double>();
    }
    const auto s = to_spectrum(fid, opt);
    const std::filesystem::path out =
        a.out.empty() ? std::filesystem::path(a.fid).parent_path() / "spectrum.csv" : std::filesystem::path(a.out);
    write_spectrum_csv(s, out);
    if (!a.svg.empty()) {
        std::ofstream(a.svg) << spectrum_svg(s);
    }
    std::cout << "rank,ppm,intensity\n";
    const auto peaks = peak_positions(s, a.threshold);
    for (std::size_t i = 0; i < peaks.size() && i < 20; ++i) {
        const auto it = std::find(s.ppm.begin(), s.ppm.end(), peaks[i]);
        std::cout << i + 1 << ',' << fmt(peaks[i]) << ','
                  << fmt(s.intensity[static_cast<std::size_t>(it - s.ppm.begin())]) << '\n';
    }
    return 0;
}

struct CompareArgs {
    std::string a;
    std::string b;
    std::vector<std::string> windows;
    std::string out;
};

int cmd_compare(const CompareArgs &c) {
    const auto fa = read_fid_csv(c.a);
    const auto fb = read_fid_csv(c.b);
    if (fa.samples.size() != fb.samples.size()) {
        throw ArgumentError("series lengths differ (" + std::to_string(fa.samples.size()) +
                            " vs " + std::to_string(fb.samples.size()) + ")");
    }
    std::vector<std::pair<std::size_t, std::size_t>> ranges{{0, fa.samples.size()}};
    for (const auto &w : c.windows) {
        const auto colon = w.find(':');
        if (colon == std::string::npos) {
            throw ArgumentError("--window expects begin:end");
        }
        const auto lo = std::stoul(w.substr(0, colon));
        const auto hi = std::stoul(w.substr(colon + 1));
        if (lo >= hi || hi > fa.samples.size()) {
            throw ArgumentError("window " + w + " is outside the series");
        }
        ranges.emplace_back(lo, hi);
    }
    std::string out = "window,channel,mse,cosine\n";
    for (auto [lo, hi] : ranges) {
        for (int ch = 0; ch < 2; ++ch) {
            std::vector<double> xa;
            std::vector<double> xb;
            for (std::size_t i = lo; i < hi; ++i) {
                xa.push_back(ch == 0 ? fa.samples[i].real() : fa.samples[i].imag());
                xb.push_back(ch == 0 ? fb.samples[i].real() : fb.samples[i].imag());
            }
            std::string cos = "nan";
            try {
                cos = fmt(cosine_similarity(xa, xb));
            } catch (const ArgumentError &) {
                // a zero channel has no direction
            }
            out += std::to_string(lo) + ":" + std::to_string(hi) + ',' + (ch == 0 ? "re" : "im") +
                   ',' + fmt(mse(xa, xb)) + ',' + cos + '\n';
        }
    }
    std::cout << out;
    if (!c.out.empty()) {
        std::ofstream(c.out) << out;
    }
    return 0;
}

struct MapArgs {
    std::string kind = "heavy-hex";
    int n = 36;
    std::string out;
};

int cmd_make_map(const MapArgs &a) {
    CouplingMap m;
    if (a.kind == "heavy-hex") {
        m = heavy_hex_map();
    } else if (a.kind == "all-to-all") {
        m = all_to_all_map(a.n);
    } else if (a.kind == "line") {
        m = line_map(a.n);
    } else {
        throw ArgumentError("unknown map kind '" + a.kind + "'");
    }
    const auto text = format_coupling_map(m);
    if (a.out.empty()) {
        std::cout << text;
    } else {
        std::ofstream(a.out) << text;
    }
    return 0;
}

struct CircuitArgs {
    ConfigArgs cfg;
    std::size_t index = 0;
    std::string axis = "x";
};

int cmd_circuit(const CircuitArgs &a) {
    const auto cfg = load_with_overrides(a.cfg);
    const auto ex = resolve_experiment(cfg);
    const double t = static_cast<double>(a.index) * ex.dwell_time;
    const auto axis = a.axis == "y" ? MagnetizationAxis::Y : MagnetizationAxis::X;
    const Circuit c = measurement_circuit(ex.hamiltonian, t, axis, ex.observed);
    TranspileOptions topt;
    topt.target = cfg.target;
    topt.basis = cfg.basis;
    topt.dynamical_decoupling = cfg.dd;
    topt.seed = cfg.seed;
    const auto tr = transpile(c, ex.map ? &*ex.map : nullptr, topt);
    std::cout << serialize_circuit(tr.circuit);
    return 0;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"nmrsim: NMR spectra from Trotterized spin dynamics"};
    app.set_version_flag("--version", std::string(NMRSIM_VERSION));
    app.require_subcommand(1);

    ConfigArgs sim;
    add_config_args(app.add_subcommand("simulate", "build FIDs from a config"), sim);
    ConfigArgs depth;
    add_config_args(app.add_subcommand("depth-stats", "transpiled depth and gate counts"), depth);
    ConfigArgs shots;
    add_config_args(app.add_subcommand("shot-protocol", "MSE versus shots sweep"), shots);

    SpectrumArgs sp;
    auto *spc = app.add_subcommand("spectrum", "FFT a FID CSV into a ppm spectrum");
    spc->add_option("fid", sp.fid, "FID CSV (t_seconds,re,im)")->required();
    spc->add_option("--reference-mhz", sp.reference_mhz,
                    "Larmor frequency of the observed nucleus; read from manifest.json when omitted");
    spc->add_option("--pad", sp.pad, "zero-padding factor")->check(CLI::PositiveNumber);
    spc->add_option("--lb", sp.lb, "exponential line broadening in Hz");
    spc->add_option("--phase0", sp.phase0, "zero-order phase in radians");
    spc->add_option("--carrier-ppm", sp.carrier_ppm, "ppm of the reference frequency");
    spc->add_option("--threshold", sp.threshold, "peak threshold relative to the maximum");
    spc->add_option("-o,--output", sp.out, "spectrum CSV path");
    spc->add_option("--svg", sp.svg, "also write an SVG plot");

    CompareArgs cmp;
    auto *cmpc = app.add_subcommand("compare", "MSE and cosine similarity of two FIDs");
    cmpc->add_option("a", cmp.a)->required();
    cmpc->add_option("b", cmp.b)->required();
    cmpc->add_option("--window", cmp.windows, "extra begin:end sample windows");
    cmpc->add_option("-o,--output", cmp.out, "metrics CSV path");

    MapArgs mp;
    auto *mpc = app.add_subcommand("make-map", "write a built-in coupling map");
    mpc->add_option("kind", mp.kind, "heavy-hex | all-to-all | line");
    mpc->add_option("-n", mp.n, "qubits for all-to-all and line maps");
    mpc->add_option("-o,--output", mp.out);

    CircuitArgs ca;
    auto *cc = app.add_subcommand("circuit", "print the circuit for one time point");
    add_config_args(cc, ca.cfg);
    cc->add_option("--index", ca.index, "time index");
    cc->add_option("--axis", ca.axis, "x | y")->check(CLI::IsMember({"x", "y"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : static_cast<int>(ErrorKind::Usage);
    }

    try {
        if (app.got_subcommand("simulate")) {
            return cmd_simulate(sim);
        }
        if (app.got_subcommand("depth-stats")) {
            return cmd_depth_stats(depth);
        }
        if (app.got_subcommand("shot-protocol")) {
            return cmd_shot_protocol(shots);
        }
        if (app.got_subcommand("spectrum")) {
            return cmd_spectrum(sp);
        }
        if (app.got_subcommand("compare")) {
            return cmd_compare(cmp);
        }
        if (app.got_subcommand("make-map")) {
            return cmd_make_map(mp);
        }
        if (app.got_subcommand("circuit")) {
            return cmd_circuit(ca);
        }
    } catch (const Error &e) {
        std::cerr << "nmrsim: " << e.what() << '\n';
        return static_cast<int>(e.kind());
    } catch (const nlohmann::json::exception &e) {
        std::cerr << "nmrsim: bad manifest: " << e.what() << '\n';
        return static_cast<int>(ErrorKind::Data);
    } catch (const std::exception &e) {
        std::cerr << "nmrsim: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
