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
#include "nmrsim/config.hpp"
#include "nmrsim/errors.hpp"
#include "nmrsim/experiment.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>

using namespace nmrsim;

namespace {

const std::filesystem::path kRoot = NMRSIM_SOURCE_DIR;

ExperimentConfig base(const std::string &system) {
    ExperimentConfig cfg;
    cfg.system = kRoot / "data/systems" / system;
    cfg.proton_mhz = 400.0;
    return cfg;
}

} // namespace

TEST_CASE("config parsing, validation and hashing") {
    const auto cfg = parse_config("system = a.spin\nproton_mhz = 500\npoints = 64\nshots = 100\n"
                                  "noise = superconducting\nmitigation = on\n# comment\nthreads = 3\n");
    CHECK(cfg.points == 64);
    CHECK(*cfg.shots == 100);
    CHECK(cfg.mitigation);
    CHECK(cfg.randomized());

    auto other = cfg;
    other.threads = 1;
    other.output = "elsewhere";
    CHECK(config_hash(other) == config_hash(cfg));
    other.seed = 5;
    CHECK(config_hash(other) != config_hash(cfg));
    CHECK(parse_config(format_config(cfg)).points == 64);

    CHECK_THROWS_AS(parse_config("points = many\n"), ArgumentError);
    CHECK_THROWS_AS(parse_config("colour = blue\n"), ArgumentError);
    CHECK_THROWS_AS(parse_config("system = a\nproton_mhz = 400\nmitigation = on\n").validate(), ArgumentError);
    // A later field key replaces the earlier one, so --set can switch units.
    auto both = parse_config("system = a\nproton_mhz = 400\nb0_tesla = 9\n");
    CHECK_FALSE(both.proton_mhz.has_value());
    both.proton_mhz = 400.0;
    CHECK_THROWS_AS(both.validate(), ArgumentError);
    CHECK_THROWS_AS(parse_config("system = a\nproton_mhz = 400\ndd = on\n").validate(), ArgumentError);
    CHECK_THROWS_AS(parse_config("system = a\nproton_mhz = 400\nsweep_grid = 5,3\n").validate(), ArgumentError);
}

TEST_CASE("resolution picks observed spins, reference and dwell") {
    auto cfg = base("toy4.spin");
    cfg.validate();
    const auto ex = resolve_experiment(cfg);
    CHECK(ex.observed == std::vector<int>{0, 1, 2, 3});
    CHECK(ex.reference_hz == doctest::Approx(400e6).epsilon(1e-9));
    // 20 ppm window at 400 MHz
    CHECK(1.0 / ex.dwell_time == doctest::Approx(8000.0).epsilon(1e-9));

    cfg.observe = "13C";
    CHECK_THROWS_AS(resolve_experiment(cfg), ArgumentError);
    cfg.observe = "1H";
    cfg.proton_mhz.reset();
    CHECK_THROWS_AS(resolve_experiment(cfg), ArgumentError);
}

TEST_CASE("exact single-spin FID through the experiment layer") {
    auto cfg = base("single_1h.spin");
    cfg.points = 64;
    cfg.validate();
    const auto ex = resolve_experiment(cfg);
    const auto res = run_simulation(cfg, ex);
    const double w = 2.0 * std::numbers::pi * 2.0e-6 * ex.reference_hz;
    for (std::size_t k = 0; k < 64; ++k) {
        const double t = static_cast<double>(k) * ex.dwell_time;
        CHECK(std::abs(res.fid.samples[k] - std::polar(0.5, w * t)) < 1e-12);
    }
}

TEST_CASE("sampled runs are reproducible and independent of thread count") {
    auto cfg = base("toy4.spin");
    cfg.points = 12;
    cfg.shots = 2000;
    cfg.noise = "superconducting";
    cfg.target = TargetKind::HeavyHex;
    cfg.mitigation = true;
    cfg.dd = true;
    cfg.seed = 4;
    cfg.validate();
    const auto ex = resolve_experiment(cfg);
    const auto a = run_simulation(cfg, ex);
    cfg.threads = 3;
    const auto b = run_simulation(cfg, ex);
    CHECK(a.fid.samples == b.fid.samples);
    CHECK(a.execution_order != std::vector<std::size_t>{0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11});
    cfg.seed = 5;
    CHECK(run_simulation(cfg, ex).fid.samples != a.fid.samples);
}

TEST_CASE("width guard applies before any simulation") {
    auto cfg = base("phosphorous_cluster.spin");
    cfg.observe = "31P";
    cfg.points = 4;
    cfg.validate();
    const auto ex = resolve_experiment(cfg);
    CHECK_THROWS_AS(run_simulation(cfg, ex), CapabilityError);
    const auto rows = run_depth_stats(cfg, ex);
    // logical, routed and consolidated rows per time point
    CHECK(rows.size() == 3 * 4);
    CHECK(rows[0].stage == "logical");
    CHECK(rows[0].report.two_qubit_gate_count == 3 * 48);
}

TEST_CASE("shot protocol requires sampled mode") {
    auto cfg = base("toy4.spin");
    cfg.points = 16;
    cfg.validate();
    const auto ex = resolve_experiment(cfg);
    CHECK_THROWS_AS(run_shot_protocol(cfg, ex), ArgumentError);
}
