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
/**
 * @file
 * Experiment configuration: `key = value` text files with command-line
 * overrides. Relative paths resolve against `workspace`.
 *
 * Keys (defaults in parentheses):
 *
 *     system            spin-system file (required)
 *     proton_mhz        1H frequency defining B0 (required); or b0_tesla
 *     observe           isotope symbol of the observed species (1H)
 *     subsystem         comma-separated spins to keep, renumbered in order
 *     points            number of FID samples K (1024)
 *     spectral_width_hz 1 / dwell time; 0 picks the usual ppm window of
 *                       the observed nucleus (0)
 *     shots             exact | <n> (exact)
 *     noise             noise file | superconducting | trapped-ion | none
 *     target            logical | heavy-hex | all-to-all (logical)
 *     map               coupling-map file; built-in map when empty
 *     basis             cz | ms (cz)
 *     mitigation        on | off (off)
 *     group_size        confusion group size, 1..4 (1)
 *     rescale_tau       low-confidence threshold (0)
 *     calibration_shots 0 uses the analytic confusion matrix (0)
 *     dd                on | off (off)
 *     order             auto | sequential | randomized (auto)
 *     seed              (0)
 *     threads           worker count (1)
 *     max_width         statevector qubit cap (26)
 *     pad               zero-padding factor (2)
 *     apodization_hz    exponential line broadening; absent means none
 *     phase0            zero-order phase in radians (0)
 *     carrier_ppm       ppm of the rotating-frame reference (0)
 *     sweep_points      time points in the shot protocol (20)
 *     sweep_repeats     repeats per grid value (1)
 *     sweep_epsilon     plateau tolerance (0.1)
 *     sweep_grid        comma-separated shot counts (100..2000 step 100)
 *     output            output directory (out)
 *     workspace         base for relative paths (config file directory)
 */
#pragma once

#include "nmrsim/kak.hpp"
#include "nmrsim/transpiler.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace nmrsim {

enum class TimeOrder { Auto, Sequential, Randomized };

struct ExperimentConfig {
    std::filesystem::path system;
    std::optional<double> proton_mhz;
    std::optional<double> b0_tesla;
    std::string observe = "1H";
    std::vector<int> subsystem;
    std::size_t points = 1024;
    double spectral_width_hz = 0.0;
    std::optional<std::uint64_t> shots; ///< empty means exact expectations
    std::string noise = "none";
    TargetKind target = TargetKind::Logical;
    std::filesystem::path map;
    NativeBasis basis = NativeBasis::CZ;
    bool mitigation = false;
    std::size_t group_size = 1;
    double rescale_tau = 0.0;
    std::uint64_t calibration_shots = 0;
    bool dd = false;
    TimeOrder order = TimeOrder::Auto;
    std::uint64_t seed = 0;
    int threads = 1;
    int max_width = 26;
    int pad = 2;
    std::optional<double> apodization_hz;
    double phase0 = 0.0;
    double carrier_ppm = 0.0;
    std::size_t sweep_points = 20;
    std::size_t sweep_repeats = 1;
    double sweep_epsilon = 0.1;
    std::vector<std::uint64_t> sweep_grid;
    std::filesystem::path output = "out";
    std::filesystem::path workspace;

    /// Throws ArgumentError for inconsistent settings.
    void validate() const;
    [[nodiscard]] std::filesystem::path resolve(const std::filesystem::path &p) const;
    [[nodiscard]] bool randomized() const;
};

/// Applies one `key = value` assignment; throws ArgumentError on unknown keys
/// or malformed values.
void apply_setting(ExperimentConfig &cfg, std::string_view key,
                   std::string_view value);

ExperimentConfig parse_config(std::string_view text);
/// Sets `workspace` to the file's directory unless the file names one.
ExperimentConfig load_config(const std::filesystem::path &path);

/// Canonical text form; parse_config(format_config(c)) reproduces c.
std::string format_config(const ExperimentConfig &cfg);

/// 64-bit FNV-1a of the canonical form, as 16 hex digits.
std::string config_hash(const ExperimentConfig &cfg);

} // namespace nmrsim
