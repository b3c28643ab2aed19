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
 * Spin systems: isotope constants, the line-oriented spin-system file format
 * and validation.
 *
 * File grammar (one directive per line, `#` starts a comment):
 *
 *     N <n_spins>                      first directive, n_spins >= 1
 *     ISOTOPES <sym_0> ... <sym_{N-1}> second directive, exactly N symbols
 *     SHIFT <i> <ppm>                  exactly once for every spin i
 *     J <i> <j> <hz>                   i < j, each pair at most once
 *
 * Tokens are separated by blanks; every line must have exactly the listed
 * number of tokens.
 */
#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace nmrsim {

struct Isotope {
    std::string symbol;
    /// rad s^-1 T^-1
    double gyromagnetic_ratio = 0.0;
};

/**
 * @brief Symbol -> gyromagnetic ratio lookup.
 *
 * The built-in table carries 1H, 13C, 15N, 19F and 31P. Extra entries can be
 * loaded from a file of `ISOTOPE <symbol> <gamma>` lines.
 */
class IsotopeTable {
  public:
    static const IsotopeTable &builtin();

    void add(Isotope iso);
    [[nodiscard]] std::optional<Isotope> find(std::string_view symbol) const;
    [[nodiscard]] std::vector<std::string> symbols() const;

    static IsotopeTable load(const std::filesystem::path &path,
                             const IsotopeTable &base = builtin());

  private:
    std::map<std::string, double, std::less<>> gamma_;
};

struct FieldConfig {
    double b0_tesla = 0.0;

    /// Field at which 1H precesses at the given frequency (MHz).
    static FieldConfig from_proton_mhz(double mhz);
};

/// Larmor frequency gamma*B0/(2 pi) in Hz.
double larmor_hz(const Isotope &iso, const FieldConfig &field);

using SpinPair = std::pair<int, int>;

struct SpinSystem {
    int n_spins = 0;
    std::vector<Isotope> isotopes;
    std::vector<double> shifts_ppm;
    /// Upper-triangular (i < j) scalar couplings in Hz.
    std::map<SpinPair, double> couplings_hz;
    std::string label;

    /// Throws ValidationError when any structural invariant is broken.
    void validate() const;

    /// Indices of spins whose isotope symbol equals `symbol`.
    [[nodiscard]] std::vector<int> spins_of(std::string_view symbol) const;

    [[nodiscard]] std::size_t nonzero_coupling_count() const;
};

SpinSystem parse_spin_system(std::string_view source, std::string label = {},
                             const IsotopeTable &table = IsotopeTable::builtin());

SpinSystem load_spin_system(const std::filesystem::path &path,
                            const IsotopeTable &table = IsotopeTable::builtin());

/// Inverse of parse_spin_system (comments are not preserved).
std::string format_spin_system(const SpinSystem &sys);

/// Keep only the listed spins (renumbered in the given order).
SpinSystem subsystem(const SpinSystem &sys, const std::vector<int> &keep);

} // namespace nmrsim
