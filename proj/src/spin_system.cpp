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
#include "nmrsim/spin_system.hpp"

#include "nmrsim/errors.hpp"
#include "text_util.hpp"

#include <cmath>
#include <numbers>
#include <set>
#include <sstream>

namespace nmrsim {

const IsotopeTable &IsotopeTable::builtin() {
    static const IsotopeTable table = [] {
        IsotopeTable t;
        // rad s^-1 T^-1, standard reference values
        t.add({"1H", 267.52218744e6});
        t.add({"13C", 67.2828e6});
        t.add({"15N", -27.116e6});
        t.add({"19F", 251.815e6});
        t.add({"31P", 108.291e6});
        return t;
    }();
    return table;
}

void IsotopeTable::add(Isotope iso) {
    if (iso.symbol.empty()) {
        throw ValidationError("isotope symbol must not be empty");
    }
    if (!std::isfinite(iso.gyromagnetic_ratio) ||
        iso.gyromagnetic_ratio == 0.0) {
        throw ValidationError("isotope '" + iso.symbol +
                              "' needs a finite nonzero gyromagnetic ratio");
    }
    gamma_[iso.symbol] = iso.gyromagnetic_ratio;
}

std::optional<Isotope> IsotopeTable::find(std::string_view symbol) const {
    auto it = gamma_.find(symbol);
    if (it == gamma_.end()) {
        return std::nullopt;
    }
    return Isotope{it->first, it->second};
}

std::vector<std::string> IsotopeTable::symbols() const {
    std::vector<std::string> out;
    for (const auto &[k, v] : gamma_) {
        out.push_back(k);
    }
    return out;
}

IsotopeTable IsotopeTable::load(const std::filesystem::path &path,
                                const IsotopeTable &base) {
    IsotopeTable t = base;
    const auto src = text::read_file(path);
    text::for_each_line(src, [&](int line, std::string_view content) {
        auto tok = text::split_ws(content);
        if (tok.size() != 3 || tok[0] != "ISOTOPE") {
            throw ParseError("expected 'ISOTOPE <symbol> <gamma>'", line);
        }
        t.add({std::string(tok[1]),
               text::require_double(tok[2], line, "gyromagnetic ratio")});
    });
    return t;
}

FieldConfig FieldConfig::from_proton_mhz(double mhz) {
    const auto h = IsotopeTable::builtin().find("1H");
    return FieldConfig{2.0 * std::numbers::pi * mhz * 1e6 /
                       h->gyromagnetic_ratio};
}

double larmor_hz(const Isotope &iso, const FieldConfig &field) {
    return iso.gyromagnetic_ratio * field.b0_tesla / (2.0 * std::numbers::pi);
}

void SpinSystem::validate() const {
    if (n_spins < 1) {
        throw ValidationError("spin system needs at least one spin");
    }
    const auto n = static_cast<std::size_t>(n_spins);
    if (isotopes.size() != n || shifts_ppm.size() != n) {
        throw ValidationError("isotope/shift list length differs from N");
    }
    for (const auto &iso : isotopes) {
        if (!std::isfinite(iso.gyromagnetic_ratio) ||
            iso.gyromagnetic_ratio == 0.0) {
            throw ValidationError("isotope '" + iso.symbol +
                                  "' has no usable gyromagnetic ratio");
        }
    }
    for (double s : shifts_ppm) {
        if (!std::isfinite(s)) {
            throw ValidationError("chemical shifts must be finite");
        }
    }
    for (const auto &[pair, hz] : couplings_hz) {
        const auto [i, j] = pair;
        if (i < 0 || j < 0 || i >= n_spins || j >= n_spins) {
            throw ValidationError("coupling (" + std::to_string(i) + "," +
                                  std::to_string(j) + ") out of range");
        }
        if (i == j) {
            throw ValidationError("self-coupling on spin " +
                                  std::to_string(i));
        }
        if (i > j) {
            throw ValidationError("couplings must be stored with i < j");
        }
        if (!std::isfinite(hz)) {
            throw ValidationError("coupling constants must be finite");
        }
    }
}

std::vector<int> SpinSystem::spins_of(std::string_view symbol) const {
    std::vector<int> out;
    for (int k = 0; k < n_spins; ++k) {
        if (isotopes[static_cast<std::size_t>(k)].symbol == symbol) {
            out.push_back(k);
        }
    }
    return out;
}

std::size_t SpinSystem::nonzero_coupling_count() const {
    std::size_t n = 0;
    for (const auto &[pair, hz] : couplings_hz) {
        n += (hz != 0.0) ? 1 : 0;
    }
    return n;
}

SpinSystem parse_spin_system(std::string_view source, std::string label,
                             const IsotopeTable &table) {
    SpinSystem sys;
    sys.label = std::move(label);
    int directive = 0;
    std::set<int> seen_shift;

    auto spin_index = [&](std::string_view tok, int line) {
        const auto v = text::require_int(tok, line, "spin index");
        if (v < 0 || v >= sys.n_spins) {
            throw ValidationError("line " + std::to_string(line) +
                                  ": spin index " + std::to_string(v) +
                                  " out of range [0, " +
                                  std::to_string(sys.n_spins) + ")");
        }
        return static_cast<int>(v);
    };

    text::for_each_line(source, [&](int line, std::string_view content) {
        const auto tok = text::split_ws(content);
        const auto &key = tok.front();
        ++directive;
        if (directive == 1) {
            if (key != "N" || tok.size() != 2) {
                throw ParseError("first directive must be 'N <n_spins>'", line);
            }
            const auto n = text::require_int(tok[1], line, "N");
            if (n < 1 || n > 4096) {
                throw ParseError("N must be in [1, 4096]", line);
            }
            sys.n_spins = static_cast<int>(n);
            sys.shifts_ppm.assign(static_cast<std::size_t>(n), 0.0);
            return;
        }
        if (directive == 2) {
            if (key != "ISOTOPES") {
                throw ParseError("second directive must be 'ISOTOPES ...'",
                                 line);
            }
            if (tok.size() != static_cast<std::size_t>(sys.n_spins) + 1) {
                throw ParseError("ISOTOPES lists " +
                                     std::to_string(tok.size() - 1) +
                                     " symbols, expected " +
                                     std::to_string(sys.n_spins),
                                 line);
            }
            for (std::size_t k = 1; k < tok.size(); ++k) {
                auto iso = table.find(tok[k]);
                if (!iso) {
                    throw ValidationError("line " + std::to_string(line) +
                                          ": unknown isotope '" +
                                          std::string(tok[k]) + "'");
                }
                sys.isotopes.push_back(*iso);
            }
            return;
        }
        if (key == "SHIFT") {
            if (tok.size() != 3) {
                throw ParseError("expected 'SHIFT <i> <ppm>'", line);
            }
            const int i = spin_index(tok[1], line);
            if (!seen_shift.insert(i).second) {
                throw ParseError("duplicate SHIFT for spin " +
                                     std::to_string(i),
                                 line);
            }
            sys.shifts_ppm[static_cast<std::size_t>(i)] =
                text::require_double(tok[2], line, "shift");
            return;
        }
        if (key == "J") {
            if (tok.size() != 4) {
                throw ParseError("expected 'J <i> <j> <hz>'", line);
            }
            const int i = spin_index(tok[1], line);
            const int j = spin_index(tok[2], line);
            if (i == j) {
                throw ValidationError("line " + std::to_string(line) +
                                      ": self-coupling J " +
                                      std::to_string(i) + " " +
                                      std::to_string(j));
            }
            if (i > j) {
                throw ParseError("J indices must satisfy i < j", line);
            }
            const double hz = text::require_double(tok[3], line, "J");
            if (!sys.couplings_hz.emplace(SpinPair{i, j}, hz).second) {
                throw ParseError("duplicate J for pair (" + std::to_string(i) +
                                     "," + std::to_string(j) + ")",
                                 line);
            }
            return;
        }
        throw ParseError("unknown directive '" + std::string(key) + "'",
                         line);
    });

    if (directive < 2) {
        throw ParseError("spin system needs 'N' and 'ISOTOPES' directives");
    }
    if (seen_shift.size() != static_cast<std::size_t>(sys.n_spins)) {
        for (int k = 0; k < sys.n_spins; ++k) {
            if (!seen_shift.count(k)) {
                throw ParseError("missing SHIFT for spin " +
                                 std::to_string(k));
            }
        }
    }
    sys.validate();
    return sys;
}

SpinSystem load_spin_system(const std::filesystem::path &path,
                            const IsotopeTable &table) {
    return parse_spin_system(text::read_file(path), path.stem().string(),
                             table);
}

std::string format_spin_system(const SpinSystem &sys) {
    std::ostringstream os;
    os << "N " << sys.n_spins << "\nISOTOPES";
    for (const auto &iso : sys.isotopes) {
        os << ' ' << iso.symbol;
    }
    os << '\n';
    for (int k = 0; k < sys.n_spins; ++k) {
        os << "SHIFT " << k << ' '
           << text::fmt_double(sys.shifts_ppm[static_cast<std::size_t>(k)])
           << '\n';
    }
    for (const auto &[pair, hz] : sys.couplings_hz) {
        os << "J " << pair.first << ' ' << pair.second << ' '
           << text::fmt_double(hz) << '\n';
    }
    return os.str();
}

SpinSystem subsystem(const SpinSystem &sys, const std::vector<int> &keep) {
    SpinSystem out;
    out.n_spins = static_cast<int>(keep.size());
    out.label = sys.label + "_sub" + std::to_string(keep.size());
    std::map<int, int> renumber;
    for (std::size_t k = 0; k < keep.size(); ++k) {
        const int old = keep[k];
        if (old < 0 || old >= sys.n_spins || renumber.count(old)) {
            throw ArgumentError("subsystem indices must be distinct and valid");
        }
        renumber[old] = static_cast<int>(k);
        out.isotopes.push_back(sys.isotopes[static_cast<std::size_t>(old)]);
        out.shifts_ppm.push_back(sys.shifts_ppm[static_cast<std::size_t>(old)]);
    }
    for (const auto &[pair, hz] : sys.couplings_hz) {
        auto a = renumber.find(pair.first);
        auto b = renumber.find(pair.second);
        if (a == renumber.end() || b == renumber.end()) {
            continue;
        }
        const int i = std::min(a->second, b->second);
        const int j = std::max(a->second, b->second);
        out.couplings_hz[{i, j}] = hz;
    }
    out.validate();
    return out;
}

} // namespace nmrsim
