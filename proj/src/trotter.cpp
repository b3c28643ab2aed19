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
#include "nmrsim/trotter.hpp"

#include "nmrsim/errors.hpp"

#include <cmath>
#include <numbers>

namespace nmrsim {

std::vector<Gate> prepare_plus_state_gates(int width) {
    if (width < 1) {
        throw ArgumentError("width must be at least 1");
    }
    std::vector<Gate> gates;
    gates.reserve(static_cast<std::size_t>(width));
    for (int q = 0; q < width; ++q) {
        gates.push_back(Gate::h(q));
    }
    return gates;
}

std::vector<Gate> trotter_evolution_gates(const PauliTermList &h, double t) {
    if (!std::isfinite(t)) {
        throw ArgumentError("time point must be finite");
    }
    std::vector<Gate> gates;
    gates.reserve(h.z_terms.size() + 3 * h.coupling_terms.size());
    const bool forward = t >= 0.0;
    // exp(-i H_j t) for negative t is the inverse of the positive-t product,
    // so the inverse circuit reverses the order as well.
    auto emit_z = [&](const ZTerm &z) {
        gates.push_back(Gate::rz(z.spin, z.omega * t));
    };
    auto emit_coupling = [&](const CouplingTerm &cp) {
        // c/4 sigma.sigma = (c/2) (sigma.sigma / 2), and c/2 = pi J
        const double theta = 0.5 * cp.c * t;
        if (forward) {
            gates.push_back(Gate::rxx(cp.i, cp.j, theta));
            gates.push_back(Gate::ryy(cp.i, cp.j, theta));
            gates.push_back(Gate::rzz(cp.i, cp.j, theta));
        } else {
            gates.push_back(Gate::rzz(cp.i, cp.j, theta));
            gates.push_back(Gate::ryy(cp.i, cp.j, theta));
            gates.push_back(Gate::rxx(cp.i, cp.j, theta));
        }
    };
    if (forward) {
        for (const auto &z : h.z_terms) {
            emit_z(z);
        }
        for (const auto &cp : h.coupling_terms) {
            emit_coupling(cp);
        }
    } else {
        for (auto it = h.coupling_terms.rbegin(); it != h.coupling_terms.rend();
             ++it) {
            emit_coupling(*it);
        }
        for (auto it = h.z_terms.rbegin(); it != h.z_terms.rend(); ++it) {
            emit_z(*it);
        }
    }
    return gates;
}

Circuit trotter_step(const PauliTermList &h, double t) {
    Circuit c(h.n_spins, t);
    c.append(prepare_plus_state_gates(h.n_spins));
    c.append(trotter_evolution_gates(h, t));
    return c;
}

std::vector<Gate> measurement_rotation(MagnetizationAxis axis,
                                       const std::vector<int> &observed) {
    if (observed.empty()) {
        throw ArgumentError("observed qubit set is empty");
    }
    std::vector<Gate> gates;
    for (int q : observed) {
        if (axis == MagnetizationAxis::X) {
            gates.push_back(Gate::h(q));
        } else {
            // H S^dagger maps |+i> to |0>
            Mat2 hs;
            const double r = 1.0 / std::numbers::sqrt2;
            hs << r, complex_t{0.0, -r}, r, complex_t{0.0, r};
            gates.push_back(su2_from_matrix(q, hs));
        }
    }
    return gates;
}

Circuit measurement_circuit(const PauliTermList &h, double t,
                            MagnetizationAxis axis,
                            const std::vector<int> &observed) {
    Circuit c = trotter_step(h, t);
    c.append(measurement_rotation(axis, observed));
    for (int q : observed) {
        c.append(Gate::measure(q));
    }
    return c;
}

} // namespace nmrsim
