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
#include "nmrsim/schedule.hpp"

#include <algorithm>

namespace nmrsim {

Schedule schedule_asap(const Circuit &c, const GateDurations &dur,
                       double min_window) {
    const auto &gates = c.gates();
    const auto w = static_cast<std::size_t>(c.width());
    Schedule s;
    s.start.assign(gates.size(), 0.0);
    s.end.assign(gates.size(), 0.0);

    std::vector<double> free_at(w, 0.0);
    std::vector<bool> started(w, false);
    // dd gates seen on the qubit since its last timed gate
    std::vector<bool> dd_pending(w, false);

    auto close_window = [&](int q, double until, std::size_t next) {
        const auto uq = static_cast<std::size_t>(q);
        if (started[uq] && until - free_at[uq] > min_window &&
            until > free_at[uq]) {
            s.idle.push_back({q, free_at[uq], until, next, dd_pending[uq]});
        }
        dd_pending[uq] = false;
    };

    for (std::size_t i = 0; i < gates.size(); ++i) {
        const Gate &g = gates[i];
        if (g.kind == GateKind::Measure) {
            continue;
        }
        const auto q0 = static_cast<std::size_t>(g.qubits[0]);
        if (g.dd) {
            dd_pending[q0] = true;
            s.start[i] = s.end[i] = free_at[q0];
            continue;
        }
        double t0 = free_at[q0];
        double d = dur.one_qubit;
        if (g.arity() == 2) {
            t0 = std::max(t0, free_at[static_cast<std::size_t>(g.qubits[1])]);
            d = dur.two_qubit;
        }
        for (int k = 0; k < g.arity(); ++k) {
            close_window(g.qubits[static_cast<std::size_t>(k)], t0, i);
        }
        s.start[i] = t0;
        s.end[i] = t0 + d;
        for (int k = 0; k < g.arity(); ++k) {
            const auto uq = static_cast<std::size_t>(g.qubits[static_cast<std::size_t>(k)]);
            free_at[uq] = t0 + d;
            started[uq] = true;
        }
    }
    s.makespan = w == 0 ? 0.0 : *std::max_element(free_at.begin(), free_at.end());
    for (std::size_t q = 0; q < w; ++q) {
        close_window(static_cast<int>(q), s.makespan, kEndOfCircuit);
    }
    for (std::size_t i = 0; i < gates.size(); ++i) {
        if (gates[i].kind == GateKind::Measure) {
            s.start[i] = s.makespan;
            s.end[i] = s.makespan + dur.readout;
        }
    }
    return s;
}

} // namespace nmrsim
