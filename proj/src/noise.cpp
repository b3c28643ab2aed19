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
#include "nmrsim/noise.hpp"

#include "nmrsim/errors.hpp"
#include "nmrsim/rng.hpp"
#include "nmrsim/schedule.hpp"
#include "text_util.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace nmrsim {

namespace {
double clamp01(double p) { return std::clamp(p, 0.0, 1.0); }

void check_probability(double p, const char *what) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw ValidationError(std::string(what) + " must lie in [0, 1]");
    }
}
} // namespace

void NoiseModel::validate() const {
    check_probability(p1, "P1");
    check_probability(p2, "P2");
    check_probability(p_ro, "PRO");
    check_probability(dd_suppression, "DDSUPP");
    if (!(t2_idle > 0.0)) {
        throw ValidationError("T2IDLE must be positive");
    }
    for (const auto &q : qubit_overrides) {
        check_probability(q.p1, "per-qubit one-qubit error");
        check_probability(q.p_ro, "per-qubit readout error");
        if (!(q.t2 > 0.0)) {
            throw ValidationError("per-qubit T2 must be positive");
        }
    }
}

NoiseModel NoiseModel::at_run(std::uint64_t run_index) const {
    NoiseModel m = *this;
    if (!drift) {
        return m;
    }
    const double r = static_cast<double>(run_index);
    m.p1 = clamp01(p1 + drift->dp1 * r);
    m.p2 = clamp01(p2 + drift->dp2 * r);
    m.p_ro = clamp01(p_ro + drift->dpro * r);
    for (auto &q : m.qubit_overrides) {
        q.p1 = clamp01(q.p1 + drift->dp1 * r);
        q.p_ro = clamp01(q.p_ro + drift->dpro * r);
    }
    return m;
}

double NoiseModel::p1_of(int q) const {
    const auto uq = static_cast<std::size_t>(q);
    return uq < qubit_overrides.size() ? qubit_overrides[uq].p1 : p1;
}

double NoiseModel::p_ro_of(int q) const {
    const auto uq = static_cast<std::size_t>(q);
    return uq < qubit_overrides.size() ? qubit_overrides[uq].p_ro : p_ro;
}

double NoiseModel::t2_of(int q) const {
    const auto uq = static_cast<std::size_t>(q);
    return uq < qubit_overrides.size() ? qubit_overrides[uq].t2 : t2_idle;
}

bool NoiseModel::is_noiseless() const {
    if (p1 != 0.0 || p2 != 0.0 || p_ro != 0.0 || std::isfinite(t2_idle)) {
        return false;
    }
    return std::all_of(qubit_overrides.begin(), qubit_overrides.end(),
                       [](const QubitNoise &q) {
                           return q.p1 == 0.0 && q.p_ro == 0.0 &&
                                  !std::isfinite(q.t2);
                       });
}

NoiseModel NoiseModel::superconducting_defaults() {
    NoiseModel m;
    m.p1 = 2.07e-4;
    m.p2 = 1.93e-3;
    m.p_ro = 7.81e-3;
    m.t2_idle = 188e-6;
    m.dd_suppression = 0.1;
    m.durations = {32e-9, 68e-9, 2.6e-6};
    return m;
}

NoiseModel NoiseModel::trapped_ion_defaults() {
    NoiseModel m;
    m.p1 = 2.1e-4;
    m.p2 = 7.66e-3;
    m.p_ro = 6.08e-3;
    m.t2_idle = 0.95;
    m.dd_suppression = 0.1;
    m.durations = {63e-6, 650e-6, 250e-6};
    return m;
}

NoiseModel parse_noise_model(std::string_view src) {
    NoiseModel m;
    text::for_each_line(src, [&](int line, std::string_view content) {
        const auto tok = text::split_ws(content);
        const auto &key = tok[0];
        auto arg = [&](std::size_t k) {
            if (k >= tok.size()) {
                throw ParseError("missing value for " + std::string(key), line);
            }
            if (tok[k] == "inf") {
                return std::numeric_limits<double>::infinity();
            }
            return text::require_double(tok[k], line, std::string(key));
        };
        auto expect = [&](std::size_t n) {
            if (tok.size() != n) {
                throw ParseError("wrong number of values for " +
                                     std::string(key),
                                 line);
            }
        };
        if (key == "P1") {
            expect(2);
            m.p1 = arg(1);
        } else if (key == "P2") {
            expect(2);
            m.p2 = arg(1);
        } else if (key == "PRO") {
            expect(2);
            m.p_ro = arg(1);
        } else if (key == "T2IDLE") {
            expect(2);
            m.t2_idle = arg(1);
        } else if (key == "DDSUPP") {
            expect(2);
            m.dd_suppression = arg(1);
        } else if (key == "DRIFT") {
            expect(4);
            m.drift = DriftSchedule{arg(1), arg(2), arg(3)};
        } else if (key == "SEED") {
            expect(2);
            long long s = text::require_int(tok[1], line, "SEED");
            if (s < 0) {
                throw ParseError("SEED must be nonnegative", line);
            }
            m.seed = static_cast<std::uint64_t>(s);
        } else if (key == "DUR") {
            expect(4);
            m.durations = {arg(1), arg(2), arg(3)};
        } else if (key == "Q") {
            expect(6);
            const auto q = text::require_int(tok[1], line, "qubit");
            if (q < 0 || q > 4096) {
                throw ValidationError("line " + std::to_string(line) +
                                      ": qubit index out of range");
            }
            const auto uq = static_cast<std::size_t>(q);
            if (m.qubit_overrides.size() <= uq) {
                m.qubit_overrides.resize(uq + 1, QubitNoise{});
            }
            m.qubit_overrides[uq] = {arg(2), arg(3), arg(5)};
        } else {
            throw ParseError("unknown directive '" + std::string(key) + "'",
                             line);
        }
    });
    // Entries skipped by the Q lines inherit the global values.
    for (std::size_t q = 0; q < m.qubit_overrides.size(); ++q) {
        auto &o = m.qubit_overrides[q];
        if (o.p1 == 0.0 && o.p_ro == 0.0 && !std::isfinite(o.t2)) {
            o = {m.p1, m.p_ro, m.t2_idle};
        }
    }
    m.validate();
    return m;
}

NoiseModel load_noise_model(const std::filesystem::path &path) {
    return parse_noise_model(text::read_file(path));
}

double dephasing_probability(double tau, double t2) {
    if (!std::isfinite(t2) || tau <= 0.0) {
        return 0.0;
    }
    return 0.5 * (1.0 - std::exp(-tau / t2));
}

namespace {

enum class ErrKind : std::uint8_t { Depol1, Depol2, Dephase };

struct Opportunity {
    std::size_t slot; ///< error acts after the first `slot` gates
    ErrKind kind;
    int q0;
    int q1;
    double p;
};

struct Event {
    std::size_t opp;  ///< index into the opportunity list
    std::uint8_t pauli; ///< 1..3 (one qubit) or 1..15 (two qubits, 2 bits each)
};

struct Trajectory {
    std::uint64_t shot;
    std::vector<Event> events;
};

void apply_pauli(Statevector &s, int q, int p) {
    Mat2 m;
    switch (p) {
    case 1:
        m << 0.0, 1.0, 1.0, 0.0;
        break;
    case 2:
        m << 0.0, complex_t{0.0, -1.0}, complex_t{0.0, 1.0}, 0.0;
        break;
    case 3:
        m << 1.0, 0.0, 0.0, -1.0;
        break;
    default:
        return;
    }
    apply_matrix_1q(s, q, m);
}

void apply_event(Statevector &s, const Opportunity &o, std::uint8_t pauli) {
    if (o.kind == ErrKind::Depol2) {
        apply_pauli(s, o.q0, pauli & 3);
        apply_pauli(s, o.q1, (pauli >> 2) & 3);
    } else {
        apply_pauli(s, o.q0, pauli);
    }
}

std::uint64_t apply_readout(std::uint64_t outcome, const std::vector<int> &measured,
                            const NoiseModel &nm, RngStream &rng) {
    for (std::size_t k = 0; k < measured.size(); ++k) {
        if (rng.uniform() < nm.p_ro_of(measured[k])) {
            outcome ^= std::uint64_t{1} << k;
        }
    }
    return outcome;
}

} // namespace

ShotCounts noisy_run(const Circuit &c, const NoiseModel &nm,
                     std::uint64_t n_shots, std::uint64_t seed,
                     const RunOptions &opt) {
    nm.validate();
    if (n_shots == 0) {
        throw ArgumentError("n_shots must be at least 1");
    }
    const auto &measured = c.measured_qubits();
    if (measured.empty()) {
        throw ArgumentError("noisy_run needs a circuit with measurements");
    }
    check_width(c.width(), opt.max_width);
    const auto &gates = c.gates();
    const std::size_t n_timed = static_cast<std::size_t>(
        std::find_if(gates.begin(), gates.end(),
                     [](const Gate &g) { return g.kind == GateKind::Measure; }) -
        gates.begin());

    std::vector<Opportunity> opps;
    for (std::size_t i = 0; i < n_timed; ++i) {
        const Gate &g = gates[i];
        if (is_two_qubit(g.kind)) {
            if (nm.p2 > 0.0) {
                opps.push_back({i + 1, ErrKind::Depol2, g.qubits[0], g.qubits[1], nm.p2});
            }
        } else {
            const double p = nm.p1_of(g.qubits[0]);
            if (p > 0.0) {
                opps.push_back({i + 1, ErrKind::Depol1, g.qubits[0], -1, p});
            }
        }
    }
    bool any_t2 = false;
    for (int q = 0; q < c.width(); ++q) {
        any_t2 = any_t2 || std::isfinite(nm.t2_of(q));
    }
    if (any_t2) {
        const Schedule sched = schedule_asap(c, nm.durations);
        for (const auto &w : sched.idle) {
            double p = dephasing_probability(w.duration(), nm.t2_of(w.qubit));
            if (w.dd_protected) {
                p *= nm.dd_suppression;
            }
            if (p > 0.0) {
                const std::size_t slot = w.next_gate == kEndOfCircuit ? n_timed : w.next_gate;
                opps.push_back({slot, ErrKind::Dephase, w.qubit, -1, p});
            }
        }
    }
    std::stable_sort(opps.begin(), opps.end(),
                     [](const Opportunity &a, const Opportunity &b) { return a.slot < b.slot; });

    // first[k] = P(first error is opportunity k), accumulated
    std::vector<double> first_cdf(opps.size());
    double survive = 1.0;
    double acc = 0.0;
    for (std::size_t k = 0; k < opps.size(); ++k) {
        acc += survive * opps[k].p;
        first_cdf[k] = acc;
        survive *= 1.0 - opps[k].p;
    }
    const double p_clean = survive;

    const Statevector clean = run_circuit(c, opt);
    const auto clean_cdf = cumulative(marginal_probabilities(clean, measured));

    const std::uint64_t sel_seed =
        derive_seed(seed, static_cast<std::uint64_t>(RngPurpose::NoiseSelect));
    const std::uint64_t samp_seed =
        derive_seed(seed, static_cast<std::uint64_t>(RngPurpose::Sampling));
    const std::uint64_t ro_seed =
        derive_seed(seed, static_cast<std::uint64_t>(RngPurpose::Readout));

    std::vector<std::uint64_t> outcome(n_shots, 0);
    std::vector<Trajectory> noisy;
    for (std::uint64_t s = 0; s < n_shots; ++s) {
        RngStream sel(sel_seed, s);
        if (opps.empty() || sel.uniform() < p_clean) {
            RngStream samp(samp_seed, s);
            outcome[s] = sample_outcome(clean_cdf, samp.uniform());
            continue;
        }
        Trajectory t{s, {}};
        const double v = sel.uniform() * first_cdf.back();
        auto it = std::upper_bound(first_cdf.begin(), first_cdf.end(), v);
        const std::size_t k0 = std::min(static_cast<std::size_t>(it - first_cdf.begin()),
                                        opps.size() - 1);
        auto pick = [&](std::size_t k) {
            const auto n = opps[k].kind == ErrKind::Depol2 ? 15U : 3U;
            return static_cast<std::uint8_t>(1 + sel.below(n));
        };
        t.events.push_back({k0, pick(k0)});
        for (std::size_t k = k0 + 1; k < opps.size(); ++k) {
            if (sel.uniform() < opps[k].p) {
                t.events.push_back({k, pick(k)});
            }
        }
        noisy.push_back(std::move(t));
    }

    // One sweep along the noiseless prefix; each trajectory branches off at
    // its first error.
    std::stable_sort(noisy.begin(), noisy.end(), [&](const Trajectory &a, const Trajectory &b) {
        return opps[a.events[0].opp].slot < opps[b.events[0].opp].slot;
    });
    Statevector prefix(c.width());
    std::size_t applied = 0;
    for (const auto &t : noisy) {
        const std::size_t slot0 = opps[t.events[0].opp].slot;
        while (applied < slot0) {
            apply_gate(prefix, gates[applied++]);
        }
        Statevector s = prefix;
        std::size_t e = 0;
        for (std::size_t i = slot0; i <= n_timed; ++i) {
            while (e < t.events.size() && opps[t.events[e].opp].slot == i) {
                apply_event(s, opps[t.events[e].opp], t.events[e].pauli);
                ++e;
            }
            if (i < n_timed) {
                apply_gate(s, gates[i]);
            }
        }
        const auto cdf = cumulative(marginal_probabilities(s, measured));
        RngStream samp(samp_seed, t.shot);
        outcome[t.shot] = sample_outcome(cdf, samp.uniform());
    }

    std::vector<std::uint64_t> hist(std::size_t{1} << measured.size(), 0);
    for (std::uint64_t s = 0; s < n_shots; ++s) {
        RngStream ro(ro_seed, s);
        ++hist[apply_readout(outcome[s], measured, nm, ro)];
    }
    ShotCounts out;
    out.measured = measured;
    out.n_shots = n_shots;
    for (std::size_t k = 0; k < hist.size(); ++k) {
        if (hist[k] != 0) {
            out.counts.emplace(outcome_bitstring(k, measured.size()), hist[k]);
        }
    }
    return out;
}

std::vector<double> apply_readout_noise(const std::vector<double> &p,
                                        const std::vector<int> &measured,
                                        const NoiseModel &nm) {
    std::vector<double> cur = p;
    for (std::size_t k = 0; k < measured.size(); ++k) {
        const double f = nm.p_ro_of(measured[k]);
        std::vector<double> next(cur.size());
        const std::size_t bit = std::size_t{1} << k;
        for (std::size_t x = 0; x < cur.size(); ++x) {
            next[x] = (1.0 - f) * cur[x] + f * cur[x ^ bit];
        }
        cur.swap(next);
    }
    return cur;
}

std::vector<std::size_t> randomized_time_ordering(std::size_t k,
                                                  std::uint64_t seed) {
    if (k == 0) {
        throw ArgumentError("time ordering needs at least one point");
    }
    std::vector<std::size_t> perm(k);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    RngStream rng(derive_seed(seed, static_cast<std::uint64_t>(RngPurpose::TimeOrder)), 0);
    for (std::size_t i = k - 1; i > 0; --i) {
        const auto j = static_cast<std::size_t>(rng.below(i + 1));
        std::swap(perm[i], perm[j]);
    }
    return perm;
}

std::vector<std::uint64_t> ShotSweepConfig::default_grid() {
    std::vector<std::uint64_t> g;
    for (std::uint64_t n = 100; n <= 2000; n += 100) {
        g.push_back(n);
    }
    return g;
}

void fit_inverse_law(const std::vector<std::uint64_t> &grid,
                     const std::vector<double> &mse, double &a, double &b) {
    const double n = static_cast<double>(grid.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double x = 1.0 / static_cast<double>(grid[i]);
        sx += x;
        sy += mse[i];
        sxx += x * x;
        sxy += x * mse[i];
    }
    const double det = n * sxx - sx * sx;
    if (std::abs(det) < 1e-300) {
        a = sy / n;
        b = 0.0;
        return;
    }
    a = (sxx * sy - sx * sxy) / det;
    b = (n * sxy - sx * sy) / det;
    if (a < 0.0) {
        a = 0.0;
        b = sxy / sxx;
    }
    if (b < 0.0) {
        b = 0.0;
        a = std::max(0.0, sy / n);
    }
}

std::uint64_t select_plateau(const std::vector<std::uint64_t> &grid,
                             double fit_a, double fit_b, double epsilon) {
    if (grid.empty()) {
        throw ArgumentError("shot grid is empty");
    }
    auto f = [&](std::uint64_t n) { return fit_a + fit_b / static_cast<double>(n); };
    const double target = (1.0 + epsilon) * f(grid.back());
    for (std::uint64_t n : grid) {
        if (f(n) <= target * (1.0 + 1e-12)) {
            return n;
        }
    }
    return grid.back();
}

std::vector<std::size_t> sample_time_points(std::size_t k, std::size_t n,
                                            std::uint64_t seed) {
    if (n > k) {
        throw ArgumentError("cannot sample more time points than exist");
    }
    std::vector<std::size_t> all(k);
    std::iota(all.begin(), all.end(), std::size_t{0});
    RngStream rng(derive_seed(seed, static_cast<std::uint64_t>(RngPurpose::TimeSample)), 0);
    for (std::size_t i = 0; i < n; ++i) {
        const auto j = i + static_cast<std::size_t>(rng.below(k - i));
        std::swap(all[i], all[j]);
    }
    all.resize(n);
    std::sort(all.begin(), all.end());
    return all;
}

ShotSweepResult shot_budget_sweep(
    const ShotSweepConfig &cfg, const std::vector<complex_t> &reference,
    const std::function<complex_t(std::size_t, std::uint64_t, std::uint64_t)>
        &estimate) {
    if (cfg.grid.empty() || !std::is_sorted(cfg.grid.begin(), cfg.grid.end())) {
        throw ArgumentError("shot grid must be nonempty and ascending");
    }
    if (reference.empty() || cfg.n_points == 0 || cfg.repeats == 0) {
        throw ArgumentError("shot sweep needs time points and repeats");
    }
    ShotSweepResult res;
    res.grid = cfg.grid;
    const std::size_t k = std::min(cfg.n_points, reference.size());
    res.time_indices = sample_time_points(reference.size(), k, cfg.seed);
    for (std::size_t gi = 0; gi < cfg.grid.size(); ++gi) {
        const std::uint64_t n = cfg.grid[gi];
        double acc = 0.0;
        for (std::size_t r = 0; r < cfg.repeats; ++r) {
            for (std::size_t t : res.time_indices) {
                const std::uint64_t s = derive_seed(cfg.seed, n * 1000003ULL + r, t);
                const complex_t est = estimate(t, n, s);
                const complex_t ref = reference[t];
                const double dr = est.real() - ref.real();
                const double di = est.imag() - ref.imag();
                acc += 0.5 * (dr * dr + di * di);
                res.rows.push_back({t, n, r, est, ref});
            }
        }
        res.mse.push_back(acc / static_cast<double>(cfg.repeats * k));
    }
    fit_inverse_law(res.grid, res.mse, res.fit_a, res.fit_b);
    res.selected = select_plateau(res.grid, res.fit_a, res.fit_b, cfg.epsilon);
    return res;
}

} // namespace nmrsim
