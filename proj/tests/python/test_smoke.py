# Copyright 2026 The nmrsim Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
import math
import os
import pathlib

import numpy as np
import pytest

import nmrsim

ROOT = pathlib.Path(os.environ.get("NMRSIM_SOURCE_DIR", pathlib.Path(__file__).resolve().parents[2]))

DOUBLET = """N 2
ISOTOPES 1H 1H
SHIFT 0 1.0
SHIFT 1 4.0
J 0 1 7.0
"""


def _field():
    return nmrsim.FieldConfig.from_proton_mhz(400.0)


def test_spin_system_and_hamiltonian():
    sys = nmrsim.SpinSystem.parse(DOUBLET)
    assert sys.n_spins == 2
    assert sys.isotopes == ["1H", "1H"]
    h = nmrsim.build_rotating_hamiltonian(sys, _field())
    assert len(h.z_terms) == 2
    ((i, j, c),) = h.coupling_terms
    assert (i, j) == (0, 1)
    assert c == pytest.approx(2 * math.pi * 7.0)
    dense = np.asarray(h.dense())
    assert dense.shape == (4, 4)
    assert np.allclose(dense, dense.conj().T)


def test_trotter_state_matches_numpy_product():
    sys = nmrsim.SpinSystem.parse(DOUBLET)
    h = nmrsim.build_rotating_hamiltonian(sys, _field())
    t = 3e-4
    psi = nmrsim.run_circuit(nmrsim.trotter_step(h, t))
    z = np.diag([1.0, -1.0])
    x = np.array([[0, 1], [1, 0]])
    y = np.array([[0, -1j], [1j, 0]])
    eye = np.eye(2)

    def expm_h(m, tt):
        w, v = np.linalg.eigh(m)
        return v @ np.diag(np.exp(-1j * w * tt)) @ v.conj().T

    # Qubit q is bit q, so qubit 0 is the right-most Kronecker factor.
    (w0, w1) = [om for _, om in h.z_terms]
    u = np.eye(4, dtype=complex)
    u = expm_h(0.5 * w0 * np.kron(eye, z), t) @ u
    u = expm_h(0.5 * w1 * np.kron(z, eye), t) @ u
    c = h.coupling_terms[0][2]
    u = expm_h(0.25 * c * (np.kron(x, x) + np.kron(y, y) + np.kron(z, z)), t) @ u
    ref = u @ np.full(4, 0.5)
    assert np.max(np.abs(psi - ref)) < 1e-12


def test_single_spin_magnetization():
    sys = nmrsim.SpinSystem.parse("N 1\nISOTOPES 1H\nSHIFT 0 2.0\n")
    h = nmrsim.build_rotating_hamiltonian(sys, _field())
    omega = h.z_terms[0][1]
    for t in (0.0, 1e-4, 7.3e-4):
        m = nmrsim.transverse_magnetization(nmrsim.trotter_step(h, t), [0])
        assert m == pytest.approx(0.5 * complex(math.cos(omega * t), math.sin(omega * t)), abs=1e-12)


def test_sampling_noise_and_mitigation():
    sys = nmrsim.SpinSystem.parse(DOUBLET)
    h = nmrsim.build_rotating_hamiltonian(sys, _field())
    c = nmrsim.measurement_circuit(h, 2e-4, "x", [0, 1])
    counts = nmrsim.sample_shots(c, 4000, 3)
    assert sum(counts.values()) == 4000
    assert counts == nmrsim.sample_shots(c, 4000, 3)
    noise = nmrsim.NoiseModel.superconducting()
    noise.p_ro = 0.05
    noisy = nmrsim.noisy_run(c, noise, 4000, 3)
    q = nmrsim.mitigate_counts(noisy, [0, 1], noise, group_size=2, tau=1e-3)
    assert sum(q.values()) == pytest.approx(1.0)
    assert all(v >= 0 for v in q.values())
    perm = nmrsim.randomized_time_ordering(10, 1)
    assert sorted(perm) == list(range(10))


def test_transpile_and_errors():
    sys = nmrsim.SpinSystem.load(ROOT / "data/systems/toy4.spin")
    h = nmrsim.build_rotating_hamiltonian(sys, _field())
    c = nmrsim.measurement_circuit(h, 1e-3, "x", [0, 1, 2, 3])
    out = nmrsim.transpile(c, target="heavy-hex", dd=True)
    assert out["logical"]["two_qubit_gates"] == 12
    assert out["final"]["two_qubit_gates"] > 0
    assert out["circuit"].width >= 4
    with pytest.raises(ValueError):
        nmrsim.transpile(c, target="ring")
    with pytest.raises(nmrsim.CapabilityError):
        nmrsim.run_circuit(c, max_width=3)


def test_spectrum_and_metrics():
    dt = 1.0 / 8000.0
    f = 2.0e-6 * 400e6
    samples = [0.5 * complex(math.cos(2 * math.pi * f * k * dt), math.sin(2 * math.pi * f * k * dt)) for k in range(1024)]
    ppm, intensity = nmrsim.to_spectrum(samples, dt, 400e6)
    peaks = nmrsim.peak_positions(ppm, intensity)
    assert peaks[0] == pytest.approx(2.0, abs=0.01)
    x = [1.0, -2.0, 3.0]
    assert nmrsim.mse(x, x) == 0.0
    assert nmrsim.cosine_similarity(x, [2 * v for v in x]) == pytest.approx(1.0, abs=1e-12)


def test_simulate_from_config():
    res = nmrsim.simulate(str(ROOT / "configs/toy4_noisy.cfg"), {"points": "8", "shots": "256"})
    assert len(res["samples"]) == 8
    assert res["observed"] == [0, 1, 2, 3]
    rows = nmrsim.depth_stats(str(ROOT / "configs/toy4_noisy.cfg"), {"points": "2"})
    assert {r["stage"] for r in rows} == {"logical", "routed", "consolidated"}
