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
"""Python front end for the nmrsim C++ core."""

from ._nmrsim import (
    CapabilityError,
    Circuit,
    FieldConfig,
    MitigationError,
    NmrsimError,
    NoiseModel,
    PauliTermList,
    SpinSystem,
    __version__,
    analytic_confusion,
    build_rotating_hamiltonian,
    cosine_similarity,
    depth_stats,
    measurement_circuit,
    mitigate_counts,
    mse,
    noisy_run,
    offset_frequencies,
    peak_positions,
    randomized_time_ordering,
    run_circuit,
    sample_shots,
    simulate,
    to_spectrum,
    transpile,
    transverse_magnetization,
    trotter_step,
)

__all__ = [name for name in dir() if not name.startswith("_")]
