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
 * Dense statevector storage. Qubit q is bit q of the basis index.
 */
#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace nmrsim {

using complex_t = std::complex<double>;

class Statevector {
  public:
    /// |0...0> on `width` qubits.
    explicit Statevector(int width);
    Statevector(int width, std::vector<complex_t> amplitudes);

    /// |+>^{\otimes width}
    static Statevector plus_state(int width);

    [[nodiscard]] int width() const noexcept { return width_; }
    [[nodiscard]] std::size_t size() const noexcept { return amps_.size(); }

    [[nodiscard]] std::span<complex_t> amplitudes() noexcept { return amps_; }
    [[nodiscard]] std::span<const complex_t> amplitudes() const noexcept {
        return amps_;
    }
    complex_t &operator[](std::size_t i) noexcept { return amps_[i]; }
    const complex_t &operator[](std::size_t i) const noexcept {
        return amps_[i];
    }

    [[nodiscard]] double norm() const;
    void normalize();

  private:
    int width_;
    std::vector<complex_t> amps_;
};

} // namespace nmrsim
