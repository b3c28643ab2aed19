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
 * FID assembly, FFT to a ppm-axis spectrum, and the comparison metrics used
 * to score simulated signals against a reference.
 */
#pragma once

#include "nmrsim/statevector_type.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace nmrsim {

struct FidSeries {
    double dwell_time = 0.0; ///< seconds
    std::vector<complex_t> samples; ///< Re = <M_X>, Im = <M_Y>
    std::string label;

    void validate() const;
};

struct SpectrumOptions {
    int pad_factor = 1;
    std::optional<double> apodization_hz; ///< line broadening lb
    double phase0 = 0.0; ///< zero-order phase, radians
    double reference_hz = 0.0; ///< Larmor frequency of the observed nucleus
    double carrier_ppm = 0.0;
};

/// Axes run from high to low ppm. `spectrum` holds the unphased,
/// unnormalized DFT in the same order, so sum |spectrum|^2 equals
/// length * sum |padded FID|^2.
struct Spectrum {
    std::vector<double> ppm;
    std::vector<double> hz;
    std::vector<double> intensity;
    std::vector<complex_t> spectrum;
    double reference_hz = 0.0;
};

FidSeries assemble_fid(const std::vector<double> &re,
                       const std::vector<double> &im, double dwell_time,
                       std::string label = {});

std::size_t padded_length(std::size_t n_samples, int pad_factor);

Spectrum to_spectrum(const FidSeries &fid, const SpectrumOptions &opt);

double mse(const std::vector<double> &a, const std::vector<double> &b);
/// Both the real and imaginary channels enter the mean.
double mse(const std::vector<complex_t> &a, const std::vector<complex_t> &b);
double cosine_similarity(const std::vector<double> &a,
                         const std::vector<double> &b);

/// Local maxima at or above threshold * global maximum, strongest first.
std::vector<double> peak_positions(const Spectrum &s, double threshold);

void write_fid_csv(const FidSeries &fid, const std::filesystem::path &path);
FidSeries read_fid_csv(const std::filesystem::path &path);
void write_spectrum_csv(const Spectrum &s, const std::filesystem::path &path);
Spectrum read_spectrum_csv(const std::filesystem::path &path);

std::string fid_svg(const FidSeries &fid);
std::string spectrum_svg(const Spectrum &s);

} // namespace nmrsim
