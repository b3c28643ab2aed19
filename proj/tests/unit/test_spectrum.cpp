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
#include "nmrsim/errors.hpp"
#include "nmrsim/spectrum.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <numbers>

using namespace nmrsim;

namespace {

FidSeries tone(double f_hz, double dt, std::size_t n, double amp = 0.5) {
    FidSeries fid;
    fid.dwell_time = dt;
    for (std::size_t k = 0; k < n; ++k) {
        fid.samples.push_back(std::polar(amp, 2.0 * std::numbers::pi * f_hz * dt * static_cast<double>(k)));
    }
    return fid;
}

} // namespace

TEST_CASE("padded length rounds up to a power of two") {
    CHECK(padded_length(1000, 1) == 1024);
    CHECK(padded_length(1024, 2) == 2048);
    CHECK(padded_length(3, 4) == 16);
    CHECK_THROWS_AS(padded_length(16, 0), ArgumentError);
}

TEST_CASE("transform agrees with a naive DFT on the NMR axis") {
    FidSeries fid = tone(130.0, 1e-3, 50);
    fid.samples[7] += std::complex<double>(0.3, -0.2);
    SpectrumOptions opt;
    opt.pad_factor = 1;
    opt.reference_hz = 100e6;
    const auto s = to_spectrum(fid, opt);
    std::vector<oracle::cd> buf(64, 0.0);
    std::copy(fid.samples.begin(), fid.samples.end(), buf.begin());
    const auto ref = oracle::dft(buf);
    REQUIRE(s.spectrum.size() == 64);
    for (std::size_t i = 0; i < 64; ++i) {
        const std::size_t k = (32 + 64 - i) % 64;
        CHECK(std::abs(s.spectrum[i] - ref[k]) < 1e-10);
    }
    // Descending frequency from +Nyquist.
    CHECK(s.hz.front() == doctest::Approx(500.0));
    CHECK(s.hz[1] < s.hz[0]);
    CHECK(s.hz.back() == doctest::Approx(-500.0 + 1000.0 / 64));
}

TEST_CASE("Parseval holds for the unnormalized transform") {
    const auto fid = tone(-77.0, 2e-3, 40);
    SpectrumOptions opt;
    opt.pad_factor = 2;
    opt.reference_hz = 1e8;
    const auto s = to_spectrum(fid, opt);
    double tt = 0, ff = 0;
    for (auto v : fid.samples) {
        tt += std::norm(v);
    }
    for (auto v : s.spectrum) {
        ff += std::norm(v);
    }
    CHECK(ff == doctest::Approx(static_cast<double>(s.spectrum.size()) * tt));
}

TEST_CASE("a tone lands at its chemical shift") {
    const double ref = 400e6;
    const double ppm = 3.25;
    const auto fid = tone(ppm * 1e-6 * ref, 1.0 / 8000.0, 4096);
    SpectrumOptions opt;
    opt.pad_factor = 2;
    opt.reference_hz = ref;
    opt.apodization_hz = 1.0;
    const auto s = to_spectrum(fid, opt);
    const auto peaks = peak_positions(s, 0.1);
    REQUIRE_FALSE(peaks.empty());
    CHECK(peaks.front() == doctest::Approx(ppm).epsilon(1e-3));

    opt.carrier_ppm = 10.0;
    CHECK(peak_positions(to_spectrum(fid, opt), 0.1).front() == doctest::Approx(ppm + 10.0).epsilon(1e-3));
    opt.carrier_ppm = 0.0;
    opt.phase0 = std::numbers::pi;
    const auto flipped = to_spectrum(fid, opt);
    const auto imax = std::max_element(s.intensity.begin(), s.intensity.end()) - s.intensity.begin();
    CHECK(flipped.intensity[imax] == doctest::Approx(-s.intensity[imax]));
}

TEST_CASE("metric identities") {
    const std::vector<double> x{0.3, -1.2, 4.0, 0.0, 2.5};
    CHECK(mse(x, x) == 0.0);
    CHECK(cosine_similarity(x, x) == doctest::Approx(1.0).epsilon(1e-15));
    std::vector<double> y = x;
    for (auto &v : y) {
        v *= 3.7;
    }
    CHECK(std::abs(cosine_similarity(x, y) - 1.0) < 1e-12);
    CHECK(mse(x, std::vector<double>{0.3, -1.2, 4.0, 0.0, 3.5}) == doctest::Approx(0.2));
    CHECK_THROWS_AS(mse(x, std::vector<double>{1.0}), ArgumentError);
    CHECK_THROWS_AS(cosine_similarity(x, std::vector<double>(5, 0.0)), ArgumentError);
    const std::vector<std::complex<double>> a{{1, 0}, {0, 1}};
    const std::vector<std::complex<double>> b{{0, 0}, {0, 0}};
    CHECK(mse(a, b) == doctest::Approx(0.5));
}

TEST_CASE("CSV round trips") {
    const auto dir = std::filesystem::temp_directory_path() / "nmrsim_unit_csv";
    std::filesystem::create_directories(dir);
    auto fid = tone(50.0, 1e-3, 16);
    write_fid_csv(fid, dir / "fid.csv");
    const auto back = read_fid_csv(dir / "fid.csv");
    CHECK(back.dwell_time == doctest::Approx(1e-3));
    REQUIRE(back.samples.size() == 16);
    CHECK(std::abs(back.samples[9] - fid.samples[9]) < 1e-12);

    SpectrumOptions opt;
    opt.reference_hz = 1e8;
    const auto s = to_spectrum(fid, opt);
    write_spectrum_csv(s, dir / "spec.csv");
    const auto sb = read_spectrum_csv(dir / "spec.csv");
    CHECK(sb.ppm.size() == s.ppm.size());
    CHECK(sb.intensity[3] == doctest::Approx(s.intensity[3]));
    CHECK_THROWS_AS(read_fid_csv(dir / "missing.csv"), Error);
    CHECK(spectrum_svg(s).find("<svg") != std::string::npos);
    CHECK(fid_svg(fid).find("<svg") != std::string::npos);
}
