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
#include "nmrsim/spectrum.hpp"

#include "nmrsim/errors.hpp"
#include "text_util.hpp"

#include <fftw3.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <mutex>
#include <numbers>
#include <sstream>

namespace nmrsim {

namespace {

// FFTW planning touches global state.
std::mutex &planner_mutex() {
    static std::mutex m;
    return m;
}

void forward_dft(std::vector<complex_t> &data) {
    auto *buf = reinterpret_cast<fftw_complex *>(data.data());
    const int n = static_cast<int>(data.size());
    fftw_plan plan;
    {
        std::lock_guard lock(planner_mutex());
        plan = fftw_plan_dft_1d(n, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan);
}

void require_same_length(std::size_t a, std::size_t b) {
    if (a != b) {
        throw ArgumentError("series lengths differ (" + std::to_string(a) +
                            " vs " + std::to_string(b) + ")");
    }
}

std::vector<std::vector<double>> read_csv(const std::filesystem::path &path,
                                          std::size_t columns) {
    std::vector<std::vector<double>> rows;
    bool header = true;
    text::for_each_line(text::read_file(path), [&](int line, std::string_view content) {
        if (header) {
            header = false;
            double probe = 0.0;
            if (!text::parse_double(text::trim(text::split_char(content, ',')[0]), probe)) {
                return;
            }
        }
        const auto cells = text::split_char(content, ',');
        if (cells.size() != columns) {
            throw ParseError("expected " + std::to_string(columns) + " columns", line);
        }
        std::vector<double> row;
        for (auto c : cells) {
            row.push_back(text::require_double(text::trim(c), line, "CSV cell"));
        }
        rows.push_back(std::move(row));
    });
    return rows;
}

std::string polyline_svg(const std::vector<double> &x, const std::vector<std::vector<double>> &ys,
                         bool reverse_x, const std::string &xlabel) {
    constexpr double w = 800.0;
    constexpr double h = 400.0;
    constexpr double m = 40.0;
    const auto [xmin_it, xmax_it] = std::minmax_element(x.begin(), x.end());
    double ymin = 0.0;
    double ymax = 0.0;
    for (const auto &y : ys) {
        for (double v : y) {
            ymin = std::min(ymin, v);
            ymax = std::max(ymax, v);
        }
    }
    const double xspan = std::max(*xmax_it - *xmin_it, 1e-300);
    const double yspan = std::max(ymax - ymin, 1e-300);
    static const char *colors[] = {"#1f77b4", "#d62728"};
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
       << "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    for (std::size_t c = 0; c < ys.size(); ++c) {
        os << "<polyline fill=\"none\" stroke-width=\"1\" stroke=\"" << colors[c % 2]
           << "\" points=\"";
        for (std::size_t i = 0; i < x.size(); ++i) {
            double fx = (x[i] - *xmin_it) / xspan;
            if (reverse_x) {
                fx = 1.0 - fx;
            }
            const double px = m + fx * (w - 2 * m);
            const double py = h - m - (ys[c][i] - ymin) / yspan * (h - 2 * m);
            os << px << ',' << py << ' ';
        }
        os << "\"/>\n";
    }
    os << "<text x=\"" << w / 2 << "\" y=\"" << h - 8 << "\" text-anchor=\"middle\">" << xlabel
       << "</text>\n</svg>\n";
    return os.str();
}

} // namespace

void FidSeries::validate() const {
    if (!(dwell_time > 0.0) || !std::isfinite(dwell_time)) {
        throw ArgumentError("dwell time must be positive");
    }
    if (samples.empty()) {
        throw ArgumentError("FID has no samples");
    }
}

FidSeries assemble_fid(const std::vector<double> &re,
                       const std::vector<double> &im, double dwell_time,
                       std::string label) {
    require_same_length(re.size(), im.size());
    FidSeries fid{dwell_time, {}, std::move(label)};
    fid.samples.reserve(re.size());
    for (std::size_t k = 0; k < re.size(); ++k) {
        fid.samples.emplace_back(re[k], im[k]);
    }
    fid.validate();
    return fid;
}

std::size_t padded_length(std::size_t n_samples, int pad_factor) {
    if (pad_factor < 1) {
        throw ArgumentError("pad factor must be at least 1");
    }
    return std::bit_ceil(n_samples) * static_cast<std::size_t>(pad_factor);
}

Spectrum to_spectrum(const FidSeries &fid, const SpectrumOptions &opt) {
    fid.validate();
    if (!(opt.reference_hz > 0.0)) {
        throw ArgumentError("reference frequency must be positive");
    }
    const std::size_t len = padded_length(fid.samples.size(), opt.pad_factor);
    std::vector<complex_t> buf(len, complex_t{0.0, 0.0});
    for (std::size_t k = 0; k < fid.samples.size(); ++k) {
        double w = 1.0;
        if (opt.apodization_hz) {
            w = std::exp(-std::numbers::pi * *opt.apodization_hz *
                         static_cast<double>(k) * fid.dwell_time);
        }
        buf[k] = w * fid.samples[k];
    }
    forward_dft(buf);

    const double df = 1.0 / (static_cast<double>(len) * fid.dwell_time);
    const complex_t phase = std::polar(1.0, opt.phase0);
    Spectrum s;
    s.reference_hz = opt.reference_hz;
    s.ppm.reserve(len);
    // Descending frequency: bin len/2 (the +Nyquist edge) down to len/2 + 1.
    for (std::size_t i = 0; i < len; ++i) {
        const std::size_t k = (len / 2 + len - i) % len;
        const auto signed_k = k <= len / 2 ? static_cast<double>(k)
                                           : static_cast<double>(k) - static_cast<double>(len);
        const double f = signed_k * df;
        s.hz.push_back(f);
        s.ppm.push_back(f / (opt.reference_hz * 1e-6) + opt.carrier_ppm);
        s.spectrum.push_back(buf[k]);
        s.intensity.push_back((phase * buf[k]).real());
    }
    return s;
}

double mse(const std::vector<double> &a, const std::vector<double> &b) {
    require_same_length(a.size(), b.size());
    if (a.empty()) {
        throw ArgumentError("mse of empty series");
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        acc += (a[i] - b[i]) * (a[i] - b[i]);
    }
    return acc / static_cast<double>(a.size());
}

double mse(const std::vector<complex_t> &a, const std::vector<complex_t> &b) {
    require_same_length(a.size(), b.size());
    if (a.empty()) {
        throw ArgumentError("mse of empty series");
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        acc += std::norm(a[i] - b[i]);
    }
    return acc / (2.0 * static_cast<double>(a.size()));
}

double cosine_similarity(const std::vector<double> &a,
                         const std::vector<double> &b) {
    require_same_length(a.size(), b.size());
    double ab = 0.0;
    double aa = 0.0;
    double bb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        ab += a[i] * b[i];
        aa += a[i] * a[i];
        bb += b[i] * b[i];
    }
    if (aa == 0.0 || bb == 0.0) {
        throw ArgumentError("cosine similarity of a zero vector");
    }
    return ab / (std::sqrt(aa) * std::sqrt(bb));
}

std::vector<double> peak_positions(const Spectrum &s, double threshold) {
    const auto &y = s.intensity;
    if (y.size() < 3) {
        return {};
    }
    const double top = *std::max_element(y.begin(), y.end());
    if (!(top > 0.0)) {
        return {};
    }
    std::vector<std::size_t> idx;
    for (std::size_t i = 1; i + 1 < y.size(); ++i) {
        if (y[i] > y[i - 1] && y[i] >= y[i + 1] && y[i] >= threshold * top) {
            idx.push_back(i);
        }
    }
    std::stable_sort(idx.begin(), idx.end(),
                     [&](std::size_t a, std::size_t b) { return y[a] > y[b]; });
    std::vector<double> out;
    for (auto i : idx) {
        out.push_back(s.ppm[i]);
    }
    return out;
}

void write_fid_csv(const FidSeries &fid, const std::filesystem::path &path) {
    std::string out = "t_seconds,re,im\n";
    for (std::size_t k = 0; k < fid.samples.size(); ++k) {
        out += text::fmt_double(static_cast<double>(k) * fid.dwell_time) + ',' +
               text::fmt_double(fid.samples[k].real()) + ',' +
               text::fmt_double(fid.samples[k].imag()) + '\n';
    }
    text::write_file(path, out);
}

FidSeries read_fid_csv(const std::filesystem::path &path) {
    const auto rows = read_csv(path, 3);
    if (rows.size() < 2) {
        throw ValidationError("FID CSV needs at least two samples to fix the dwell time");
    }
    FidSeries fid;
    fid.dwell_time = rows[1][0] - rows[0][0];
    fid.label = path.stem().string();
    for (const auto &r : rows) {
        fid.samples.emplace_back(r[1], r[2]);
    }
    fid.validate();
    return fid;
}

void write_spectrum_csv(const Spectrum &s, const std::filesystem::path &path) {
    std::string out = "ppm,intensity\n";
    for (std::size_t i = 0; i < s.ppm.size(); ++i) {
        out += text::fmt_double(s.ppm[i]) + ',' + text::fmt_double(s.intensity[i]) + '\n';
    }
    text::write_file(path, out);
}

Spectrum read_spectrum_csv(const std::filesystem::path &path) {
    Spectrum s;
    for (const auto &r : read_csv(path, 2)) {
        s.ppm.push_back(r[0]);
        s.intensity.push_back(r[1]);
    }
    return s;
}

std::string fid_svg(const FidSeries &fid) {
    std::vector<double> t;
    std::vector<double> re;
    std::vector<double> im;
    for (std::size_t k = 0; k < fid.samples.size(); ++k) {
        t.push_back(static_cast<double>(k) * fid.dwell_time);
        re.push_back(fid.samples[k].real());
        im.push_back(fid.samples[k].imag());
    }
    return polyline_svg(t, {re, im}, false, "t (s)");
}

std::string spectrum_svg(const Spectrum &s) {
    return polyline_svg(s.ppm, {s.intensity}, true, "ppm");
}

} // namespace nmrsim
