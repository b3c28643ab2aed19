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
#include "nmrsim/config.hpp"

#include "nmrsim/errors.hpp"
#include "text_util.hpp"

#include <cmath>
#include <cstdio>

namespace nmrsim {

namespace {

std::string key_error(std::string_view key, std::string_view value,
                      std::string_view expected) {
    return "config key '" + std::string(key) + "': expected " +
           std::string(expected) + ", got '" + std::string(value) + "'";
}

double as_double(std::string_view key, std::string_view v) {
    double d = 0.0;
    if (!text::parse_double(v, d) || !std::isfinite(d)) {
        throw ArgumentError(key_error(key, v, "a number"));
    }
    return d;
}

std::uint64_t as_count(std::string_view key, std::string_view v) {
    long long n = 0;
    if (!text::parse_int(v, n) || n < 0) {
        throw ArgumentError(key_error(key, v, "a nonnegative integer"));
    }
    return static_cast<std::uint64_t>(n);
}

bool as_bool(std::string_view key, std::string_view v) {
    if (v == "on" || v == "true" || v == "1" || v == "yes") {
        return true;
    }
    if (v == "off" || v == "false" || v == "0" || v == "no") {
        return false;
    }
    throw ArgumentError(key_error(key, v, "on or off"));
}

template <class T>
std::vector<T> as_list(std::string_view key, std::string_view v) {
    std::vector<T> out;
    if (text::trim(v).empty()) {
        return out;
    }
    for (auto tok : text::split_char(v, ',')) {
        out.push_back(static_cast<T>(as_count(key, text::trim(tok))));
    }
    return out;
}

template <class T> std::string join(const std::vector<T> &xs) {
    std::string s;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        s += (i ? "," : "") + std::to_string(xs[i]);
    }
    return s;
}

const char *order_name(TimeOrder o) {
    switch (o) {
    case TimeOrder::Sequential:
        return "sequential";
    case TimeOrder::Randomized:
        return "randomized";
    default:
        return "auto";
    }
}

} // namespace

void ExperimentConfig::validate() const {
    if (system.empty()) {
        throw ArgumentError("config needs a 'system' file");
    }
    if (points < 1) {
        throw ArgumentError("points must be at least 1");
    }
    if (!proton_mhz && !b0_tesla) {
        throw ArgumentError("config needs a field: proton_mhz or b0_tesla");
    }
    if (proton_mhz && b0_tesla) {
        throw ArgumentError("set only one of proton_mhz and b0_tesla");
    }
    if ((proton_mhz && !(*proton_mhz > 0.0)) || (b0_tesla && !(*b0_tesla > 0.0))) {
        throw ArgumentError("field strength must be positive");
    }
    if (spectral_width_hz < 0.0) {
        throw ArgumentError("spectral_width_hz must be nonnegative");
    }
    if (shots && *shots == 0) {
        throw ArgumentError("shots must be positive");
    }
    if (mitigation && !shots) {
        throw ArgumentError("mitigation requires sampled mode (shots = <n>)");
    }
    if (noise != "none" && !shots) {
        throw ArgumentError("a noise model requires sampled mode (shots = <n>)");
    }
    if (dd && target == TargetKind::Logical) {
        throw ArgumentError("dynamical decoupling needs a hardware target");
    }
    if (group_size < 1 || group_size > 4) {
        throw ArgumentError("group_size must be between 1 and 4");
    }
    if (rescale_tau < 0.0) {
        throw ArgumentError("rescale_tau must be nonnegative");
    }
    if (threads < 1 || max_width < 1 || pad < 1) {
        throw ArgumentError("threads, max_width and pad must be at least 1");
    }
    if (sweep_points < 1 || sweep_repeats < 1 || sweep_epsilon < 0.0) {
        throw ArgumentError("invalid shot-sweep settings");
    }
    for (std::size_t i = 0; i < sweep_grid.size(); ++i) {
        if (sweep_grid[i] == 0 || (i > 0 && sweep_grid[i] <= sweep_grid[i - 1])) {
            throw ArgumentError("sweep_grid must be positive and strictly ascending");
        }
    }
}

std::filesystem::path ExperimentConfig::resolve(const std::filesystem::path &p) const {
    if (p.empty() || p.is_absolute() || workspace.empty()) {
        return p;
    }
    return workspace / p;
}

bool ExperimentConfig::randomized() const {
    if (order == TimeOrder::Auto) {
        return noise != "none" && shots.has_value();
    }
    return order == TimeOrder::Randomized;
}

void apply_setting(ExperimentConfig &cfg, std::string_view key,
                   std::string_view value) {
    const auto v = text::trim(value);
    if (key == "system") {
        cfg.system = std::string(v);
    } else if (key == "proton_mhz") {
        cfg.proton_mhz = as_double(key, v);
        cfg.b0_tesla.reset();
    } else if (key == "b0_tesla") {
        cfg.b0_tesla = as_double(key, v);
        cfg.proton_mhz.reset();
    } else if (key == "observe") {
        cfg.observe = std::string(v);
    } else if (key == "subsystem") {
        cfg.subsystem = as_list<int>(key, v);
    } else if (key == "points") {
        cfg.points = as_count(key, v);
    } else if (key == "spectral_width_hz") {
        cfg.spectral_width_hz = as_double(key, v);
    } else if (key == "shots") {
        if (v == "exact") {
            cfg.shots.reset();
        } else {
            cfg.shots = as_count(key, v);
        }
    } else if (key == "noise") {
        cfg.noise = v.empty() ? "none" : std::string(v);
    } else if (key == "target") {
        cfg.target = parse_target(std::string(v));
    } else if (key == "map") {
        cfg.map = std::string(v);
    } else if (key == "basis") {
        if (v == "cz") {
            cfg.basis = NativeBasis::CZ;
        } else if (v == "ms") {
            cfg.basis = NativeBasis::MS;
        } else {
            throw ArgumentError(key_error(key, v, "cz or ms"));
        }
    } else if (key == "mitigation") {
        cfg.mitigation = as_bool(key, v);
    } else if (key == "group_size") {
        cfg.group_size = as_count(key, v);
    } else if (key == "rescale_tau") {
        cfg.rescale_tau = as_double(key, v);
    } else if (key == "calibration_shots") {
        cfg.calibration_shots = as_count(key, v);
    } else if (key == "dd") {
        cfg.dd = as_bool(key, v);
    } else if (key == "order") {
        if (v == "auto") {
            cfg.order = TimeOrder::Auto;
        } else if (v == "sequential") {
            cfg.order = TimeOrder::Sequential;
        } else if (v == "randomized") {
            cfg.order = TimeOrder::Randomized;
        } else {
            throw ArgumentError(key_error(key, v, "auto, sequential or randomized"));
        }
    } else if (key == "seed") {
        cfg.seed = as_count(key, v);
    } else if (key == "threads") {
        cfg.threads = static_cast<int>(as_count(key, v));
    } else if (key == "max_width") {
        cfg.max_width = static_cast<int>(as_count(key, v));
    } else if (key == "pad") {
        cfg.pad = static_cast<int>(as_count(key, v));
    } else if (key == "apodization_hz") {
        if (v.empty() || v == "none") {
            cfg.apodization_hz.reset();
        } else {
            cfg.apodization_hz = as_double(key, v);
        }
    } else if (key == "phase0") {
        cfg.phase0 = as_double(key, v);
    } else if (key == "carrier_ppm") {
        cfg.carrier_ppm = as_double(key, v);
    } else if (key == "sweep_points") {
        cfg.sweep_points = as_count(key, v);
    } else if (key == "sweep_repeats") {
        cfg.sweep_repeats = as_count(key, v);
    } else if (key == "sweep_epsilon") {
        cfg.sweep_epsilon = as_double(key, v);
    } else if (key == "sweep_grid") {
        cfg.sweep_grid = as_list<std::uint64_t>(key, v);
    } else if (key == "output") {
        cfg.output = std::string(v);
    } else if (key == "workspace") {
        cfg.workspace = std::string(v);
    } else {
        throw ArgumentError("unknown config key '" + std::string(key) + "'");
    }
}

ExperimentConfig parse_config(std::string_view src) {
    ExperimentConfig cfg;
    text::for_each_line(src, [&](int line, std::string_view content) {
        const auto eq = content.find('=');
        if (eq == std::string_view::npos) {
            throw ArgumentError("config line " + std::to_string(line) +
                                ": expected 'key = value'");
        }
        try {
            apply_setting(cfg, text::trim(content.substr(0, eq)), content.substr(eq + 1));
        } catch (const ArgumentError &e) {
            throw ArgumentError("config line " + std::to_string(line) + ": " + e.what());
        }
    });
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path &path) {
    ExperimentConfig cfg = parse_config(text::read_file(path));
    const auto dir = std::filesystem::absolute(path).parent_path();
    if (cfg.workspace.empty()) {
        cfg.workspace = dir;
    } else if (cfg.workspace.is_relative()) {
        cfg.workspace = dir / cfg.workspace;
    }
    return cfg;
}

std::string format_config(const ExperimentConfig &cfg) {
    std::string s;
    auto put = [&](const char *k, const std::string &v) { s += std::string(k) + " = " + v + "\n"; };
    put("system", cfg.system.generic_string());
    if (cfg.proton_mhz) {
        put("proton_mhz", text::fmt_double(*cfg.proton_mhz));
    }
    if (cfg.b0_tesla) {
        put("b0_tesla", text::fmt_double(*cfg.b0_tesla));
    }
    put("observe", cfg.observe);
    put("subsystem", join(cfg.subsystem));
    put("points", std::to_string(cfg.points));
    put("spectral_width_hz", text::fmt_double(cfg.spectral_width_hz));
    put("shots", cfg.shots ? std::to_string(*cfg.shots) : "exact");
    put("noise", cfg.noise);
    put("target", target_name(cfg.target));
    put("map", cfg.map.generic_string());
    put("basis", cfg.basis == NativeBasis::CZ ? "cz" : "ms");
    put("mitigation", cfg.mitigation ? "on" : "off");
    put("group_size", std::to_string(cfg.group_size));
    put("rescale_tau", text::fmt_double(cfg.rescale_tau));
    put("calibration_shots", std::to_string(cfg.calibration_shots));
    put("dd", cfg.dd ? "on" : "off");
    put("order", order_name(cfg.order));
    put("seed", std::to_string(cfg.seed));
    put("threads", std::to_string(cfg.threads));
    put("max_width", std::to_string(cfg.max_width));
    put("pad", std::to_string(cfg.pad));
    put("apodization_hz", cfg.apodization_hz ? text::fmt_double(*cfg.apodization_hz) : "none");
    put("phase0", text::fmt_double(cfg.phase0));
    put("carrier_ppm", text::fmt_double(cfg.carrier_ppm));
    put("sweep_points", std::to_string(cfg.sweep_points));
    put("sweep_repeats", std::to_string(cfg.sweep_repeats));
    put("sweep_epsilon", text::fmt_double(cfg.sweep_epsilon));
    put("sweep_grid", join(cfg.sweep_grid));
    put("output", cfg.output.generic_string());
    put("workspace", cfg.workspace.generic_string());
    return s;
}

std::string config_hash(const ExperimentConfig &cfg) {
    // threads and output location do not change results
    ExperimentConfig c = cfg;
    c.threads = 1;
    c.output.clear();
    c.workspace.clear();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : format_config(c)) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

} // namespace nmrsim
