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
// Small helpers for the line-oriented text formats (not installed).
#pragma once

#include "nmrsim/errors.hpp"

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

namespace nmrsim::text {

inline std::string_view strip_comment(std::string_view line) {
    if (auto pos = line.find('#'); pos != std::string_view::npos) {
        line = line.substr(0, pos);
    }
    return line;
}

inline std::string_view trim(std::string_view s) {
    const auto ws = " \t\r\n";
    const auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

inline std::vector<std::string_view> split_ws(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) {
            ++i;
        }
        std::size_t j = i;
        while (j < s.size() && s[j] != ' ' && s[j] != '\t' && s[j] != '\r') {
            ++j;
        }
        if (j > i) {
            out.push_back(s.substr(i, j - i));
        }
        i = j;
    }
    return out;
}

inline std::vector<std::string_view> split_char(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        if (pos == std::string_view::npos) {
            out.push_back(s.substr(start));
            break;
        }
        out.push_back(s.substr(start, pos - start));
        start = pos + 1;
    }
    return out;
}

inline bool parse_double(std::string_view tok, double &out) {
    if (!tok.empty() && tok.front() == '+') {
        tok.remove_prefix(1);
    }
    const auto *end = tok.data() + tok.size();
    auto [ptr, ec] = std::from_chars(tok.data(), end, out);
    return ec == std::errc{} && ptr == end;
}

inline bool parse_int(std::string_view tok, long long &out) {
    const auto *end = tok.data() + tok.size();
    auto [ptr, ec] = std::from_chars(tok.data(), end, out);
    return ec == std::errc{} && ptr == end;
}

inline double require_double(std::string_view tok, int line,
                             std::string_view what) {
    double v = 0.0;
    if (!parse_double(tok, v)) {
        throw ParseError("expected a number for " + std::string(what) +
                             ", got '" + std::string(tok) + "'",
                         line);
    }
    return v;
}

inline long long require_int(std::string_view tok, int line,
                             std::string_view what) {
    long long v = 0;
    if (!parse_int(tok, v)) {
        throw ParseError("expected an integer for " + std::string(what) +
                             ", got '" + std::string(tok) + "'",
                         line);
    }
    return v;
}

inline std::string read_file(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open '" + path.string() + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_file(const std::filesystem::path &path,
                       std::string_view contents) {
    if (path.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot write '" + path.string() + "'");
    }
    out << contents;
    if (!out) {
        throw IoError("write failed for '" + path.string() + "'");
    }
}

/// Shortest round-trip representation, stable across runs.
inline std::string fmt_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc{}) {
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        return buf;
    }
    return std::string(buf, ptr);
}

/// Iterate (line_number, stripped_content) over non-empty lines.
template <class F> void for_each_line(std::string_view src, F &&fn) {
    int lineno = 0;
    std::size_t start = 0;
    while (start <= src.size()) {
        auto end = src.find('\n', start);
        if (end == std::string_view::npos) {
            end = src.size();
        }
        ++lineno;
        auto content = trim(strip_comment(src.substr(start, end - start)));
        if (!content.empty()) {
            fn(lineno, content);
        }
        if (end == src.size()) {
            break;
        }
        start = end + 1;
    }
}

} // namespace nmrsim::text
