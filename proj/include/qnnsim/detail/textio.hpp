// Copyright 2026 The qnnsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/**
 * @file
 * Shared helpers for the textual file formats: number printing at full
 * precision, tokenizing, and `#` comment handling.
 */

#pragma once

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace qnnsim::detail {

/// Formats a real with 17 significant digits, enough to round-trip a double.
inline std::string format_real(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline double parse_real(const std::string& tok, const char* what, std::size_t line_no) {
    char* end = nullptr;
    double v = std::strtod(tok.c_str(), &end);
    if (end == tok.c_str() || *end != '\0') {
        throw std::runtime_error(std::string("line ") + std::to_string(line_no) + ": bad " + what + " '" +
                                 tok + "'");
    }
    return v;
}

inline long long parse_int(const std::string& tok, const char* what, std::size_t line_no) {
    char* end = nullptr;
    long long v = std::strtoll(tok.c_str(), &end, 10);
    if (end == tok.c_str() || *end != '\0') {
        throw std::runtime_error(std::string("line ") + std::to_string(line_no) + ": bad " + what + " '" +
                                 tok + "'");
    }
    return v;
}

inline std::vector<std::string> split_ws(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream in(line);
    std::string tok;
    while (in >> tok) {
        out.push_back(tok);
    }
    return out;
}

inline bool is_comment_or_blank(const std::string& line) {
    for (char c : line) {
        if (c == '#') {
            return true;
        }
        if (!std::isspace(static_cast<unsigned char>(c))) {
            return false;
        }
    }
    return true;
}

/// Reads lines until a non-comment, non-blank line is found. Returns false at
/// end of input. `line_no` counts every consumed line for error messages.
inline bool next_content_line(std::istream& in, std::string& line, std::size_t& line_no) {
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (!is_comment_or_blank(line)) {
            return true;
        }
    }
    return false;
}

}  // namespace qnnsim::detail
