/*
 * Copyright 2026 The gridmatch Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Text formats.
//
// Instance:   "n k metric center_kind" then k lines "x y".
//             metric is l2, l1 or linf; center_kind is int or real.
// Assignment: "n k" then n^2 center ids, row-major, one per line.

#pragma once

#include <charconv>
#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "core.hpp"

namespace gridmatch {

/// Malformed input file; line is 1-based (0 when unknown).
class ParseError : public Error {
public:
    ParseError(const std::string& what, int line)
        : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

namespace detail {

inline std::ifstream open_input(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open '" + path + "' for reading");
    return in;
}

inline std::ofstream open_output(const std::string& path, bool binary = false) {
    std::ofstream out(path, binary ? std::ios::binary : std::ios::openmode{});
    if (!out) throw Error("cannot open '" + path + "' for writing");
    return out;
}

inline bool next_content_line(std::istream& in, std::string& line, int& lineno) {
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        if (line.find_first_not_of(" \t\r") != std::string::npos) return true;
    }
    return false;
}

inline double parse_coordinate(const std::string& token, int lineno) {
    double v = 0.0;
    const auto res = std::from_chars(token.data(), token.data() + token.size(), v);
    if (res.ec != std::errc{} || res.ptr != token.data() + token.size())
        throw ParseError("bad coordinate '" + token + "'", lineno);
    return v;
}

} // namespace detail

inline Instance read_instance(std::istream& in) {
    std::string line;
    int lineno = 0;
    if (!detail::next_content_line(in, line, lineno)) throw ParseError("empty instance file", 0);
    std::istringstream header(line);
    int n = 0, k = 0;
    std::string metric, kind;
    if (!(header >> n >> k >> metric >> kind)) throw ParseError("expected 'n k metric center_kind'", lineno);

    std::vector<Point> centers;
    try {
        const Metric m = parse_metric(metric);
        const CenterKind ck = parse_center_kind(kind);
        if (k < 1) throw ParseError("k must be positive", lineno);
        for (int i = 0; i < k; ++i) {
            if (!detail::next_content_line(in, line, lineno))
                throw ParseError("expected " + std::to_string(k) + " centers, got " + std::to_string(i), lineno);
            std::istringstream row(line);
            std::string xs, ys, extra;
            if (!(row >> xs >> ys) || (row >> extra)) throw ParseError("expected 'x y'", lineno);
            centers.push_back({detail::parse_coordinate(xs, lineno), detail::parse_coordinate(ys, lineno)});
        }
        return Instance(n, m, ck, std::move(centers));
    } catch (const ParseError&) {
        throw;
    } catch (const Error& e) {
        throw ParseError(e.what(), lineno);
    }
}

inline Instance read_instance(const std::string& path) {
    auto in = detail::open_input(path);
    return read_instance(in);
}

inline void write_instance(std::ostream& out, const Instance& inst) {
    out << inst.n() << ' ' << inst.k() << ' ' << to_string(inst.metric()) << ' ' << to_string(inst.kind()) << '\n';
    char buf[64];
    for (const Point& c : inst.centers()) {
        auto r = std::to_chars(buf, buf + sizeof buf, c.x);
        out.write(buf, r.ptr - buf) << ' ';
        r = std::to_chars(buf, buf + sizeof buf, c.y);
        out.write(buf, r.ptr - buf) << '\n';
    }
}

inline void write_assignment(std::ostream& out, const Assignment& a) {
    out << a.n << ' ' << a.k << '\n';
    for (const std::int32_t c : a.owner) out << c << '\n';
}

inline void write_assignment(const std::string& path, const Assignment& a) {
    auto out = detail::open_output(path);
    write_assignment(out, a);
}

inline Assignment read_assignment(std::istream& in) {
    std::string line;
    int lineno = 0;
    if (!detail::next_content_line(in, line, lineno)) throw ParseError("empty assignment file", 0);
    std::istringstream header(line);
    int n = 0, k = 0;
    if (!(header >> n >> k) || n < 1 || k < 1) throw ParseError("expected 'n k'", lineno);
    std::vector<std::int32_t> owner;
    owner.reserve(std::size_t(n) * std::size_t(n));
    while (detail::next_content_line(in, line, lineno)) {
        std::istringstream row(line);
        long long c = 0;
        std::string extra;
        if (!(row >> c) || (row >> extra)) throw ParseError("expected one center id", lineno);
        if (c < 0 || c >= k) throw ParseError("center id out of range", lineno);
        owner.push_back(std::int32_t(c));
    }
    if (owner.size() != std::size_t(n) * std::size_t(n))
        throw ParseError("expected " + std::to_string(std::int64_t(n) * n) + " pixels, got " +
                             std::to_string(owner.size()),
                         lineno);
    return Assignment(n, k, std::move(owner));
}

inline Assignment read_assignment(const std::string& path) {
    auto in = detail::open_input(path);
    return read_assignment(in);
}

} // namespace gridmatch
