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

// Region maps as binary PPM (P6) images.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "core.hpp"
#include "io.hpp"

namespace gridmatch {

using Rgb = std::array<std::uint8_t, 3>;

/// Color of region i: hue = frac(i * golden-ratio conjugate), full
/// saturation and value.
inline Rgb palette_color(std::uint32_t i) {
    constexpr double kGoldenConjugate = 0.6180339887498949;
    const double hue = std::fmod(double(i) * kGoldenConjugate, 1.0);
    const double h6 = hue * 6.0;
    const int sector = std::min(5, int(h6));
    const double f = h6 - sector;
    double r = 0, g = 0, b = 0;
    switch (sector) {
    case 0: r = 1, g = f, b = 0; break;
    case 1: r = 1 - f, g = 1, b = 0; break;
    case 2: r = 0, g = 1, b = f; break;
    case 3: r = 0, g = 1 - f, b = 1; break;
    case 4: r = f, g = 0, b = 1; break;
    default: r = 1, g = 0, b = 1 - f; break;
    }
    auto byte = [](double v) { return std::uint8_t(std::lround(v * 255.0)); };
    return {byte(r), byte(g), byte(b)};
}

/// Writes the assignment as a P6 image, one pixel per grid pixel, row y = 0
/// first. Centers are drawn as black pixels at their rounded positions.
inline void write_ppm(std::ostream& out, const Assignment& a, std::span<const Point> centers) {
    if (!a.complete()) throw Error("cannot render an incomplete assignment");
    const int n = a.n;
    std::vector<std::uint8_t> rgb(std::size_t(n) * std::size_t(n) * 3);
    for (std::size_t p = 0; p < a.owner.size(); ++p) {
        const Rgb c = palette_color(std::uint32_t(a.owner[p]));
        std::copy(c.begin(), c.end(), rgb.begin() + std::ptrdiff_t(3 * p));
    }
    for (const Point& c : centers) {
        const int x = std::clamp(int(std::lround(c.x)), 0, n - 1);
        const int y = std::clamp(int(std::lround(c.y)), 0, n - 1);
        const std::size_t at = 3 * (std::size_t(y) * std::size_t(n) + std::size_t(x));
        rgb[at] = rgb[at + 1] = rgb[at + 2] = 0;
    }
    out << "P6\n" << n << ' ' << n << "\n255\n";
    out.write(reinterpret_cast<const char*>(rgb.data()), std::streamsize(rgb.size()));
}

inline void render(const Assignment& a, std::span<const Point> centers, const std::string& path) {
    auto out = detail::open_output(path, true);
    write_ppm(out, a, centers);
    if (!out) throw Error("failed writing '" + path + "'");
}

} // namespace gridmatch
