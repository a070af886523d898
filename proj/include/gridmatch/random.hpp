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

#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "core.hpp"

namespace gridmatch {

/// Centers drawn with a seeded 64-bit Mersenne Twister. Integer centers are
/// uniform over pixels, real centers uniform over [0, n)^2. The raw engine
/// output is mapped by hand so results do not depend on the standard
/// library's distribution implementations.
inline std::vector<Point> random_centers(int n, int k, CenterKind kind, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<Point> centers;
    centers.reserve(std::size_t(k));
    auto unit = [&] { return double(rng() >> 11) * 0x1.0p-53; };
    for (int i = 0; i < k; ++i) {
        if (kind == CenterKind::Integer) {
            const double x = double(rng() % std::uint64_t(n));
            const double y = double(rng() % std::uint64_t(n));
            centers.push_back({x, y});
        } else {
            const double x = unit() * n;
            const double y = unit() * n;
            centers.push_back({x < n ? x : std::nextafter(double(n), 0.0), y < n ? y : std::nextafter(double(n), 0.0)});
        }
    }
    return centers;
}

inline Instance random_instance(int n, int k, Metric metric, CenterKind kind, std::uint64_t seed) {
    return Instance(n, metric, kind, random_centers(n, k, kind, seed));
}

} // namespace gridmatch
