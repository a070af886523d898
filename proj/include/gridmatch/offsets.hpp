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

// Lattice offsets sorted by distance to the origin (a circle growing from
// (0,0)). Only the octant 0 <= x <= y < n is stored; the other images are
// produced on the fly.

#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "core.hpp"

namespace gridmatch {

struct Offset {
    int x = 0;
    int y = 0;
    friend bool operator==(const Offset&, const Offset&) = default;
    friend auto operator<=>(const Offset&, const Offset&) = default;
};

/// Integer distance key of an offset from the origin (squared for L2).
inline std::int64_t offset_key(Metric m, int x, int y) {
    const std::int64_t ax = x < 0 ? -std::int64_t(x) : x;
    const std::int64_t ay = y < 0 ? -std::int64_t(y) : y;
    switch (m) {
    case Metric::L2: return ax * ax + ay * ay;
    case Metric::L1: return ax + ay;
    case Metric::Linf: return ax > ay ? ax : ay;
    }
    return 0;
}

/// Symmetric images of a triangle point in the fixed order
/// (x,y) (-x,y) (x,-y) (-x,-y) (y,x) (-y,x) (y,-x) (-y,-x), duplicates
/// (from x = 0, y = 0 or x = y) emitted once at their first position.
/// Returns the number of images written.
inline int expand_images(Offset t, std::array<Offset, 8>& out) {
    const std::array<Offset, 8> all{{{t.x, t.y},
                                     {-t.x, t.y},
                                     {t.x, -t.y},
                                     {-t.x, -t.y},
                                     {t.y, t.x},
                                     {-t.y, t.x},
                                     {t.y, -t.x},
                                     {-t.y, -t.x}}};
    int count = 0;
    for (const Offset& o : all) {
        bool seen = false;
        for (int i = 0; i < count; ++i) seen = seen || out[std::size_t(i)] == o;
        if (!seen) out[std::size_t(count++)] = o;
    }
    return count;
}

class SortedOffsets {
public:
    SortedOffsets(int n, Metric metric) : n_(n), metric_(metric) {
        if (n < 1) throw InstanceError("grid side must be >= 1");
        const std::int64_t max_key = offset_key(metric, n - 1, n - 1);

        // Counting sort of the triangle 0 <= x <= y < n. Points are fed in
        // (x, y) order and the sort is stable, so equal distances stay in
        // (x, y) order.
        std::vector<std::uint32_t> count(std::size_t(max_key) + 2, 0);
        for (int x = 0; x < n; ++x)
            for (int y = x; y < n; ++y) ++count[std::size_t(offset_key(metric, x, y)) + 1];
        for (std::size_t i = 1; i < count.size(); ++i) count[i] += count[i - 1];

        const std::size_t size = std::size_t(n) * std::size_t(n + 1) / 2;
        triangle_.resize(size);
        keys_.resize(size);
        for (int x = 0; x < n; ++x) {
            for (int y = x; y < n; ++y) {
                const std::int64_t key = offset_key(metric, x, y);
                const std::uint32_t slot = count[std::size_t(key)]++;
                triangle_[slot] = {x, y};
                keys_[slot] = key;
            }
        }
    }

    int n() const { return n_; }
    Metric metric() const { return metric_; }
    std::span<const Offset> triangle() const { return triangle_; }
    std::span<const std::int64_t> keys() const { return keys_; }
    std::size_t triangle_size() const { return triangle_.size(); }

    /// Number of offsets in the expanded stream: (2n - 1)^2.
    std::int64_t expanded_size() const { return std::int64_t(2 * n_ - 1) * (2 * n_ - 1); }

    /// Materializes the whole expanded stream. Matchers expand triangle
    /// points on the fly instead.
    std::vector<Offset> expanded() const {
        std::vector<Offset> out;
        out.reserve(std::size_t(expanded_size()));
        std::array<Offset, 8> images;
        for (const Offset& t : triangle_) {
            const int c = expand_images(t, images);
            out.insert(out.end(), images.begin(), images.begin() + c);
        }
        return out;
    }

private:
    int n_;
    Metric metric_;
    std::vector<Offset> triangle_;
    std::vector<std::int64_t> keys_;
};

inline std::vector<Offset> iterate_expanded(const SortedOffsets& offsets) { return offsets.expanded(); }

} // namespace gridmatch
