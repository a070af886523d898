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

// Reference oracle and verifiers. Everything else in the library is tested
// against these.

#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "core.hpp"

namespace gridmatch {

/// Brute-force greedy matcher: repeatedly scans every available
/// (center, pixel) pair and matches the one with the smallest DistKey.
/// O(n^4 k); meant for small instances.
inline Assignment greedy_oracle(const Instance& inst) {
    const auto pixels = std::uint32_t(inst.grid().pixel_count());
    const auto k = std::uint32_t(inst.k());
    auto quota = compute_quotas(inst);
    std::vector<std::int32_t> owner(pixels, kUnassigned);
    for (std::uint32_t step = 0; step < pixels; ++step) {
        std::optional<DistKey> best;
        for (std::uint32_t c = 0; c < k; ++c) {
            if (quota[c] == 0) continue;
            for (std::uint32_t p = 0; p < pixels; ++p) {
                if (owner[p] != kUnassigned) continue;
                const DistKey key = inst.key(c, p);
                if (!best || key < *best) best = key;
            }
        }
        owner[best->pixel] = std::int32_t(best->center);
        --quota[best->center];
    }
    return Assignment(inst.n(), inst.k(), std::move(owner));
}

struct BlockingPair {
    std::uint32_t pixel;
    std::uint32_t center;
    friend bool operator==(const BlockingPair&, const BlockingPair&) = default;
};

/// Lists every (pixel, center) pair that prefer each other over their
/// current partners. Empty means the assignment is stable. O(n^2 k).
inline std::vector<BlockingPair> verify_stability(const Assignment& a, const Instance& inst) {
    if (a.n != inst.n() || a.k != inst.k() || !a.complete() ||
        std::int64_t(a.owner.size()) != inst.grid().pixel_count())
        throw Error("verify_stability: assignment is incomplete or does not fit the instance");

    const auto pixels = std::uint32_t(a.owner.size());
    const auto k = std::uint32_t(inst.k());
    // Worst (largest) key each center accepted.
    std::vector<std::optional<DistKey>> worst(k);
    for (std::uint32_t p = 0; p < pixels; ++p) {
        const auto c = std::uint32_t(a.owner[p]);
        const DistKey key = inst.key(c, p);
        if (!worst[c] || *worst[c] < key) worst[c] = key;
    }

    std::vector<BlockingPair> blocking;
    for (std::uint32_t p = 0; p < pixels; ++p) {
        const DistKey current = inst.key(std::uint32_t(a.owner[p]), p);
        for (std::uint32_t c = 0; c < k; ++c) {
            if (!worst[c]) continue; // empty region, cannot prefer p over anyone
            const DistKey key = inst.key(c, p);
            if (key < current && key < *worst[c]) blocking.push_back({p, c});
        }
    }
    return blocking;
}

inline bool verify_quotas(const Assignment& a, const Instance& inst) {
    if (a.k != inst.k() || a.n != inst.n() || !a.complete()) return false;
    return a.region_size == compute_quotas(inst);
}

} // namespace gridmatch
