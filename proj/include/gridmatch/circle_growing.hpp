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

// Circle-growing matchers: every center grows a circle at the same rate by
// walking the shared sorted offset list; pixels reached while still
// available are matched to the center that reached them first.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

#include "core.hpp"
#include "match_state.hpp"
#include "offsets.hpp"

namespace gridmatch {

struct NeverStop {
    bool operator()(const MatchState&) const { return false; }
};

struct GrowOptions {
    /// Real centers only: after each chunk, rescan its offsets and throw if
    /// any of them still generates an available pair.
    bool check_chunk_invariant = false;
};

namespace detail {

inline void check_offsets(const Instance& inst, const SortedOffsets& offsets) {
    if (offsets.n() != inst.n() || offsets.metric() != inst.metric())
        throw InstanceError("offset list was built for a different grid side or metric");
}

inline void keep_available(std::vector<std::uint32_t>& active, const MatchState& state) {
    std::erase_if(active, [&](std::uint32_t c) { return !state.center_available(c); });
}

} // namespace detail

/// Integer centers. Offsets of equal distance (a shell) are processed
/// together: within a shell every pair has the same distance, so centers
/// take their candidates in id order and, per center, in pixel-index order.
/// That is exactly the DistKey order, which makes the result identical to
/// greedy_oracle. stop_rule is consulted before each shell.
template <class StopRule = NeverStop>
void grow_integer_centers(const Instance& inst, const SortedOffsets& offsets, MatchState& state,
                          StopRule&& stop_rule = {}) {
    if (inst.kind() != CenterKind::Integer) throw InstanceError("integer circle growing needs integer centers");
    detail::check_offsets(inst, offsets);

    const GridSpec& grid = inst.grid();
    const auto triangle = offsets.triangle();
    const auto keys = offsets.keys();
    const std::size_t total = triangle.size();

    std::vector<std::uint32_t> active = state.available_center_list();
    std::vector<int> cx(std::size_t(inst.k())), cy(std::size_t(inst.k()));
    for (int c = 0; c < inst.k(); ++c) {
        cx[std::size_t(c)] = int(inst.centers()[std::size_t(c)].x);
        cy[std::size_t(c)] = int(inst.centers()[std::size_t(c)].y);
    }

    std::vector<Offset> shell;
    std::vector<std::uint32_t> candidates;
    std::array<Offset, 8> images;
    auto tri = std::size_t(state.cursor);
    while (!state.complete() && tri < total) {
        if (stop_rule(std::as_const(state))) break;

        shell.clear();
        std::size_t end = tri;
        for (; end < total && keys[end] == keys[tri]; ++end) {
            const int count = expand_images(triangle[end], images);
            shell.insert(shell.end(), images.begin(), images.begin() + count);
        }

        bool someone_filled = false;
        for (const std::uint32_t c : active) {
            candidates.clear();
            const int x0 = cx[c], y0 = cy[c];
            for (const Offset& o : shell) {
                const int sx = x0 + o.x, sy = y0 + o.y;
                if (grid.contains(sx, sy)) {
                    const std::uint32_t s = grid.index(sx, sy);
                    if (state.site_available(s)) candidates.push_back(s);
                }
            }
            state.counters.pairs_generated += shell.size();
            if (candidates.empty()) continue;
            std::sort(candidates.begin(), candidates.end());
            const auto quota = std::size_t(state.remaining_quota(c));
            if (candidates.size() > quota) candidates.resize(quota);
            for (const std::uint32_t s : candidates) someone_filled |= state.match(c, s);
        }
        if (someone_filled) detail::keep_available(active, state);
        tri = end;
    }
    state.cursor = std::int64_t(tri);
}

/// Per-center lattice anchor and the largest center-to-anchor distance.
struct RealCenterPrep {
    std::vector<int> anchor_x;
    std::vector<int> anchor_y;
    double delta = 0.0;
};

/// Anchors are the nearest lattice point, clamped into the grid so every
/// center-to-pixel offset stays inside the offset list.
inline RealCenterPrep prepare_real_centers(const Instance& inst) {
    RealCenterPrep prep;
    const int hi = inst.n() - 1;
    for (const Point& c : inst.centers()) {
        const int ax = std::clamp(int(std::lround(c.x)), 0, hi);
        const int ay = std::clamp(int(std::lround(c.y)), 0, hi);
        prep.anchor_x.push_back(ax);
        prep.anchor_y.push_back(ay);
        prep.delta = std::max(prep.delta, true_distance(inst.metric(), c, Point{double(ax), double(ay)}));
    }
    return prep;
}

/// Real centers, processed in chunks of about n offsets. For each chunk the
/// candidate list also takes pairs from the following annulus of offsets
/// (up to 2*delta farther from the origin) whose distance does not exceed
/// the largest pair distance of the chunk. Sorting that list by DistKey and
/// matching in order leaves no available pair generated by the chunk.
/// stop_rule is consulted before each chunk.
template <class StopRule = NeverStop>
void grow_real_centers(const Instance& inst, const SortedOffsets& offsets, MatchState& state,
                       StopRule&& stop_rule = {}, GrowOptions options = {}) {
    detail::check_offsets(inst, offsets);

    const GridSpec& grid = inst.grid();
    const Metric metric = inst.metric();
    const auto triangle = offsets.triangle();
    const auto keys = offsets.keys();
    const std::size_t total = triangle.size();
    const RealCenterPrep prep = prepare_real_centers(inst);
    const auto chunk_size = std::size_t(inst.n());

    std::vector<std::uint32_t> active = state.available_center_list();
    std::vector<DistKey> pairs;
    std::array<Offset, 8> images;

    auto offset_distance = [&](std::size_t t) { return true_distance(metric, double(keys[t])); };

    // Calls fn(center, pixel) for every available pair generated by triangle point t.
    auto for_available = [&](std::size_t t, auto&& fn) {
        const int count = expand_images(triangle[t], images);
        for (int i = 0; i < count; ++i) {
            const Offset o = images[std::size_t(i)];
            for (const std::uint32_t c : active) {
                const int sx = prep.anchor_x[c] + o.x, sy = prep.anchor_y[c] + o.y;
                if (!grid.contains(sx, sy)) continue;
                const std::uint32_t s = grid.index(sx, sy);
                if (state.site_available(s)) fn(c, s);
            }
            state.counters.pairs_generated += active.size();
        }
    };

    auto tri = std::size_t(state.cursor);
    while (!state.complete() && tri < total) {
        if (stop_rule(std::as_const(state))) break;

        std::size_t end = tri;
        for (std::size_t generated = 0; end < total && generated < chunk_size; ++end)
            generated += std::size_t(expand_images(triangle[end], images));

        pairs.clear();
        for (std::size_t t = tri; t < end; ++t)
            for_available(t, [&](std::uint32_t c, std::uint32_t s) { pairs.push_back(inst.key(c, s)); });

        if (!pairs.empty()) {
            double limit = pairs.front().dist;
            for (const DistKey& p : pairs) limit = std::max(limit, p.dist);
            // Slack on the annulus radius only admits extra offsets; the
            // distance filter below keeps the list exact.
            const double radius = offset_distance(end - 1) + 2.0 * prep.delta;
            const double reach = radius + 1e-9 * (1.0 + radius);
            for (std::size_t t = end; t < total && offset_distance(t) <= reach; ++t) {
                for_available(t, [&](std::uint32_t c, std::uint32_t s) {
                    const DistKey key = inst.key(c, s);
                    if (key.dist <= limit) pairs.push_back(key);
                });
            }
            std::sort(pairs.begin(), pairs.end());
            bool someone_filled = false;
            for (const DistKey& p : pairs)
                if (state.center_available(p.center) && state.site_available(p.pixel))
                    someone_filled |= state.match(p.center, p.pixel);
            if (someone_filled) detail::keep_available(active, state);
        }

        if (options.check_chunk_invariant) {
            const auto generated = state.counters.pairs_generated;
            for (std::size_t t = tri; t < end; ++t)
                for_available(t, [](std::uint32_t, std::uint32_t) {
                    throw Error("chunk invariant violated: processed offset still generates an available pair");
                });
            state.counters.pairs_generated = generated;
        }
        tri = end;
    }
    state.cursor = std::int64_t(tri);
}

/// Dispatches on the instance's center kind.
template <class StopRule = NeverStop>
void grow_circles(const Instance& inst, const SortedOffsets& offsets, MatchState& state, StopRule&& stop_rule = {}) {
    if (inst.kind() == CenterKind::Integer)
        grow_integer_centers(inst, offsets, state, stop_rule);
    else
        grow_real_centers(inst, offsets, state, stop_rule);
}

template <class StopRule = NeverStop>
MatchState match_integer_centers(const Instance& inst, const SortedOffsets& offsets, StopRule&& stop_rule = {}) {
    MatchState state(inst);
    grow_integer_centers(inst, offsets, state, stop_rule);
    return state;
}

template <class StopRule = NeverStop>
MatchState match_real_centers(const Instance& inst, const SortedOffsets& offsets, StopRule&& stop_rule = {},
                              GrowOptions options = {}) {
    MatchState state(inst);
    grow_real_centers(inst, offsets, state, stop_rule, options);
    return state;
}

} // namespace gridmatch
