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

// Endgame matchers that continue a partial matching: pair sort and the
// pair heap with eager or lazy updates.

#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "core.hpp"
#include "match_state.hpp"
#include "nn_backend.hpp"
#include "offsets.hpp"

namespace gridmatch {

inline constexpr std::uint64_t kDefaultPairBudget = std::uint64_t(1) << 27;

/// Sorts every available (center, site) pair and matches them in order.
/// Integer centers use a counting sort on the exact integer distance;
/// real centers use a comparison sort on the full DistKey.
inline void pair_sort(const Instance& inst, MatchState& state, std::uint64_t budget = kDefaultPairBudget) {
    if (state.complete()) return;
    const auto sites = state.available_site_list();
    const auto centers = state.available_center_list();
    const std::uint64_t count = std::uint64_t(sites.size()) * centers.size();
    if (count > budget)
        throw PairBudgetError("pair sort needs " + std::to_string(count) + " pairs, budget is " +
                              std::to_string(budget) + "; use pair_heap");
    state.counters.pairs_sorted += count;

    auto match_if_available = [&](std::uint32_t c, std::uint32_t s) {
        if (state.center_available(c) && state.site_available(s)) state.match(c, s);
    };

    if (inst.kind() == CenterKind::Integer) {
        const GridSpec& grid = inst.grid();
        auto key_of = [&](std::uint32_t c, std::uint32_t s) {
            const Point p = inst.center(c);
            return std::size_t(offset_key(inst.metric(), grid.x_of(s) - int(p.x), grid.y_of(s) - int(p.y)));
        };
        const std::size_t max_key = std::size_t(offset_key(inst.metric(), inst.n() - 1, inst.n() - 1));
        std::vector<std::uint64_t> start(max_key + 2, 0);
        for (const auto c : centers)
            for (const auto s : sites) ++start[key_of(c, s) + 1];
        for (std::size_t i = 1; i < start.size(); ++i) start[i] += start[i - 1];

        // Pairs are enumerated in (center, site) order and the sort is
        // stable, so equal distances come out in DistKey order.
        std::vector<std::pair<std::uint32_t, std::uint32_t>> sorted(static_cast<std::size_t>(count));
        for (const auto c : centers)
            for (const auto s : sites) sorted[std::size_t(start[key_of(c, s)]++)] = {c, s};
        for (const auto& [c, s] : sorted) match_if_available(c, s);
    } else {
        std::vector<DistKey> pairs;
        pairs.reserve(std::size_t(count));
        for (const auto c : centers)
            for (const auto s : sites) pairs.push_back(inst.key(c, s));
        std::sort(pairs.begin(), pairs.end());
        for (const DistKey& p : pairs) match_if_available(p.center, p.pixel);
    }
}

enum class UpdatePolicy { Eager, Lazy };
enum class Backend { LinearScan, Presort };

/// Pair heap over an arbitrary nearest-center backend. The heap holds one
/// (nearest center, site) entry per available site.
///
/// Lazy: an entry whose center has filled up is discovered when popped;
/// the site is re-queried and pushed back.
/// Eager: the moment a center fills, every entry naming it is re-queried
/// and the heap is re-heapified in place.
///
/// In both cases alpha grows by the number of heap entries naming a center
/// at the moment it fills.
template <CenterNNBackend NN>
void pair_heap_with(const Instance& inst, MatchState& state, UpdatePolicy policy, NN& nn) {
    if (state.complete()) return;
    const auto sites = state.available_site_list();
    std::vector<std::uint64_t> named(std::size_t(inst.k()), 0);
    std::vector<DistKey> heap;
    heap.reserve(sites.size());
    const std::greater<> later;

    auto entry_for = [&](std::uint32_t s) {
        const std::uint32_t c = nn.nearest(s);
        if (c == kNoCenter) throw Error("pair heap: no available center left for an available site");
        ++named[c];
        return inst.key(c, s);
    };

    for (const auto s : sites) heap.push_back(entry_for(s));
    std::make_heap(heap.begin(), heap.end(), later);
    state.counters.heap_pushes += heap.size();

    while (!heap.empty()) {
        std::pop_heap(heap.begin(), heap.end(), later);
        const DistKey top = heap.back();
        heap.pop_back();
        --named[top.center];

        if (!state.center_available(top.center)) {
            // Only reachable under the lazy policy.
            heap.push_back(entry_for(top.pixel));
            std::push_heap(heap.begin(), heap.end(), later);
            ++state.counters.heap_pushes;
            continue;
        }
        if (!state.match(top.center, top.pixel)) continue;

        nn.remove(top.center);
        state.counters.alpha += named[top.center];
        if (policy == UpdatePolicy::Eager && named[top.center] > 0) {
            for (DistKey& e : heap)
                if (e.center == top.center) e = entry_for(e.pixel);
            named[top.center] = 0;
            std::make_heap(heap.begin(), heap.end(), later);
        }
    }
}

inline void pair_heap(const Instance& inst, MatchState& state, UpdatePolicy policy, Backend backend,
                      std::uint64_t budget = kDefaultPairBudget) {
    if (state.complete()) return;
    const auto centers = state.available_center_list();
    if (backend == Backend::LinearScan) {
        LinearScanCenters nn(inst, centers, state.counters);
        pair_heap_with(inst, state, policy, nn);
    } else {
        const auto sites = state.available_site_list();
        PresortCenters nn(inst, sites, centers, state.counters, budget);
        pair_heap_with(inst, state, policy, nn);
    }
}

} // namespace gridmatch
