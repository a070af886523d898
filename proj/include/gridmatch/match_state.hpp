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

#include <cstdint>
#include <utility>
#include <vector>

#include "core.hpp"

namespace gridmatch {

/// Instrumentation shared by all matchers. Each field is only touched by
/// the algorithms it describes.
struct RunCounters {
    std::uint64_t pairs_generated = 0;   // circle growing: (offset, center) candidates examined
    std::uint64_t alpha = 0;             // pair heap: sites naming a center when it filled up
    std::uint64_t nn_queries = 0;        // pair heap / nn chain: nearest() calls
    std::uint64_t nn_removals = 0;       // pair heap / nn chain: remove() calls
    std::uint64_t presort_traversal = 0; // presort backend: array slots stepped over
    std::uint64_t heap_pushes = 0;
    std::uint64_t pairs_sorted = 0;      // pair sort: size of the sorted pair list
};

/// A partial matching. Invariant: available_sites equals the sum of the
/// remaining quotas and the number of unassigned pixels.
class MatchState {
public:
    explicit MatchState(const Instance& inst)
        : n_(inst.n()), owner_(std::size_t(inst.grid().pixel_count()), kUnassigned),
          quota_(compute_quotas(inst)), available_sites_(inst.grid().pixel_count()),
          available_centers_(inst.k()) {}

    int n() const { return n_; }
    int k() const { return int(quota_.size()); }

    bool site_available(std::uint32_t pixel) const { return owner_[pixel] == kUnassigned; }
    bool center_available(std::uint32_t center) const { return quota_[center] > 0; }
    std::int64_t remaining_quota(std::uint32_t center) const { return quota_[center]; }
    std::int64_t available_sites() const { return available_sites_; }
    std::int64_t available_centers() const { return available_centers_; }
    bool complete() const { return available_sites_ == 0; }
    std::int32_t owner(std::uint32_t pixel) const { return owner_[pixel]; }
    const std::vector<std::int32_t>& owners() const { return owner_; }

    /// Matches an available pair. Returns true if the center just filled up.
    bool match(std::uint32_t center, std::uint32_t pixel) {
        if (tracing) trace.push_back({center, pixel});
        owner_[pixel] = std::int32_t(center);
        --available_sites_;
        if (--quota_[center] == 0) {
            --available_centers_;
            return true;
        }
        return false;
    }

    std::vector<std::uint32_t> available_site_list() const {
        std::vector<std::uint32_t> out;
        out.reserve(std::size_t(available_sites_));
        for (std::uint32_t p = 0; p < owner_.size(); ++p)
            if (owner_[p] == kUnassigned) out.push_back(p);
        return out;
    }

    std::vector<std::uint32_t> available_center_list() const {
        std::vector<std::uint32_t> out;
        for (std::uint32_t c = 0; c < quota_.size(); ++c)
            if (quota_[c] > 0) out.push_back(c);
        return out;
    }

    Assignment assignment() const { return Assignment(n_, k(), owner_); }

    RunCounters counters;
    /// Circle growing position: index of the next unprocessed triangle
    /// point of the sorted offset list.
    std::int64_t cursor = 0;

    /// When set, every match is appended to trace in the order it was made.
    bool tracing = false;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> trace;

private:
    int n_;
    std::vector<std::int32_t> owner_;
    std::vector<std::int64_t> quota_;
    std::int64_t available_sites_;
    std::int64_t available_centers_;
};

} // namespace gridmatch
