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

// Nearest-available-center structures queried by pixel. Both answer exactly
// under DistKey order (distance, then center id).

#pragma once

#include <algorithm>
#include <concepts>
#include <cstdint>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "core.hpp"
#include "match_state.hpp"

namespace gridmatch {

/// Refused because the pair list or presort arrays would exceed the budget.
class PairBudgetError : public Error {
public:
    using Error::Error;
};

inline constexpr std::uint32_t kNoCenter = std::numeric_limits<std::uint32_t>::max();

template <class T>
concept CenterNNBackend = requires(T b, std::uint32_t pixel, std::uint32_t center) {
    { b.nearest(pixel) } -> std::same_as<std::uint32_t>;
    b.remove(center);
};

/// O(k) query, O(1) removal.
class LinearScanCenters {
public:
    LinearScanCenters(const Instance& inst, std::span<const std::uint32_t> centers, RunCounters& counters)
        : inst_(&inst), counters_(&counters), alive_(centers.begin(), centers.end()),
          slot_(std::size_t(inst.k()), kNoCenter) {
        for (std::uint32_t i = 0; i < alive_.size(); ++i) slot_[alive_[i]] = i;
    }

    std::uint32_t nearest(std::uint32_t pixel) {
        ++counters_->nn_queries;
        const GridSpec& grid = inst_->grid();
        const int px = grid.x_of(pixel), py = grid.y_of(pixel);
        const Metric metric = inst_->metric();
        std::uint32_t best = kNoCenter;
        double best_dist = 0.0;
        for (const std::uint32_t c : alive_) {
            const double d = distance_value(metric, inst_->center(c), px, py);
            if (best == kNoCenter || d < best_dist || (d == best_dist && c < best)) {
                best = c;
                best_dist = d;
            }
        }
        return best;
    }

    void remove(std::uint32_t center) {
        ++counters_->nn_removals;
        const std::uint32_t at = slot_[center];
        if (at == kNoCenter) return;
        const std::uint32_t last = alive_.back();
        alive_[at] = last;
        slot_[last] = at;
        alive_.pop_back();
        slot_[center] = kNoCenter;
    }

    std::size_t size() const { return alive_.size(); }

private:
    const Instance* inst_;
    RunCounters* counters_;
    std::vector<std::uint32_t> alive_;
    std::vector<std::uint32_t> slot_;
};

/// Presort: every query site gets the array of centers sorted by distance
/// and an index that only moves forward, so all queries of one site
/// together walk its array at most once. Removal only sets a mark.
class PresortCenters {
public:
    PresortCenters(const Instance& inst, std::span<const std::uint32_t> sites, std::span<const std::uint32_t> centers,
                   RunCounters& counters, std::uint64_t budget = std::uint64_t(1) << 27)
        : counters_(&counters), width_(centers.size()), row_of_(std::size_t(inst.grid().pixel_count()), kNoCenter),
          removed_(std::size_t(inst.k()), 0) {
        const std::uint64_t cells = std::uint64_t(sites.size()) * width_;
        if (cells > budget)
            throw PairBudgetError("presort needs " + std::to_string(cells) + " entries, budget is " +
                                  std::to_string(budget));
        sorted_.resize(std::size_t(cells));
        cursor_.assign(sites.size(), 0);
        std::vector<std::pair<double, std::uint32_t>> row(width_);
        const GridSpec& grid = inst.grid();
        for (std::uint32_t r = 0; r < sites.size(); ++r) {
            const std::uint32_t s = sites[r];
            row_of_[s] = r;
            const int px = grid.x_of(s), py = grid.y_of(s);
            for (std::size_t i = 0; i < width_; ++i)
                row[i] = {distance_value(inst.metric(), inst.center(centers[i]), px, py), centers[i]};
            std::sort(row.begin(), row.end());
            for (std::size_t i = 0; i < width_; ++i) sorted_[r * width_ + i] = row[i].second;
        }
    }

    std::uint32_t nearest(std::uint32_t pixel) {
        ++counters_->nn_queries;
        const std::uint32_t r = row_of_[pixel];
        if (r == kNoCenter) throw Error("presort queried with a site it was not built for");
        std::size_t& i = cursor_[r];
        const std::uint32_t* row = sorted_.data() + std::size_t(r) * width_;
        while (i < width_ && removed_[row[i]]) {
            ++i;
            ++counters_->presort_traversal;
        }
        return i < width_ ? row[i] : kNoCenter;
    }

    void remove(std::uint32_t center) {
        ++counters_->nn_removals;
        removed_[center] = 1;
    }

private:
    RunCounters* counters_;
    std::size_t width_;
    std::vector<std::uint32_t> row_of_;
    std::vector<std::uint32_t> sorted_;
    std::vector<std::size_t> cursor_;
    std::vector<char> removed_;
};

static_assert(CenterNNBackend<LinearScanCenters>);
static_assert(CenterNNBackend<PresortCenters>);

} // namespace gridmatch
