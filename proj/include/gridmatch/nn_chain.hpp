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

// Nearest-neighbor chain matcher. A stack of alternating pixels and centers
// is extended with nearest neighbors until the top two are mutual nearest
// neighbors, which are then matched. Every matched pair is the closest
// available pair it would eventually be under greedy matching, so the
// result equals greedy_oracle.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <vector>

#include "core.hpp"
#include "match_state.hpp"
#include "nn_backend.hpp"

namespace gridmatch {

/// Available pixels in a uniform grid of square buckets, with a pyramid of
/// per-level counts above it (each level halves the bucket count per side).
/// A query walks the pyramid best-first by the exact distance from the
/// center to each node's box and stops once the closest unexplored box is
/// farther than the best pixel found. Exact under all three metrics.
class PixelBuckets {
public:
    PixelBuckets(const Instance& inst, const MatchState& state, RunCounters& counters, int bucket_side = 8)
        : inst_(&inst), counters_(&counters), side_(std::max(1, bucket_side)),
          available_(std::size_t(inst.grid().pixel_count()), 0) {
        for (int per_side = (inst.n() + side_ - 1) / side_;; per_side = (per_side + 1) / 2) {
            levels_.push_back({per_side, std::vector<std::uint32_t>(std::size_t(per_side) * std::size_t(per_side), 0)});
            if (per_side == 1) break;
        }
        const GridSpec& grid = inst.grid();
        for (std::uint32_t p = 0; p < available_.size(); ++p) {
            if (!state.site_available(p)) continue;
            available_[p] = 1;
            adjust(grid.x_of(p), grid.y_of(p), +1);
            ++size_;
        }
    }

    /// Nearest available pixel to center c under (distance, pixel index).
    std::optional<std::uint32_t> nearest(std::uint32_t center) {
        ++counters_->nn_queries;
        if (size_ == 0) return std::nullopt;
        const Point c = inst_->center(center);
        const Metric metric = inst_->metric();
        const GridSpec& grid = inst_->grid();
        const int n = inst_->n();

        auto box_bound = [&](int level, int ux, int uy) {
            const int span = side_ << level;
            const double x0 = double(ux) * span, y0 = double(uy) * span;
            const double x1 = std::min(double(n), x0 + span) - 1.0, y1 = std::min(double(n), y0 + span) - 1.0;
            const double dx = std::max({0.0, x0 - c.x, c.x - x1});
            const double dy = std::max({0.0, y0 - c.y, c.y - y1});
            return distance_value(metric, dx, dy);
        };

        std::optional<std::uint32_t> best;
        double best_dist = 0.0;
        heap_.clear();
        const int top = int(levels_.size()) - 1;
        heap_.push_back({box_bound(top, 0, 0), top, 0, 0});
        while (!heap_.empty()) {
            std::pop_heap(heap_.begin(), heap_.end(), std::greater<>{});
            const HeapNode node = heap_.back();
            heap_.pop_back();
            if (best && node.bound > best_dist) break;
            if (node.level == 0) {
                const int x1 = std::min(n, (node.ux + 1) * side_), y1 = std::min(n, (node.uy + 1) * side_);
                for (int y = node.uy * side_; y < y1; ++y) {
                    for (int x = node.ux * side_; x < x1; ++x) {
                        const std::uint32_t p = grid.index(x, y);
                        if (!available_[p]) continue;
                        const double d = distance_value(metric, c, x, y);
                        if (!best || d < best_dist || (d == best_dist && p < *best)) {
                            best = p;
                            best_dist = d;
                        }
                    }
                }
                continue;
            }
            const Level& below = levels_[std::size_t(node.level - 1)];
            for (int cy = 2 * node.uy; cy < std::min(below.per_side, 2 * node.uy + 2); ++cy) {
                for (int cx = 2 * node.ux; cx < std::min(below.per_side, 2 * node.ux + 2); ++cx) {
                    if (below.count[std::size_t(cy) * std::size_t(below.per_side) + std::size_t(cx)] == 0) continue;
                    heap_.push_back({box_bound(node.level - 1, cx, cy), node.level - 1, cx, cy});
                    std::push_heap(heap_.begin(), heap_.end(), std::greater<>{});
                }
            }
        }
        return best;
    }

    void remove(std::uint32_t pixel) {
        ++counters_->nn_removals;
        if (!available_[pixel]) return;
        available_[pixel] = 0;
        const GridSpec& grid = inst_->grid();
        adjust(grid.x_of(pixel), grid.y_of(pixel), -1);
        --size_;
    }

    std::size_t size() const { return size_; }

private:
    struct Level {
        int per_side;
        std::vector<std::uint32_t> count;
    };
    struct HeapNode {
        double bound;
        int level, ux, uy;
        bool operator>(const HeapNode& o) const { return bound > o.bound; }
    };

    void adjust(int x, int y, int delta) {
        int ux = x / side_, uy = y / side_;
        for (Level& level : levels_) {
            level.count[std::size_t(uy) * std::size_t(level.per_side) + std::size_t(ux)] += std::uint32_t(delta);
            ux /= 2;
            uy /= 2;
        }
    }

    const Instance* inst_;
    RunCounters* counters_;
    int side_;
    std::vector<char> available_;
    std::vector<Level> levels_; // levels_[0] is the bucket grid itself
    std::vector<HeapNode> heap_;
    std::size_t size_ = 0;
};

namespace detail {

/// A stack entry: either a center or a pixel.
struct ChainNode {
    bool is_center;
    std::uint32_t id;
    friend bool operator==(const ChainNode&, const ChainNode&) = default;
};

} // namespace detail

struct NnChainOptions {
    /// Without a seed an empty stack is restarted from the lowest-id
    /// available center; with one, from a random available point.
    std::optional<std::uint64_t> start_seed;
    /// Brute-force check that every matched pair is mutually nearest.
    bool check_mutual = false;
    int bucket_side = 8;
};

inline void nn_chain_match(const Instance& inst, MatchState& state, NnChainOptions options = {}) {
    if (state.complete()) return;

    const auto pixel_count = std::uint32_t(inst.grid().pixel_count());
    const auto k = std::uint32_t(inst.k());
    LinearScanCenters centers(inst, state.available_center_list(), state.counters);
    PixelBuckets pixels(inst, state, state.counters, options.bucket_side);

    using Node = detail::ChainNode;
    std::vector<Node> stack;
    std::vector<DistKey> links; // links[i] joins stack[i] and stack[i + 1]
    std::vector<char> center_on_stack(k, 0), pixel_on_stack(pixel_count, 0);
    auto on_stack = [&](Node v) -> char& { return v.is_center ? center_on_stack[v.id] : pixel_on_stack[v.id]; };

    std::mt19937_64 rng(options.start_seed.value_or(0));
    std::uint32_t lowest_center = 0;
    auto start_point = [&]() -> Node {
        if (!options.start_seed) {
            while (!state.center_available(lowest_center)) ++lowest_center;
            return {true, lowest_center};
        }
        const std::uint64_t total = std::uint64_t(pixel_count) + k;
        for (std::uint64_t i = rng() % total;; i = (i + 1) % total) {
            if (i < pixel_count && state.site_available(std::uint32_t(i))) return {false, std::uint32_t(i)};
            if (i >= pixel_count && state.center_available(std::uint32_t(i - pixel_count)))
                return {true, std::uint32_t(i - pixel_count)};
        }
    };

    auto check_mutual = [&](std::uint32_t c, std::uint32_t s) {
        const DistKey key = inst.key(c, s);
        for (std::uint32_t other = 0; other < k; ++other)
            if (state.center_available(other) && inst.key(other, s) < key)
                throw Error("nn chain matched a pair that is not mutually nearest");
        for (std::uint32_t other = 0; other < pixel_count; ++other)
            if (state.site_available(other) && inst.key(c, other) < key)
                throw Error("nn chain matched a pair that is not mutually nearest");
    };

    while (!state.complete()) {
        if (stack.empty()) {
            const Node start = start_point();
            stack.push_back(start);
            on_stack(start) = 1;
        }
        const Node top = stack.back();
        Node next{};
        if (top.is_center) {
            const auto p = pixels.nearest(top.id);
            if (!p) throw Error("nn chain: no available pixel for an available center");
            next = {false, *p};
        } else {
            const std::uint32_t c = centers.nearest(top.id);
            if (c == kNoCenter) throw Error("nn chain: no available center for an available pixel");
            next = {true, c};
        }
        const std::uint32_t c = top.is_center ? top.id : next.id;
        const std::uint32_t s = top.is_center ? next.id : top.id;
        const DistKey key = inst.key(c, s);

        if (!on_stack(next)) {
            if (!links.empty() && !(key < links.back()))
                throw Error("nn chain: chain distances must strictly decrease");
            stack.push_back(next);
            links.push_back(key);
            on_stack(next) = 1;
            continue;
        }

        if (stack.size() < 2 || !(stack[stack.size() - 2] == next))
            throw Error("nn chain: nearest point on the stack is not second from top");
        if (options.check_mutual) check_mutual(c, s);
        on_stack(stack.back()) = 0;
        stack.pop_back();
        on_stack(stack.back()) = 0;
        stack.pop_back();
        links.resize(stack.empty() ? 0 : stack.size() - 1);

        const bool filled = state.match(c, s);
        pixels.remove(s);
        if (filled) centers.remove(c);
    }
}

} // namespace gridmatch
