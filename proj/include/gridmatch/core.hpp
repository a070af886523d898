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

// Problem-instance types for stable grid matching: metrics, distance keys,
// quotas and the completed assignment.

#pragma once

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace gridmatch {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The instance cannot be matched (bad n, k, or a center outside the grid).
class InstanceError : public Error {
public:
    using Error::Error;
};

enum class Metric { L2, L1, Linf };
enum class CenterKind { Integer, Real };

inline std::string_view to_string(Metric m) {
    switch (m) {
    case Metric::L2: return "l2";
    case Metric::L1: return "l1";
    case Metric::Linf: return "linf";
    }
    return "?";
}

inline std::string_view to_string(CenterKind k) { return k == CenterKind::Integer ? "int" : "real"; }

inline Metric parse_metric(std::string_view s) {
    if (s == "l2") return Metric::L2;
    if (s == "l1") return Metric::L1;
    if (s == "linf") return Metric::Linf;
    throw InstanceError("unknown metric '" + std::string(s) + "' (expected l2, l1 or linf)");
}

inline CenterKind parse_center_kind(std::string_view s) {
    if (s == "int") return CenterKind::Integer;
    if (s == "real") return CenterKind::Real;
    throw InstanceError("unknown center kind '" + std::string(s) + "' (expected int or real)");
}

struct Point {
    double x = 0.0;
    double y = 0.0;
    friend bool operator==(const Point&, const Point&) = default;
};

/// Side length of the square pixel grid. Pixels are lattice points (x, y)
/// with 0 <= x, y < n, indexed row-major as y * n + x.
class GridSpec {
public:
    explicit GridSpec(int n) : n_(n) {
        if (n < 1) throw InstanceError("grid side must be >= 1");
        if (n > 46340) throw InstanceError("grid side too large");
    }
    int n() const { return n_; }
    std::int64_t pixel_count() const { return std::int64_t(n_) * n_; }
    std::uint32_t index(int x, int y) const { return std::uint32_t(y) * std::uint32_t(n_) + std::uint32_t(x); }
    int x_of(std::uint32_t pixel) const { return int(pixel % std::uint32_t(n_)); }
    int y_of(std::uint32_t pixel) const { return int(pixel / std::uint32_t(n_)); }
    bool contains(int x, int y) const { return x >= 0 && y >= 0 && x < n_ && y < n_; }

private:
    int n_;
};

/// Primary component of a distance key. Euclidean distances are squared so
/// that integer inputs give exact integer values; L1 and Linf use the distance
/// itself.
inline double distance_value(Metric m, double dx, double dy) {
    switch (m) {
    case Metric::L2: return dx * dx + dy * dy;
    case Metric::L1: return std::abs(dx) + std::abs(dy);
    case Metric::Linf: return std::max(std::abs(dx), std::abs(dy));
    }
    return 0.0;
}

inline double distance_value(Metric m, Point c, int px, int py) {
    return distance_value(m, double(px) - c.x, double(py) - c.y);
}

/// Converts a distance value back to a metric distance (undoes the squaring).
inline double true_distance(Metric m, double value) { return m == Metric::L2 ? std::sqrt(value) : value; }

inline double true_distance(Metric m, Point a, Point b) {
    return true_distance(m, distance_value(m, a.x - b.x, a.y - b.y));
}

/// Total order on (center, pixel) pairs: distance, then center id, then
/// pixel index. No two distinct pairs compare equal.
struct DistKey {
    double dist = 0.0;
    std::uint32_t center = 0;
    std::uint32_t pixel = 0;

    friend bool operator==(const DistKey&, const DistKey&) = default;
    friend bool operator<(const DistKey& a, const DistKey& b) {
        if (a.dist != b.dist) return a.dist < b.dist;
        if (a.center != b.center) return a.center < b.center;
        return a.pixel < b.pixel;
    }
    friend bool operator>(const DistKey& a, const DistKey& b) { return b < a; }
    friend bool operator<=(const DistKey& a, const DistKey& b) { return !(b < a); }
};

/// A validated problem instance. Immutable after construction.
class Instance {
public:
    Instance(int n, Metric metric, CenterKind kind, std::vector<Point> centers)
        : grid_(n), metric_(metric), kind_(kind), centers_(std::move(centers)) {
        if (centers_.empty()) throw InstanceError("need at least one center");
        if (std::int64_t(centers_.size()) > grid_.pixel_count())
            throw InstanceError("more centers than pixels");
        for (std::size_t i = 0; i < centers_.size(); ++i) {
            const Point c = centers_[i];
            if (!(c.x >= 0.0 && c.x < n && c.y >= 0.0 && c.y < n))
                throw InstanceError("center " + std::to_string(i) + " lies outside the grid");
            if (kind_ == CenterKind::Integer && (c.x != std::floor(c.x) || c.y != std::floor(c.y)))
                throw InstanceError("center " + std::to_string(i) + " is not on a lattice point");
        }
    }

    const GridSpec& grid() const { return grid_; }
    int n() const { return grid_.n(); }
    int k() const { return int(centers_.size()); }
    Metric metric() const { return metric_; }
    CenterKind kind() const { return kind_; }
    const std::vector<Point>& centers() const { return centers_; }
    Point center(std::uint32_t id) const { return centers_[id]; }

    /// Same centers reinterpreted as real coordinates.
    Instance as_real() const { return Instance(n(), metric_, CenterKind::Real, centers_); }

    DistKey key(std::uint32_t center, std::uint32_t pixel) const {
        return {distance_value(metric_, centers_[center], grid_.x_of(pixel), grid_.y_of(pixel)), center, pixel};
    }

private:
    GridSpec grid_;
    Metric metric_;
    CenterKind kind_;
    std::vector<Point> centers_;
};

inline DistKey distance_key(const Instance& inst, std::uint32_t center, int px, int py) {
    return inst.key(center, inst.grid().index(px, py));
}

/// Region sizes: floor(n^2/k) each, plus one for the first n^2 mod k centers.
inline std::vector<std::int64_t> compute_quotas(int n, int k) {
    const std::int64_t pixels = std::int64_t(n) * n;
    if (n < 1 || k < 1 || k > pixels) throw InstanceError("need 1 <= k <= n^2");
    const std::int64_t base = pixels / k;
    const std::int64_t extra = pixels % k;
    std::vector<std::int64_t> q(std::size_t(k), base);
    for (std::int64_t i = 0; i < extra; ++i) q[std::size_t(i)] += 1;
    return q;
}

inline std::vector<std::int64_t> compute_quotas(const Instance& inst) { return compute_quotas(inst.n(), inst.k()); }

inline constexpr std::int32_t kUnassigned = -1;

/// Pixel -> center map, row-major, plus the size of each region.
struct Assignment {
    int n = 0;
    int k = 0;
    std::vector<std::int32_t> owner;
    std::vector<std::int64_t> region_size;

    Assignment() = default;
    Assignment(int n_, int k_, std::vector<std::int32_t> owner_) : n(n_), k(k_), owner(std::move(owner_)) {
        region_size.assign(std::size_t(k), 0);
        for (auto c : owner)
            if (c >= 0 && c < k) ++region_size[std::size_t(c)];
    }

    bool complete() const {
        return std::all_of(owner.begin(), owner.end(), [&](std::int32_t c) { return c >= 0 && c < k; });
    }

    friend bool operator==(const Assignment& a, const Assignment& b) {
        return a.n == b.n && a.k == b.k && a.owner == b.owner;
    }
};

} // namespace gridmatch
