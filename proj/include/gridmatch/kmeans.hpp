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

// Stable k-means: Lloyd iteration whose assignment step is a stable grid
// matching (so every cluster has its quota of pixels) and whose update step
// moves each center to a distance-weighted centroid of its region.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "core.hpp"
#include "hybrid.hpp"
#include "offsets.hpp"
#include "random.hpp"
#include "verify.hpp"

namespace gridmatch {

/// w_q = d(q, c)^p. For p < 0 the distance is floored at min_distance so
/// a pixel sitting on its center does not get infinite weight.
struct CentroidWeighting {
    double p = 0.0;
    double min_distance = 1e-6;
};

namespace detail {

struct CentroidSum {
    double wx = 0.0, wy = 0.0, w = 0.0;
    double x = 0.0, y = 0.0;
    std::int64_t count = 0;

    void add(Metric metric, Point q, Point center, const CentroidWeighting& weighting) {
        x += q.x;
        y += q.y;
        ++count;
        double weight = 1.0;
        if (weighting.p != 0.0) {
            double d = true_distance(metric, q, center);
            if (weighting.p < 0.0) d = std::max(d, weighting.min_distance);
            weight = std::pow(d, weighting.p);
        }
        wx += weight * q.x;
        wy += weight * q.y;
        w += weight;
    }

    Point result() const {
        // All weights vanish only when p > 0 and every pixel sits on the
        // center; the plain centroid is that same point.
        if (w > 0.0 && std::isfinite(w)) return {wx / w, wy / w};
        return {x / double(count), y / double(count)};
    }
};

} // namespace detail

inline Point weighted_centroid(Metric metric, std::span<const Point> region, Point center,
                               const CentroidWeighting& weighting) {
    if (region.empty()) throw Error("weighted_centroid: empty region");
    detail::CentroidSum sum;
    for (const Point& q : region) sum.add(metric, q, center, weighting);
    return sum.result();
}

/// Weighted centroid of every region of a complete assignment.
inline std::vector<Point> weighted_centroids(const Instance& inst, const Assignment& a,
                                             const CentroidWeighting& weighting) {
    std::vector<detail::CentroidSum> sums(std::size_t(inst.k()));
    const GridSpec& grid = inst.grid();
    for (std::uint32_t p = 0; p < a.owner.size(); ++p) {
        const auto c = std::uint32_t(a.owner[p]);
        sums[c].add(inst.metric(), Point{double(grid.x_of(p)), double(grid.y_of(p))}, inst.center(c), weighting);
    }
    std::vector<Point> out;
    out.reserve(sums.size());
    for (std::size_t c = 0; c < sums.size(); ++c) {
        if (sums[c].count == 0) throw Error("weighted_centroids: empty region");
        out.push_back(sums[c].result());
    }
    return out;
}

/// Number of 4-connected components of each region.
inline std::vector<int> connectivity_report(const Assignment& a) {
    if (!a.complete()) throw Error("connectivity_report: incomplete assignment");
    const int n = a.n;
    std::vector<int> components(std::size_t(a.k), 0);
    std::vector<char> seen(a.owner.size(), 0);
    std::vector<std::uint32_t> stack;
    for (std::uint32_t start = 0; start < a.owner.size(); ++start) {
        if (seen[start]) continue;
        const std::int32_t region = a.owner[start];
        ++components[std::size_t(region)];
        seen[start] = 1;
        stack.push_back(start);
        while (!stack.empty()) {
            const std::uint32_t p = stack.back();
            stack.pop_back();
            const int x = int(p % std::uint32_t(n)), y = int(p / std::uint32_t(n));
            auto visit = [&](int nx, int ny) {
                if (nx < 0 || ny < 0 || nx >= n || ny >= n) return;
                const std::uint32_t q = std::uint32_t(ny) * std::uint32_t(n) + std::uint32_t(nx);
                if (!seen[q] && a.owner[q] == region) {
                    seen[q] = 1;
                    stack.push_back(q);
                }
            };
            visit(x - 1, y);
            visit(x + 1, y);
            visit(x, y - 1);
            visit(x, y + 1);
        }
    }
    return components;
}

enum class KMeansStatus { Converged, MaxIters, Oscillating };

inline std::string_view to_string(KMeansStatus s) {
    switch (s) {
    case KMeansStatus::Converged: return "converged";
    case KMeansStatus::MaxIters: return "max_iters";
    case KMeansStatus::Oscillating: return "oscillating";
    }
    return "?";
}

struct KMeansIteration {
    std::vector<Point> centers;      // positions used for this iteration's matching
    double max_displacement = 0.0;   // Euclidean move of the update that followed (0 if none)
    std::vector<int> components;     // per-region component counts
    std::optional<bool> stable;      // set when verification is enabled
    std::optional<bool> quotas_ok;
};

struct KMeansRun {
    std::vector<KMeansIteration> iterations;
    KMeansStatus status = KMeansStatus::MaxIters;
    Assignment final_assignment;
    std::vector<int> final_components;
};

struct KMeansOptions {
    int max_iters = 200;
    /// Matcher used for each assignment step; every choice yields the same
    /// matching.
    HybridConfig matcher{Algorithm::PH_LL, 0.15, CutoffRatio::SitesTimesCenters, kDefaultPairBudget, {}};
    /// Run verify_stability and verify_quotas on every iteration.
    bool verify = false;
    double repeat_tolerance = 1e-9;
    /// Called after each assignment step.
    std::function<void(int iteration, const Instance&, const Assignment&)> on_iteration;
};

namespace detail {

inline std::vector<Point> sorted_positions(std::vector<Point> v) {
    std::sort(v.begin(), v.end(), [](const Point& a, const Point& b) { return a.x != b.x ? a.x < b.x : a.y < b.y; });
    return v;
}

inline bool same_positions(const std::vector<Point>& a, const std::vector<Point>& b, double tol) {
    for (std::size_t i = 0; i < a.size(); ++i)
        if (std::abs(a[i].x - b[i].x) > tol || std::abs(a[i].y - b[i].y) > tol) return false;
    return true;
}

} // namespace detail

/// Runs stable k-means from the given real-valued centers. Terminates when an
/// assignment repeats the previous one (converged), when the center
/// positions repeat an earlier iteration other than the last (oscillating),
/// or after max_iters iterations.
inline KMeansRun stable_kmeans(int n, Metric metric, std::vector<Point> centers, const CentroidWeighting& weighting,
                               const KMeansOptions& options = {}) {
    if (options.max_iters < 1) throw Error("stable_kmeans: max_iters must be >= 1");
    const SortedOffsets offsets(n, metric);
    KMeansRun run;
    std::vector<std::vector<Point>> history; // sorted positions of each iteration
    std::optional<Assignment> previous;

    for (int it = 0; it < options.max_iters; ++it) {
        const Instance inst(n, metric, CenterKind::Real, centers);
        Assignment a = run_hybrid(inst, offsets, options.matcher).assignment();
        if (options.on_iteration) options.on_iteration(it, inst, a);

        KMeansIteration record;
        record.centers = centers;
        record.components = connectivity_report(a);
        if (options.verify) {
            record.stable = verify_stability(a, inst).empty();
            record.quotas_ok = verify_quotas(a, inst);
        }
        history.push_back(detail::sorted_positions(centers));

        if (previous && *previous == a) {
            run.iterations.push_back(std::move(record));
            run.status = KMeansStatus::Converged;
            run.final_assignment = std::move(a);
            break;
        }

        std::vector<Point> next = weighted_centroids(inst, a, weighting);
        for (std::size_t c = 0; c < next.size(); ++c)
            record.max_displacement = std::max(record.max_displacement, std::hypot(next[c].x - centers[c].x,
                                                                                   next[c].y - centers[c].y));
        run.iterations.push_back(std::move(record));
        previous = std::move(a);
        centers = std::move(next);

        const auto key = detail::sorted_positions(centers);
        bool repeated = false;
        for (std::size_t h = 0; h + 1 < history.size() && !repeated; ++h)
            repeated = detail::same_positions(key, history[h], options.repeat_tolerance);
        if (repeated) {
            run.status = KMeansStatus::Oscillating;
            break;
        }
    }
    if (run.status != KMeansStatus::Converged) run.final_assignment = std::move(*previous);
    run.final_components = connectivity_report(run.final_assignment);
    return run;
}

/// Seeded variant: k initial centers uniform over [0, n)^2.
inline KMeansRun stable_kmeans(int n, int k, Metric metric, const CentroidWeighting& weighting, std::uint64_t seed,
                               const KMeansOptions& options = {}) {
    return stable_kmeans(n, metric, random_centers(n, k, CenterKind::Real, seed), weighting, options);
}

/// "1:45;2:4;3:1" - number of regions having each component count.
inline std::string components_histogram(const std::vector<int>& components) {
    std::map<int, int> hist;
    for (int c : components) ++hist[c];
    std::string out;
    for (const auto& [count, regions] : hist) {
        if (!out.empty()) out += ';';
        out += std::to_string(count) + ':' + std::to_string(regions);
    }
    return out;
}

inline constexpr std::string_view kKMeansCsvHeader =
    "iteration,max_displacement,stable,quotas_ok,connected_regions,components_histogram";

inline void write_kmeans_csv(std::ostream& out, const KMeansRun& run) {
    out << kKMeansCsvHeader << '\n';
    auto flag = [](const std::optional<bool>& b) { return b ? (*b ? "1" : "0") : ""; };
    for (std::size_t i = 0; i < run.iterations.size(); ++i) {
        const KMeansIteration& it = run.iterations[i];
        const auto connected = std::count(it.components.begin(), it.components.end(), 1);
        out << i << ',';
        detail::put_fixed(out, it.max_displacement, 9);
        out << ',' << flag(it.stable) << ',' << flag(it.quotas_ok) << ',' << connected << ','
            << components_histogram(it.components) << '\n';
    }
}

} // namespace gridmatch
