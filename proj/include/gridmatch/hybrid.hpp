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

// Hybrid pipeline: circle growing until the cutoff ratio is reached, then
// an endgame matcher finishes the job. Produces one BenchRow per run.

#pragma once

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "circle_growing.hpp"
#include "core.hpp"
#include "distance_sorting.hpp"
#include "match_state.hpp"
#include "nn_chain.hpp"
#include "offsets.hpp"
#include "verify.hpp"

namespace gridmatch {

enum class Algorithm { CG, PS, PH_EP, PH_EL, PH_LP, PH_LL, NNC, Oracle };

inline constexpr Algorithm kBenchAlgorithms[] = {Algorithm::CG,    Algorithm::PS,    Algorithm::PH_EP, Algorithm::PH_EL,
                                                 Algorithm::PH_LP, Algorithm::PH_LL, Algorithm::NNC};

inline std::string_view to_string(Algorithm a) {
    switch (a) {
    case Algorithm::CG: return "CG";
    case Algorithm::PS: return "PS";
    case Algorithm::PH_EP: return "PH_EP";
    case Algorithm::PH_EL: return "PH_EL";
    case Algorithm::PH_LP: return "PH_LP";
    case Algorithm::PH_LL: return "PH_LL";
    case Algorithm::NNC: return "NNC";
    case Algorithm::Oracle: return "ORACLE";
    }
    return "?";
}

inline Algorithm parse_algorithm(std::string_view s) {
    for (Algorithm a : kBenchAlgorithms)
        if (s == to_string(a)) return a;
    if (s == "ORACLE" || s == "oracle") return Algorithm::Oracle;
    throw Error("unknown algorithm '" + std::string(s) + "' (expected CG, PS, PH_EP, PH_EL, PH_LP, PH_LL, NNC or ORACLE)");
}

/// Numerator of the cutoff ratio; the denominator is always the number of
/// pairs circle growing has generated so far.
enum class CutoffRatio {
    SitesTimesCenters, // available sites * available centers
    Sites              // available sites
};

struct HybridConfig {
    Algorithm algorithm = Algorithm::PH_LL;
    /// 0 runs circle growing to completion; infinity skips it.
    double cutoff = 0.15;
    CutoffRatio ratio = CutoffRatio::SitesTimesCenters;
    std::uint64_t pair_budget = kDefaultPairBudget;
    NnChainOptions nn_chain;
};

/// Stop rule for circle growing implementing the hybrid switch.
struct CutoffRule {
    double cutoff;
    CutoffRatio ratio;

    bool operator()(const MatchState& s) const {
        if (cutoff <= 0.0) return false;
        double numerator = double(s.available_sites());
        if (ratio == CutoffRatio::SitesTimesCenters) numerator *= double(s.available_centers());
        const double generated = double(s.counters.pairs_generated);
        const double value = generated == 0.0 ? std::numeric_limits<double>::infinity() : numerator / generated;
        return value <= cutoff;
    }
};

struct BenchRow {
    int n = 0;
    int k = 0;
    Metric metric = Metric::L2;
    CenterKind kind = CenterKind::Integer;
    Algorithm algorithm = Algorithm::CG;
    double cutoff = 0.0;
    std::string seed; // a number, or "mean" for averaged rows
    double time_total = 0.0;
    double time_circle = 0.0;
    double time_endgame = 0.0;
    std::int64_t handoff_sites = 0;
    std::int64_t handoff_centers = 0;
    std::uint64_t pairs_generated = 0;
    std::uint64_t alpha = 0;
    std::uint64_t nn_queries = 0;
    std::uint64_t presort_traversal = 0;
    std::uint64_t heap_pushes = 0;
    std::uint64_t assignment_hash = 0;
};

inline constexpr std::string_view kBenchCsvHeader =
    "n,k,metric,centers,algo,cutoff,seed,time_total,time_circle,time_endgame,handoff_sites,handoff_centers,"
    "pairs_generated,alpha,nn_queries,presort_traversal,heap_pushes,assignment_hash";

namespace detail {

template <class T>
void put_number(std::ostream& out, T value) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, value);
    out.write(buf, res.ptr - buf);
}

inline void put_fixed(std::ostream& out, double value, int precision) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::fixed, precision);
    out.write(buf, res.ptr - buf);
}

} // namespace detail

/// Writes one CSV line (no trailing newline). Independent of the global
/// locale.
inline void write_csv_row(std::ostream& out, const BenchRow& r) {
    using detail::put_fixed;
    using detail::put_number;
    put_number(out, r.n);
    out << ',';
    put_number(out, r.k);
    out << ',' << to_string(r.metric) << ',' << to_string(r.kind) << ',' << to_string(r.algorithm) << ',';
    put_number(out, r.cutoff);
    out << ',' << r.seed << ',';
    put_fixed(out, r.time_total, 6);
    out << ',';
    put_fixed(out, r.time_circle, 6);
    out << ',';
    put_fixed(out, r.time_endgame, 6);
    for (std::uint64_t v : {std::uint64_t(r.handoff_sites), std::uint64_t(r.handoff_centers), r.pairs_generated,
                            r.alpha, r.nn_queries, r.presort_traversal, r.heap_pushes}) {
        out << ',';
        put_number(out, v);
    }
    out << ',';
    char buf[17];
    auto res = std::to_chars(buf, buf + sizeof buf, r.assignment_hash, 16);
    out.write(buf, res.ptr - buf);
}

/// FNV-1a over the owner array; a compact fingerprint for CSV reports.
inline std::uint64_t assignment_hash(const std::vector<std::int32_t>& owner) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const std::int32_t c : owner) {
        auto v = std::uint32_t(c);
        for (int i = 0; i < 4; ++i) {
            h ^= (v & 0xffu);
            h *= 0x100000001b3ULL;
            v >>= 8;
        }
    }
    return h;
}

struct HybridResult {
    MatchState state;
    BenchRow row;
    Assignment assignment() const { return state.assignment(); }
};

/// Runs the configured pipeline on one instance. The offset list must be
/// built for the instance's n and metric; its construction is not timed.
inline HybridResult run_hybrid(const Instance& inst, const SortedOffsets& offsets, const HybridConfig& config) {
    using clock = std::chrono::steady_clock;
    MatchState state(inst);
    BenchRow row;
    row.n = inst.n();
    row.k = inst.k();
    row.metric = inst.metric();
    row.kind = inst.kind();
    row.algorithm = config.algorithm;
    row.cutoff = config.algorithm == Algorithm::CG ? 0.0 : config.cutoff;

    const auto t0 = clock::now();
    if (config.algorithm == Algorithm::Oracle) {
        const Assignment a = greedy_oracle(inst);
        for (std::uint32_t p = 0; p < a.owner.size(); ++p) state.match(std::uint32_t(a.owner[p]), p);
    } else {
        grow_circles(inst, offsets, state, CutoffRule{row.cutoff, config.ratio});
    }
    const auto t1 = clock::now();
    row.handoff_sites = state.available_sites();
    row.handoff_centers = state.available_centers();

    switch (config.algorithm) {
    case Algorithm::CG:
    case Algorithm::Oracle: break;
    case Algorithm::PS: pair_sort(inst, state, config.pair_budget); break;
    case Algorithm::PH_EP:
        pair_heap(inst, state, UpdatePolicy::Eager, Backend::Presort, config.pair_budget);
        break;
    case Algorithm::PH_EL:
        pair_heap(inst, state, UpdatePolicy::Eager, Backend::LinearScan, config.pair_budget);
        break;
    case Algorithm::PH_LP:
        pair_heap(inst, state, UpdatePolicy::Lazy, Backend::Presort, config.pair_budget);
        break;
    case Algorithm::PH_LL:
        pair_heap(inst, state, UpdatePolicy::Lazy, Backend::LinearScan, config.pair_budget);
        break;
    case Algorithm::NNC: nn_chain_match(inst, state, config.nn_chain); break;
    }
    const auto t2 = clock::now();
    if (!state.complete()) throw Error("hybrid run finished with unmatched pixels");

    row.time_circle = std::chrono::duration<double>(t1 - t0).count();
    row.time_endgame = std::chrono::duration<double>(t2 - t1).count();
    row.time_total = std::chrono::duration<double>(t2 - t0).count();
    row.pairs_generated = state.counters.pairs_generated;
    row.alpha = state.counters.alpha;
    row.nn_queries = state.counters.nn_queries;
    row.presort_traversal = state.counters.presort_traversal;
    row.heap_pushes = state.counters.heap_pushes;
    row.assignment_hash = assignment_hash(state.owners());
    return {std::move(state), std::move(row)};
}

} // namespace gridmatch
