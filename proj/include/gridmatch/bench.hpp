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

// Benchmark sweeps. A sweep file is a list of "key = values" lines:
//
//   n       = 100 200          grid sides
//   k       = 1000 10n         absolute counts, or a multiple of n
//   metric  = l2 l1 linf       (default l2)
//   centers = int real         (default int)
//   algos   = all | CG PS PH_EP PH_EL PH_LP PH_LL NNC
//   cutoffs = 0 0.15 inf       (default 0.15; CG always runs with 0)
//   seeds   = 1..10 | 3 7 11   (default 1..10)
//   ratio   = pairs | sites    cutoff numerator (default pairs)
//   budget  = 134217728        pair budget for PS and presort
//
// '#' starts a comment. Each configuration produces one row per seed
// followed by a row with seed "mean".

#pragma once

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <exception>
#include <istream>
#include <limits>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "hybrid.hpp"
#include "io.hpp"
#include "offsets.hpp"
#include "random.hpp"

namespace gridmatch {

struct KRule {
    std::int64_t value = 0;
    bool times_n = false;
    int resolve(int n) const { return int(times_n ? value * n : value); }
};

struct SweepSpec {
    std::vector<int> ns;
    std::vector<KRule> ks;
    std::vector<Metric> metrics{Metric::L2};
    std::vector<CenterKind> kinds{CenterKind::Integer};
    std::vector<Algorithm> algorithms{std::begin(kBenchAlgorithms), std::end(kBenchAlgorithms)};
    std::vector<double> cutoffs{0.15};
    std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    CutoffRatio ratio = CutoffRatio::SitesTimesCenters;
    std::uint64_t pair_budget = kDefaultPairBudget;
};

namespace detail {

template <class T>
T parse_integer(const std::string& token, int lineno) {
    T v{};
    const auto res = std::from_chars(token.data(), token.data() + token.size(), v);
    if (res.ec != std::errc{} || res.ptr != token.data() + token.size())
        throw ParseError("bad integer '" + token + "'", lineno);
    return v;
}

inline double parse_cutoff(const std::string& token, int lineno) {
    if (token == "inf") return std::numeric_limits<double>::infinity();
    const double v = parse_coordinate(token, lineno);
    if (!(v >= 0.0)) throw ParseError("cutoff must be >= 0", lineno);
    return v;
}

} // namespace detail

inline SweepSpec parse_sweep(std::istream& in) {
    SweepSpec spec;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ParseError("expected 'key = values'", lineno);
        std::istringstream key_stream(line.substr(0, eq));
        std::string key;
        key_stream >> key;
        std::istringstream values(line.substr(eq + 1));
        std::vector<std::string> tokens;
        for (std::string t; values >> t;) tokens.push_back(t);
        if (tokens.empty()) throw ParseError("no values for '" + key + "'", lineno);

        try {
            if (key == "n") {
                spec.ns.clear();
                for (const auto& t : tokens) {
                    const int n = detail::parse_integer<int>(t, lineno);
                    if (n < 1) throw ParseError("n must be >= 1", lineno);
                    spec.ns.push_back(n);
                }
            } else if (key == "k") {
                spec.ks.clear();
                for (auto t : tokens) {
                    KRule rule;
                    if (!t.empty() && t.back() == 'n') {
                        rule.times_n = true;
                        t.pop_back();
                    }
                    rule.value = detail::parse_integer<std::int64_t>(t, lineno);
                    if (rule.value < 1) throw ParseError("k must be >= 1", lineno);
                    spec.ks.push_back(rule);
                }
            } else if (key == "metric") {
                spec.metrics.clear();
                for (const auto& t : tokens) spec.metrics.push_back(parse_metric(t));
            } else if (key == "centers") {
                spec.kinds.clear();
                for (const auto& t : tokens) spec.kinds.push_back(parse_center_kind(t));
            } else if (key == "algos") {
                if (tokens.size() == 1 && tokens[0] == "all") continue;
                spec.algorithms.clear();
                for (const auto& t : tokens) {
                    const Algorithm a = parse_algorithm(t);
                    if (a == Algorithm::Oracle) throw ParseError("the oracle is not a benchmark algorithm", lineno);
                    spec.algorithms.push_back(a);
                }
            } else if (key == "cutoffs") {
                spec.cutoffs.clear();
                for (const auto& t : tokens) spec.cutoffs.push_back(detail::parse_cutoff(t, lineno));
            } else if (key == "seeds") {
                spec.seeds.clear();
                for (const auto& t : tokens) {
                    if (const auto dots = t.find(".."); dots != std::string::npos) {
                        const auto lo = detail::parse_integer<std::uint64_t>(t.substr(0, dots), lineno);
                        const auto hi = detail::parse_integer<std::uint64_t>(t.substr(dots + 2), lineno);
                        if (hi < lo) throw ParseError("empty seed range", lineno);
                        for (auto s = lo; s <= hi; ++s) spec.seeds.push_back(s);
                    } else {
                        spec.seeds.push_back(detail::parse_integer<std::uint64_t>(t, lineno));
                    }
                }
            } else if (key == "ratio") {
                if (tokens.size() != 1 || (tokens[0] != "pairs" && tokens[0] != "sites"))
                    throw ParseError("ratio must be 'pairs' or 'sites'", lineno);
                spec.ratio = tokens[0] == "pairs" ? CutoffRatio::SitesTimesCenters : CutoffRatio::Sites;
            } else if (key == "budget") {
                spec.pair_budget = detail::parse_integer<std::uint64_t>(tokens.at(0), lineno);
            } else {
                throw ParseError("unknown key '" + key + "'", lineno);
            }
        } catch (const ParseError&) {
            throw;
        } catch (const Error& e) {
            throw ParseError(e.what(), lineno);
        }
    }
    if (spec.ns.empty()) throw ParseError("sweep needs an 'n' line", 0);
    if (spec.ks.empty()) throw ParseError("sweep needs a 'k' line", 0);
    return spec;
}

inline SweepSpec parse_sweep(const std::string& path) {
    auto in = detail::open_input(path);
    return parse_sweep(in);
}

struct SweepConfig {
    int n;
    int k;
    Metric metric;
    CenterKind kind;
    Algorithm algorithm;
    double cutoff;
};

/// Configurations in output order. CG ignores the cutoff and appears once.
inline std::vector<SweepConfig> expand_sweep(const SweepSpec& spec) {
    std::vector<SweepConfig> out;
    for (int n : spec.ns)
        for (const KRule& rule : spec.ks) {
            const int k = rule.resolve(n);
            if (k < 1 || std::int64_t(k) > std::int64_t(n) * n)
                throw Error("k = " + std::to_string(k) + " does not fit an n = " + std::to_string(n) + " grid");
            for (Metric m : spec.metrics)
                for (CenterKind kind : spec.kinds)
                    for (Algorithm a : spec.algorithms) {
                        if (a == Algorithm::CG) {
                            out.push_back({n, k, m, kind, a, 0.0});
                            continue;
                        }
                        for (double c : spec.cutoffs) out.push_back({n, k, m, kind, a, c});
                    }
        }
    return out;
}

inline BenchRow mean_row(const std::vector<BenchRow>& rows) {
    BenchRow m = rows.front();
    m.seed = "mean";
    m.time_total = m.time_circle = m.time_endgame = 0.0;
    double sites = 0, centers = 0, pairs = 0, alpha = 0, queries = 0, traversal = 0, pushes = 0;
    for (const BenchRow& r : rows) {
        m.time_total += r.time_total;
        m.time_circle += r.time_circle;
        m.time_endgame += r.time_endgame;
        sites += double(r.handoff_sites);
        centers += double(r.handoff_centers);
        pairs += double(r.pairs_generated);
        alpha += double(r.alpha);
        queries += double(r.nn_queries);
        traversal += double(r.presort_traversal);
        pushes += double(r.heap_pushes);
    }
    const double count = double(rows.size());
    m.time_total /= count;
    m.time_circle /= count;
    m.time_endgame /= count;
    m.handoff_sites = std::int64_t(std::llround(sites / count));
    m.handoff_centers = std::int64_t(std::llround(centers / count));
    m.pairs_generated = std::uint64_t(std::llround(pairs / count));
    m.alpha = std::uint64_t(std::llround(alpha / count));
    m.nn_queries = std::uint64_t(std::llround(queries / count));
    m.presort_traversal = std::uint64_t(std::llround(traversal / count));
    m.heap_pushes = std::uint64_t(std::llround(pushes / count));
    m.assignment_hash = 0;
    return m;
}

/// Runs every (configuration, seed) pair on `jobs` worker threads and
/// returns rows in spec order, each configuration followed by its mean.
inline std::vector<BenchRow> run_sweep(const SweepSpec& spec, unsigned jobs = 1) {
    const auto configs = expand_sweep(spec);
    std::map<std::pair<int, Metric>, SortedOffsets> offsets;
    for (const auto& c : configs)
        if (!offsets.contains({c.n, c.metric})) offsets.emplace(std::pair{c.n, c.metric}, SortedOffsets(c.n, c.metric));

    const std::size_t per_config = spec.seeds.size();
    const std::size_t total = configs.size() * per_config;
    std::vector<BenchRow> results(total);
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;

    auto worker = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < total;) {
            try {
                const SweepConfig& c = configs[i / per_config];
                const std::uint64_t seed = spec.seeds[i % per_config];
                const Instance inst = random_instance(c.n, c.k, c.metric, c.kind, seed);
                HybridConfig hc;
                hc.algorithm = c.algorithm;
                hc.cutoff = c.cutoff;
                hc.ratio = spec.ratio;
                hc.pair_budget = spec.pair_budget;
                BenchRow row = run_hybrid(inst, offsets.at({c.n, c.metric}), hc).row;
                row.seed = std::to_string(seed);
                results[i] = std::move(row);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next = total;
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < std::max(1u, jobs); ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);

    std::vector<BenchRow> out;
    out.reserve(total + configs.size());
    for (std::size_t c = 0; c < configs.size(); ++c) {
        const std::vector<BenchRow> group(results.begin() + std::ptrdiff_t(c * per_config),
                                          results.begin() + std::ptrdiff_t((c + 1) * per_config));
        out.insert(out.end(), group.begin(), group.end());
        out.push_back(mean_row(group));
    }
    return out;
}

inline void write_bench_csv(std::ostream& out, const std::vector<BenchRow>& rows) {
    out << kBenchCsvHeader << '\n';
    for (const BenchRow& r : rows) {
        write_csv_row(out, r);
        out << '\n';
    }
}

} // namespace gridmatch
