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

#include <gridmatch/bench.hpp>
#include <gridmatch/hybrid.hpp>
#include <gridmatch/random.hpp>
#include <gridmatch/verify.hpp>

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

using namespace gridmatch;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

HybridResult run(const Instance& inst, Algorithm a, double cutoff) {
    HybridConfig config;
    config.algorithm = a;
    config.cutoff = cutoff;
    return run_hybrid(inst, SortedOffsets(inst.n(), inst.metric()), config);
}

} // namespace

TEST(CutoffRule, Thresholds) {
    const Instance inst = random_instance(10, 4, Metric::L2, CenterKind::Integer, 1);
    MatchState s(inst);
    EXPECT_FALSE((CutoffRule{0.0, CutoffRatio::SitesTimesCenters}(s)));
    EXPECT_TRUE((CutoffRule{kInf, CutoffRatio::SitesTimesCenters}(s)));
    EXPECT_FALSE((CutoffRule{1e9, CutoffRatio::SitesTimesCenters}(s))) << "nothing generated yet";
    s.counters.pairs_generated = 4000;
    // 100 sites * 4 centers / 4000 = 0.1; 100 / 4000 = 0.025
    EXPECT_TRUE((CutoffRule{0.1, CutoffRatio::SitesTimesCenters}(s)));
    EXPECT_FALSE((CutoffRule{0.09, CutoffRatio::SitesTimesCenters}(s)));
    EXPECT_TRUE((CutoffRule{0.025, CutoffRatio::Sites}(s)));
    EXPECT_FALSE((CutoffRule{0.02, CutoffRatio::Sites}(s)));
}

TEST(Hybrid, ZeroCutoffIsPureCircleGrowing) {
    const Instance inst = random_instance(50, 40, Metric::L2, CenterKind::Integer, 3);
    const HybridResult cg = run(inst, Algorithm::CG, 0.0);
    for (Algorithm a : kBenchAlgorithms) {
        const HybridResult r = run(inst, a, 0.0);
        EXPECT_EQ(r.assignment(), cg.assignment());
        EXPECT_EQ(r.row.handoff_sites, 0);
        EXPECT_EQ(r.row.pairs_generated, cg.row.pairs_generated);
    }
}

TEST(Hybrid, InfiniteCutoffSkipsCircleGrowing) {
    const Instance inst = random_instance(30, 20, Metric::L1, CenterKind::Real, 4);
    const Assignment cg = run(inst, Algorithm::CG, 0.0).assignment();
    for (Algorithm a : {Algorithm::PS, Algorithm::PH_EP, Algorithm::PH_EL, Algorithm::PH_LP, Algorithm::PH_LL,
                        Algorithm::NNC}) {
        const HybridResult r = run(inst, a, kInf);
        EXPECT_EQ(r.row.pairs_generated, 0u);
        EXPECT_EQ(r.row.handoff_sites, 900);
        EXPECT_EQ(r.assignment(), cg) << to_string(a);
    }
}

TEST(Hybrid, CutoffInvariance) {
    for (CenterKind kind : {CenterKind::Integer, CenterKind::Real}) {
        const Instance inst = random_instance(64, 200, Metric::L2, kind, 12);
        const Assignment expected = run(inst, Algorithm::CG, 0.0).assignment();
        EXPECT_TRUE(verify_stability(expected, inst).empty());
        for (double cutoff : {0.05, 0.15, 0.6, 5.0})
            for (Algorithm a : kBenchAlgorithms) EXPECT_EQ(run(inst, a, cutoff).assignment(), expected);
    }
}

TEST(Hybrid, OracleAlgorithmLabel) {
    const Instance inst = random_instance(6, 3, Metric::Linf, CenterKind::Real, 2);
    const HybridResult r = run(inst, Algorithm::Oracle, 0.15);
    EXPECT_EQ(r.assignment(), greedy_oracle(inst));
    EXPECT_EQ(parse_algorithm("ORACLE"), Algorithm::Oracle);
    EXPECT_EQ(parse_algorithm("PH_LL"), Algorithm::PH_LL);
    EXPECT_THROW(parse_algorithm("PH"), Error);
}

TEST(BenchCsv, FixedColumnsAndLocaleFreeNumbers) {
    BenchRow row;
    row.n = 100;
    row.k = 1000;
    row.algorithm = Algorithm::PH_LL;
    row.cutoff = 0.15;
    row.seed = "3";
    row.time_total = 1.5;
    row.alpha = 42;
    row.assignment_hash = 0xabc;
    std::ostringstream out;
    write_csv_row(out, row);
    EXPECT_EQ(out.str(), "100,1000,l2,int,PH_LL,0.15,3,1.500000,0.000000,0.000000,0,0,0,42,0,0,0,abc");
    row.cutoff = kInf;
    std::ostringstream out2;
    write_csv_row(out2, row);
    EXPECT_NE(out2.str().find(",inf,"), std::string::npos);
    // Same number of fields as the header.
    const auto fields = [](const std::string& s) { return std::count(s.begin(), s.end(), ','); };
    EXPECT_EQ(fields(out.str()), fields(std::string(kBenchCsvHeader)));
}

TEST(Sweep, ParsesAllKeys) {
    std::istringstream in(R"(# sweep
n = 100 200
k = 1000 10n   # absolute and per-n
metric = l2 linf
centers = int real
algos = CG PH_LL
cutoffs = 0 0.15 inf
seeds = 1..3 9
ratio = sites
budget = 5000
)");
    const SweepSpec spec = parse_sweep(in);
    EXPECT_EQ(spec.ns, (std::vector<int>{100, 200}));
    ASSERT_EQ(spec.ks.size(), 2u);
    EXPECT_EQ(spec.ks[1].resolve(200), 2000);
    EXPECT_EQ(spec.metrics.size(), 2u);
    EXPECT_EQ(spec.kinds.size(), 2u);
    EXPECT_EQ(spec.algorithms, (std::vector<Algorithm>{Algorithm::CG, Algorithm::PH_LL}));
    EXPECT_TRUE(std::isinf(spec.cutoffs[2]));
    EXPECT_EQ(spec.seeds, (std::vector<std::uint64_t>{1, 2, 3, 9}));
    EXPECT_EQ(spec.ratio, CutoffRatio::Sites);
    EXPECT_EQ(spec.pair_budget, 5000u);
    // 2 n * 2 k * 2 metrics * 2 kinds * (CG + 3 cutoffs of PH_LL)
    EXPECT_EQ(expand_sweep(spec).size(), 64u);
}

TEST(Sweep, ErrorsCarryLineNumbers) {
    const auto line_of = [](const std::string& text) {
        std::istringstream in(text);
        try {
            parse_sweep(in);
        } catch (const ParseError& e) {
            return e.line();
        }
        return -1;
    };
    EXPECT_EQ(line_of("n = 10\nk = 5\nalgos = CG XX\n"), 3);
    EXPECT_EQ(line_of("n = 10\n\n# c\nk = five\n"), 4);
    EXPECT_EQ(line_of("n = 10\nk 5\n"), 2);
    EXPECT_EQ(line_of("n = 10\nk = 5\nmetric = l3\n"), 3);
    EXPECT_EQ(line_of("n = 10\nk = 5\ncutoffs = -1\n"), 3);
    EXPECT_EQ(line_of("n = 10\nk = 5\ncolour = red\n"), 3);
    EXPECT_EQ(line_of("n = 10\n"), 0) << "missing k";
}

TEST(Sweep, AllAlgorithmsTenSeedsGivesSeventyRowsPlusMeans) {
    std::istringstream in("n = 100\nk = 1000\nalgos = all\nseeds = 1..10\n");
    const auto rows = run_sweep(parse_sweep(in));
    ASSERT_EQ(rows.size(), 77u);
    int means = 0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].seed == "mean") {
            ++means;
            EXPECT_EQ(i % 11, 10u);
        }
    }
    EXPECT_EQ(means, 7);
    // Every algorithm reaches the same assignment for a given seed.
    for (std::size_t s = 0; s < 10; ++s)
        for (std::size_t a = 1; a < 7; ++a) EXPECT_EQ(rows[a * 11 + s].assignment_hash, rows[s].assignment_hash);
}

TEST(Sweep, ParallelWorkersGiveSameRows) {
    std::istringstream in("n = 40\nk = 2n\ncenters = int real\nalgos = CG PH_LL NNC\nseeds = 1..4\n");
    const SweepSpec spec = parse_sweep(in);
    const auto serial = run_sweep(spec, 1);
    const auto parallel = run_sweep(spec, 3);
    ASSERT_EQ(serial.size(), parallel.size());
    for (std::size_t i = 0; i < serial.size(); ++i) {
        EXPECT_EQ(serial[i].seed, parallel[i].seed);
        EXPECT_EQ(serial[i].assignment_hash, parallel[i].assignment_hash);
        EXPECT_EQ(serial[i].pairs_generated, parallel[i].pairs_generated);
        EXPECT_EQ(serial[i].alpha, parallel[i].alpha);
    }
}
