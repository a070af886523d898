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

#include <gridmatch/circle_growing.hpp>
#include <gridmatch/random.hpp>
#include <gridmatch/verify.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

using namespace gridmatch;

namespace {

bool trace_nondecreasing(const Instance& inst, const MatchState& state) {
    for (std::size_t i = 1; i < state.trace.size(); ++i) {
        const auto [c0, p0] = state.trace[i - 1];
        const auto [c1, p1] = state.trace[i];
        if (inst.key(c1, p1) < inst.key(c0, p0)) return false;
    }
    return true;
}

} // namespace

TEST(IntegerCenters, SinglePixel) {
    const Instance inst(1, Metric::L2, CenterKind::Integer, {{0, 0}});
    const MatchState s = match_integer_centers(inst, SortedOffsets(1, Metric::L2));
    EXPECT_TRUE(s.complete());
    EXPECT_GE(s.counters.pairs_generated, 1u);
    EXPECT_EQ(s.owner(0), 0);
}

TEST(IntegerCenters, TwoByTwoEqualsOracle) {
    const Instance inst(2, Metric::L2, CenterKind::Integer, {{0, 0}, {1, 1}});
    EXPECT_EQ(match_integer_centers(inst, SortedOffsets(2, Metric::L2)).assignment(), greedy_oracle(inst));
}

TEST(IntegerCenters, RejectsRealCenters) {
    const Instance inst(4, Metric::L2, CenterKind::Real, {{0.5, 0.5}});
    EXPECT_THROW(match_integer_centers(inst, SortedOffsets(4, Metric::L2)), InstanceError);
}

TEST(IntegerCenters, RejectsMismatchedOffsets) {
    const Instance inst(4, Metric::L2, CenterKind::Integer, {{0, 0}});
    EXPECT_THROW(match_integer_centers(inst, SortedOffsets(5, Metric::L2)), InstanceError);
    EXPECT_THROW(match_integer_centers(inst, SortedOffsets(4, Metric::L1)), InstanceError);
}

TEST(IntegerCenters, ExhaustiveOracleEqualitySmallGrids) {
    for (Metric m : {Metric::L2, Metric::L1, Metric::Linf})
        for (int n = 1; n <= 9; ++n) {
            const SortedOffsets offsets(n, m);
            for (int k = 1; k <= std::min(n * n, 6); ++k)
                for (std::uint64_t seed = 0; seed < 4; ++seed) {
                    const Instance inst = random_instance(n, k, m, CenterKind::Integer, seed);
                    ASSERT_EQ(match_integer_centers(inst, offsets).assignment(), greedy_oracle(inst))
                        << "n=" << n << " k=" << k << " seed=" << seed;
                }
        }
}

TEST(IntegerCenters, PairsEmittedInKeyOrder) {
    const Instance inst = random_instance(20, 6, Metric::L1, CenterKind::Integer, 3);
    MatchState state(inst);
    state.tracing = true;
    grow_integer_centers(inst, SortedOffsets(20, Metric::L1), state);
    EXPECT_EQ(state.trace.size(), 400u);
    EXPECT_TRUE(trace_nondecreasing(inst, state));
}

TEST(IntegerCenters, PairsGeneratedBound) {
    const int n = 30;
    const Instance inst = random_instance(n, 9, Metric::L2, CenterKind::Integer, 8);
    const MatchState s = match_integer_centers(inst, SortedOffsets(n, Metric::L2));
    EXPECT_LE(s.counters.pairs_generated, std::uint64_t(2 * n - 1) * (2 * n - 1) * 9);
}

TEST(IntegerCenters, StableAtLargerScale) {
    const int n = 300;
    for (Metric m : {Metric::L2, Metric::L1, Metric::Linf}) {
        const Instance inst = random_instance(n, 50, m, CenterKind::Integer, 2024);
        const Assignment a = match_integer_centers(inst, SortedOffsets(n, m)).assignment();
        EXPECT_TRUE(verify_quotas(a, inst));
        EXPECT_TRUE(verify_stability(a, inst).empty());
    }
}

TEST(IntegerCenters, StopRuleLeavesAGreedyPrefix) {
    const Instance inst = random_instance(16, 5, Metric::L2, CenterKind::Integer, 1);
    const SortedOffsets offsets(16, Metric::L2);
    const auto stop_at_half = [](const MatchState& s) { return s.available_sites() <= 128; };
    const MatchState partial = match_integer_centers(inst, offsets, stop_at_half);
    EXPECT_FALSE(partial.complete());
    MatchState resumed = partial;
    grow_integer_centers(inst, offsets, resumed);
    const Assignment full = greedy_oracle(inst);
    EXPECT_EQ(resumed.assignment(), full);
    for (std::uint32_t p = 0; p < 256; ++p)
        if (!partial.site_available(p)) {
            EXPECT_EQ(partial.owner(p), full.owner[p]);
        }
}

TEST(RealCenters, Anchors) {
    const Instance inst(4, Metric::L2, CenterKind::Real, {{0.2, 0.7}, {3.8, 3.4}, {1.5, 2.0}});
    const RealCenterPrep prep = prepare_real_centers(inst);
    EXPECT_EQ(prep.anchor_x, (std::vector<int>{0, 3, 2}));
    EXPECT_EQ(prep.anchor_y, (std::vector<int>{1, 3, 2}));
    // (3.8, 3.4) is clamped to (3, 3): the largest offset.
    EXPECT_DOUBLE_EQ(prep.delta, std::sqrt(0.8 * 0.8 + 0.4 * 0.4));
}

TEST(RealCenters, IntegerCoordinatesMatchIntegerVariant) {
    for (Metric m : {Metric::L2, Metric::L1, Metric::Linf}) {
        const Instance ints = random_instance(24, 7, m, CenterKind::Integer, 77);
        const SortedOffsets offsets(24, m);
        const MatchState real = match_real_centers(ints.as_real(), offsets);
        EXPECT_EQ(prepare_real_centers(ints.as_real()).delta, 0.0);
        EXPECT_EQ(real.assignment(), match_integer_centers(ints, offsets).assignment());
    }
}

TEST(RealCenters, OracleEqualityFiftySeeds) {
    for (Metric m : {Metric::L2, Metric::L1, Metric::Linf}) {
        const SortedOffsets offsets(8, m);
        for (std::uint64_t seed = 0; seed < 50; ++seed) {
            const Instance inst = random_instance(8, 3, m, CenterKind::Real, seed);
            ASSERT_EQ(match_real_centers(inst, offsets).assignment(), greedy_oracle(inst)) << "seed " << seed;
        }
    }
}

TEST(RealCenters, ChunkInvariantHolds) {
    for (Metric m : {Metric::L2, Metric::L1, Metric::Linf}) {
        const SortedOffsets offsets(32, m);
        for (std::uint64_t seed = 0; seed < 5; ++seed) {
            const Instance inst = random_instance(32, 11, m, CenterKind::Real, seed);
            EXPECT_NO_THROW(match_real_centers(inst, offsets, NeverStop{}, GrowOptions{true}));
        }
    }
}

TEST(RealCenters, PairsEmittedInKeyOrder) {
    const Instance inst = random_instance(20, 6, Metric::L2, CenterKind::Real, 5);
    MatchState state(inst);
    state.tracing = true;
    grow_real_centers(inst, SortedOffsets(20, Metric::L2), state);
    EXPECT_TRUE(state.complete());
    EXPECT_TRUE(trace_nondecreasing(inst, state));
}

TEST(RealCenters, CentersNearTheUpperEdge) {
    const Instance inst(6, Metric::L2, CenterKind::Real, {{5.9, 5.9}, {5.6, 0.1}, {0.0, 5.99}});
    EXPECT_EQ(match_real_centers(inst, SortedOffsets(6, Metric::L2)).assignment(), greedy_oracle(inst));
}
