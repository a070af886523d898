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

#include <gridmatch/hybrid.hpp>
#include <gridmatch/io.hpp>
#include <gridmatch/random.hpp>
#include <gridmatch/render.hpp>
#include <gridmatch/verify.hpp>

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>

using namespace gridmatch;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / ("gridmatch_" + name)).string();
}

} // namespace

TEST(InstanceFormat, ReadsIntegerAndRealCenters) {
    std::istringstream in("# two centers\n5 2 l1 real\n0.5 1.25  # first\n\n4 3.999\n");
    const Instance inst = read_instance(in);
    EXPECT_EQ(inst.n(), 5);
    EXPECT_EQ(inst.k(), 2);
    EXPECT_EQ(inst.metric(), Metric::L1);
    EXPECT_EQ(inst.kind(), CenterKind::Real);
    EXPECT_EQ(inst.center(1), (Point{4, 3.999}));
}

TEST(InstanceFormat, RoundTrips) {
    for (CenterKind kind : {CenterKind::Integer, CenterKind::Real}) {
        const Instance inst = random_instance(17, 6, Metric::Linf, kind, 4);
        std::stringstream buf;
        write_instance(buf, inst);
        const Instance back = read_instance(buf);
        EXPECT_EQ(back.centers(), inst.centers());
        EXPECT_EQ(back.kind(), kind);
        EXPECT_EQ(back.metric(), Metric::Linf);
    }
}

TEST(InstanceFormat, Errors) {
    const auto line_of = [](const std::string& text) {
        std::istringstream in(text);
        try {
            read_instance(in);
        } catch (const ParseError& e) {
            return e.line();
        }
        return -1;
    };
    EXPECT_EQ(line_of("4 2 l2 int\n0 0\n"), 2);
    EXPECT_EQ(line_of("4 1 l5 int\n0 0\n"), 1);
    EXPECT_EQ(line_of("4 1 l2 int\n0 x\n"), 2);
    EXPECT_EQ(line_of("4 2 l2 int\n0 0\n\n4 0\n"), 4) << "outside the grid";
    EXPECT_EQ(line_of("4 1 l2 int\n0.5 0\n"), 2) << "not a lattice point";
    EXPECT_EQ(line_of(""), 0);
}

TEST(AssignmentFormat, RoundTripsAndValidates) {
    const Instance inst = random_instance(9, 4, Metric::L2, CenterKind::Integer, 1);
    const Assignment a = greedy_oracle(inst);
    std::stringstream buf;
    write_assignment(buf, a);
    EXPECT_EQ(read_assignment(buf), a);

    std::istringstream short_file("2 1\n0\n0\n0\n");
    EXPECT_THROW(read_assignment(short_file), ParseError);
    std::istringstream bad_id("1 1\n3\n");
    EXPECT_THROW(read_assignment(bad_id), ParseError);
}

TEST(Render, SinglePixelIsBlackCenter) {
    const std::string path = temp_path("one.ppm");
    const Instance inst(1, Metric::L2, CenterKind::Integer, {{0, 0}});
    render(greedy_oracle(inst), inst.centers(), path);
    EXPECT_EQ(slurp(path), std::string("P6\n1 1\n255\n") + std::string(3, '\0'));
}

TEST(Render, HeaderAndPalette) {
    const Instance inst(3, Metric::L2, CenterKind::Real, {{0.4, 0.4}, {2.2, 2.3}});
    const Assignment a = greedy_oracle(inst);
    std::ostringstream out;
    write_ppm(out, a, inst.centers());
    const std::string img = out.str();
    const std::string header = "P6\n3 3\n255\n";
    ASSERT_EQ(img.size(), header.size() + 27);
    EXPECT_EQ(img.substr(0, header.size()), header);
    // Pixel (1, 0) belongs to center 0 and is not over-plotted.
    EXPECT_EQ(a.owner[1], 0);
    const Rgb c0 = palette_color(0);
    EXPECT_EQ(img.substr(header.size() + 3, 3), std::string(c0.begin(), c0.end()));
    EXPECT_EQ(c0, (Rgb{255, 0, 0}));
    EXPECT_NE(palette_color(1), palette_color(2));
}

TEST(Render, DeterministicBytes) {
    const std::string p1 = temp_path("a.ppm"), p2 = temp_path("b.ppm");
    for (const std::string& p : {p1, p2}) {
        const Instance inst = random_instance(64, 12, Metric::L2, CenterKind::Real, 99);
        HybridConfig config;
        const HybridResult r = run_hybrid(inst, SortedOffsets(64, Metric::L2), config);
        render(r.assignment(), inst.centers(), p);
    }
    EXPECT_EQ(slurp(p1), slurp(p2));
}

TEST(Render, UnwritablePath) {
    const Instance inst(1, Metric::L2, CenterKind::Integer, {{0, 0}});
    EXPECT_THROW(render(greedy_oracle(inst), inst.centers(), "/nonexistent-dir/x.ppm"), Error);
}
