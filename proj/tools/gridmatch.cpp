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

// gridmatch: command-line front end for the stable grid matchers.

#include <gridmatch/gridmatch.hpp>

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <string>

using namespace gridmatch;

namespace {

double parse_cutoff_flag(const std::string& s) {
    if (s == "inf") return std::numeric_limits<double>::infinity();
    std::size_t used = 0;
    double v = 0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != s.size() || !(v >= 0.0)) throw Error("--cutoff expects a number >= 0 or 'inf', got '" + s + "'");
    return v;
}

CutoffRatio parse_ratio_flag(const std::string& s) {
    if (s == "pairs") return CutoffRatio::SitesTimesCenters;
    if (s == "sites") return CutoffRatio::Sites;
    throw Error("--ratio expects 'pairs' or 'sites'");
}

std::ofstream open_text(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write '" + path + "'");
    return out;
}

struct MatchArgs {
    std::string instance, algo = "PH_LL", cutoff = "0.15", ratio = "pairs", ppm, report, assignment;
    std::uint64_t budget = kDefaultPairBudget;
};

int cmd_match(const MatchArgs& args) {
    const Instance inst = read_instance(args.instance);
    HybridConfig config;
    config.algorithm = parse_algorithm(args.algo);
    config.cutoff = parse_cutoff_flag(args.cutoff);
    config.ratio = parse_ratio_flag(args.ratio);
    config.pair_budget = args.budget;
    const HybridResult r = run_hybrid(inst, SortedOffsets(inst.n(), inst.metric()), config);
    BenchRow row = r.row;
    row.seed = "-";
    if (!args.report.empty()) {
        auto out = open_text(args.report);
        write_bench_csv(out, {row});
    } else {
        std::cout << kBenchCsvHeader << '\n';
        write_csv_row(std::cout, row);
        std::cout << '\n';
    }
    const Assignment a = r.assignment();
    if (!args.assignment.empty()) write_assignment(args.assignment, a);
    if (!args.ppm.empty()) render(a, inst.centers(), args.ppm);
    return 0;
}

struct KMeansArgs {
    int n = 0, k = 0, max_iters = 200;
    double p = 0.0;
    std::string metric = "l2", report, frames, ppm;
    std::uint64_t seed = 1;
    bool verify = false;
};

int cmd_kmeans(const KMeansArgs& args) {
    KMeansOptions options;
    options.max_iters = args.max_iters;
    options.verify = args.verify;
    if (!args.frames.empty()) {
        std::filesystem::create_directories(args.frames);
        options.on_iteration = [&](int it, const Instance& inst, const Assignment& a) {
            char name[32];
            std::snprintf(name, sizeof name, "frame_%04d.ppm", it);
            render(a, inst.centers(), (std::filesystem::path(args.frames) / name).string());
        };
    }
    const KMeansRun run =
        stable_kmeans(args.n, args.k, parse_metric(args.metric), CentroidWeighting{args.p}, args.seed, options);
    if (!args.report.empty()) {
        auto out = open_text(args.report);
        write_kmeans_csv(out, run);
    }
    if (!args.ppm.empty()) render(run.final_assignment, run.iterations.back().centers, args.ppm);
    std::cout << "status " << to_string(run.status) << ", iterations " << run.iterations.size() << ", components "
              << components_histogram(run.final_components) << '\n';
    if (args.verify)
        for (std::size_t i = 0; i < run.iterations.size(); ++i)
            if (!*run.iterations[i].stable || !*run.iterations[i].quotas_ok) {
                std::cerr << "iteration " << i << " failed verification\n";
                return 1;
            }
    return 0;
}

int cmd_bench(const std::string& spec_path, const std::string& out_path, unsigned jobs) {
    const SweepSpec spec = parse_sweep(spec_path);
    const auto rows = run_sweep(spec, jobs);
    if (out_path.empty()) {
        write_bench_csv(std::cout, rows);
    } else {
        auto out = open_text(out_path);
        write_bench_csv(out, rows);
    }
    return 0;
}

int cmd_verify(const std::string& instance_path, const std::string& assignment_path) {
    const Instance inst = read_instance(instance_path);
    const Assignment a = read_assignment(assignment_path);
    if (a.n != inst.n() || a.k != inst.k()) {
        std::cerr << "assignment is for n=" << a.n << " k=" << a.k << ", instance has n=" << inst.n()
                  << " k=" << inst.k() << '\n';
        return 1;
    }
    const bool quotas = verify_quotas(a, inst);
    const auto blocking = verify_stability(a, inst);
    for (std::size_t i = 0; i < blocking.size() && i < 10; ++i)
        std::cerr << "blocking pair: pixel (" << inst.grid().x_of(blocking[i].pixel) << ", "
                  << inst.grid().y_of(blocking[i].pixel) << ") center " << blocking[i].center << '\n';
    if (!quotas) std::cerr << "region sizes do not match the quotas\n";
    std::cout << (quotas && blocking.empty() ? "stable" : "unstable") << ": " << blocking.size()
              << " blocking pairs, quotas " << (quotas ? "ok" : "violated") << '\n';
    return quotas && blocking.empty() ? 0 : 1;
}

int cmd_generate(int n, int k, const std::string& metric, const std::string& kind, std::uint64_t seed,
                 const std::string& out_path) {
    const Instance inst = random_instance(n, k, parse_metric(metric), parse_center_kind(kind), seed);
    if (out_path.empty()) {
        write_instance(std::cout, inst);
    } else {
        auto out = open_text(out_path);
        write_instance(out, inst);
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Stable assignment of grid pixels to capacitated centers"};
    app.require_subcommand(1);
    int status = 0;

    MatchArgs m;
    auto* match = app.add_subcommand("match", "Match one instance file");
    match->add_option("--instance", m.instance, "Instance file")->required();
    match->add_option("--algo", m.algo, "CG, PS, PH_EP, PH_EL, PH_LP, PH_LL, NNC or ORACLE")->capture_default_str();
    match->add_option("--cutoff", m.cutoff, "Hand-off ratio, a number >= 0 or inf")->capture_default_str();
    match->add_option("--ratio", m.ratio, "Cutoff numerator: pairs (sites x centers) or sites")->capture_default_str();
    match->add_option("--budget", m.budget, "Maximum pairs held by pair sort / presort")->capture_default_str();
    match->add_option("--out-ppm", m.ppm, "Write the region map as binary PPM");
    match->add_option("--report", m.report, "Write the run as a one-row CSV (default: stdout)");
    match->add_option("--out-assignment", m.assignment, "Write the assignment");
    match->callback([&] { status = cmd_match(m); });

    KMeansArgs km;
    auto* kmeans = app.add_subcommand("kmeans", "Stable k-means with weighted centroids");
    kmeans->add_option("--n", km.n, "Grid side")->required();
    kmeans->add_option("--k", km.k, "Number of centers")->required();
    kmeans->add_option("--p", km.p, "Centroid weight exponent")->capture_default_str();
    kmeans->add_option("--metric", km.metric, "l2, l1 or linf")->capture_default_str();
    kmeans->add_option("--seed", km.seed, "Seed for the initial centers")->capture_default_str();
    kmeans->add_option("--max-iters", km.max_iters, "Iteration limit")->capture_default_str();
    kmeans->add_option("--report", km.report, "Per-iteration CSV");
    kmeans->add_option("--frames", km.frames, "Directory for one PPM per iteration");
    kmeans->add_option("--out-ppm", km.ppm, "Final region map");
    kmeans->add_flag("--verify", km.verify, "Check stability and quotas every iteration");
    kmeans->callback([&] { status = cmd_kmeans(km); });

    std::string spec, bench_out;
    unsigned jobs = 1;
    auto* bench = app.add_subcommand("bench", "Run a benchmark sweep");
    bench->add_option("--spec", spec, "Sweep spec file")->required();
    bench->add_option("--out", bench_out, "CSV output (default: stdout)");
    bench->add_option("--jobs", jobs, "Worker threads")->capture_default_str();
    bench->callback([&] { status = cmd_bench(spec, bench_out, jobs); });

    std::string v_instance, v_assignment;
    auto* verify = app.add_subcommand("verify", "Check an assignment for blocking pairs and quotas");
    verify->add_option("--instance", v_instance, "Instance file")->required();
    verify->add_option("--assignment", v_assignment, "Assignment file")->required();
    verify->callback([&] { status = cmd_verify(v_instance, v_assignment); });

    int g_n = 0, g_k = 0;
    std::string g_metric = "l2", g_kind = "int", g_out;
    std::uint64_t g_seed = 1;
    auto* generate = app.add_subcommand("generate", "Write a random instance");
    generate->add_option("--n", g_n, "Grid side")->required();
    generate->add_option("--k", g_k, "Number of centers")->required();
    generate->add_option("--metric", g_metric, "l2, l1 or linf")->capture_default_str();
    generate->add_option("--kind", g_kind, "int or real")->capture_default_str();
    generate->add_option("--seed", g_seed, "Seed")->capture_default_str();
    generate->add_option("--out", g_out, "Output file (default: stdout)");
    generate->callback([&] { status = cmd_generate(g_n, g_k, g_metric, g_kind, g_seed, g_out); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "gridmatch: " << e.what() << '\n';
        return 2;
    }
    return status;
}
