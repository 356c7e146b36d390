#include <doctest.h>

#include <random>
#include <vector>

#include "molmom/bench.hpp"
#include "molmom/pipeline.hpp"
#include "support.hpp"

using namespace molmom;

TEST_CASE("allocation tracking sees heap growth") {
    alloc_tracking::reset_peak();
    const auto before = alloc_tracking::current_bytes();
    {
        std::vector<double> big(1 << 16);
        big[7] = 1;
        CHECK(alloc_tracking::current_bytes() >= before + big.size() * sizeof(double));
    }
    CHECK(alloc_tracking::peak_bytes() >= before + (1 << 16) * sizeof(double));
    CHECK(alloc_tracking::current_bytes() == before);
}

TEST_CASE("bench reports all five families with positive timings") {
    std::mt19937_64 rng(1);
    const auto grid = testing::random_binary_grid(16, rng, 0.2);
    BenchOptions opt;
    opt.repeats = 3;
    const auto res = run_bench({grid}, opt);
    REQUIRE(res.size() == 5);
    for (std::size_t i = 0; i < res.size(); ++i) {
        CHECK(res[i].family == kAllFamilies[i]);
        CHECK(res[i].runs == 3);
        CHECK(res[i].compute.median_ns_per_voxel > 0);
        CHECK(res[i].compute.min_ns_per_voxel <= res[i].compute.median_ns_per_voxel);
        CHECK(res[i].compute.median_ns_per_voxel <= res[i].compute.max_ns_per_voxel);
        CHECK(res[i].peak_bytes_per_voxel > 0);
        CHECK(res[i].voxels == grid.size());
    }
    CHECK(res[4].setup.median_ns_per_voxel > 0);
    const auto csv = bench_report_csv(res, opt.repeats);
    CHECK(csv.rfind("# machine-dependent", 0) == 0);
    for (Family f : kAllFamilies) CHECK(csv.find(std::string(family_name(f)) + ",compute,3,") != std::string::npos);
}

TEST_CASE("repeat count defaults to 50") {
    CHECK(BenchOptions{}.repeats == 50);
    CHECK(RunConfig{}.repeats == 50);
    std::mt19937_64 rng(2);
    BenchOptions opt;
    opt.families = {Family::geometric};
    const auto res = run_bench({testing::random_binary_grid(8, rng)}, opt);
    CHECK(res[0].runs == 50);
}

TEST_CASE("per-voxel geometric time stays within 3x when n doubles") {
    // Bound fixed after profiling: the separable contraction costs O(n^3 R) and
    // measured ratios between n = 32 and n = 64 sit near 1.
    std::mt19937_64 rng(3);
    BenchOptions opt;
    opt.families = {Family::geometric};
    opt.repeats = 15;
    const auto small = run_bench({testing::random_binary_grid(32, rng, 0.3)}, opt);
    const auto large = run_bench({testing::random_binary_grid(64, rng, 0.3)}, opt);
    const double ratio = large[0].compute.median_ns_per_voxel / small[0].compute.median_ns_per_voxel;
    MESSAGE("ns/voxel n=32: " << small[0].compute.median_ns_per_voxel
                              << ", n=64: " << large[0].compute.median_ns_per_voxel << ", ratio " << ratio);
    CHECK(ratio < 3.0);
    CHECK(ratio > 1.0 / 3.0);
}

TEST_CASE("bench rejects empty input") {
    CHECK_THROWS(run_bench({}, BenchOptions{}));
}
