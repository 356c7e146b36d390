#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "molmom/moments.hpp"
#include "molmom/voxel.hpp"

namespace molmom {

// Allocation accounting through the replaced global operator new/delete that
// ships in the same library; every binary linking it is instrumented.
namespace alloc_tracking {
std::size_t current_bytes() noexcept;
std::size_t peak_bytes() noexcept;
void reset_peak() noexcept;  // peak := current
}  // namespace alloc_tracking

struct PhaseStats {
    double median_ns_per_voxel = 0;
    double min_ns_per_voxel = 0;
    double max_ns_per_voxel = 0;
    double iqr_ns_per_voxel = 0;
};

struct FamilyBench {
    Family family = Family::geometric;
    PhaseStats setup;    // basis-table construction (Hahn only; zero for the others)
    PhaseStats compute;  // moment evaluation with any table already built
    double peak_bytes_per_voxel = 0;  // allocator peak above baseline during one full run / n^3
    std::size_t voxels = 0;
    std::size_t runs = 0;  // timed runs pooled into the statistics
};

struct BenchOptions {
    std::vector<Family> families{std::begin(kAllFamilies), std::end(kAllFamilies)};
    int max_order = kFeatureOrder;
    int repeats = 50;
    double hahn_mu = 0.0;
    double hahn_nu = 0.0;
};

// Times every selected family on every grid; per-voxel figures are pooled over grids.
std::vector<FamilyBench> run_bench(const std::vector<VoxelGrid>& grids, const BenchOptions& opt);

// CSV with a leading comment stating that the figures are machine dependent.
std::string bench_report_csv(const std::vector<FamilyBench>& results, int repeats);

}  // namespace molmom
