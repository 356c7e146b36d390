#include "molmom/bench.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <sstream>

#include "molmom/error.hpp"

namespace molmom {
namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ns(Clock::time_point t0, Clock::time_point t1) {
    return std::chrono::duration<double, std::nano>(t1 - t0).count();
}

double quantile(std::vector<double> v, double q) {
    std::sort(v.begin(), v.end());
    const double pos = q * static_cast<double>(v.size() - 1);
    const auto lo = static_cast<std::size_t>(pos);
    const std::size_t hi = std::min(lo + 1, v.size() - 1);
    return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

PhaseStats summarize(const std::vector<double>& samples) {
    PhaseStats s;
    if (samples.empty()) return s;
    s.median_ns_per_voxel = quantile(samples, 0.5);
    s.min_ns_per_voxel = *std::min_element(samples.begin(), samples.end());
    s.max_ns_per_voxel = *std::max_element(samples.begin(), samples.end());
    s.iqr_ns_per_voxel = quantile(samples, 0.75) - quantile(samples, 0.25);
    return s;
}

// Keeps results observable so the optimiser cannot drop the work.
volatile double g_sink = 0;

void consume(const MomentSet& m) {
    if (!m.values.empty()) g_sink = g_sink + m.values.front().real();
}

MomentSet compute_plain(const VoxelGrid& grid, Family f, int max_order) {
    switch (f) {
        case Family::geometric: return geometric_moments(grid, max_order);
        case Family::complex: return complex_moments_3d(grid, max_order);
        case Family::legendre: return legendre_moments_3d(grid, max_order);
        case Family::zernike: return zernike_moments_3d(grid, max_order);
        case Family::hahn: break;
    }
    throw DomainError("no plain path for family " + std::string(family_name(f)));
}

std::string fmt(double v) {
    char buf[64];
    auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 6);
    return std::string(buf, r.ptr);
}

}  // namespace

std::vector<FamilyBench> run_bench(const std::vector<VoxelGrid>& grids, const BenchOptions& opt) {
    if (grids.empty()) throw DomainError("bench needs at least one grid");
    if (opt.repeats < 1) throw DomainError("repeats must be >= 1");

    std::vector<FamilyBench> out;
    for (Family f : opt.families) {
        FamilyBench fb;
        fb.family = f;
        std::vector<double> setup, compute;
        double peak_per_voxel = 0;
        for (const VoxelGrid& g : grids) {
            const auto voxels = static_cast<double>(g.values().size());
            fb.voxels += g.values().size();
            const int hahn_order = std::min(opt.max_order, static_cast<int>(g.n()) - 1);
            const HahnParams hp{opt.hahn_mu, opt.hahn_nu, static_cast<int>(g.n())};

            // Memory: one untimed full run from a clean baseline.
            const std::size_t base = alloc_tracking::current_bytes();
            alloc_tracking::reset_peak();
            if (f == Family::hahn) {
                const auto table = HahnBasisTable::direct(hp, hahn_order);
                consume(hahn_moments_3d(g, hahn_order, table));
            } else {
                consume(compute_plain(g, f, opt.max_order));
            }
            peak_per_voxel = std::max(
                peak_per_voxel, static_cast<double>(alloc_tracking::peak_bytes() - base) / voxels);

            for (int r = 0; r < opt.repeats; ++r) {
                if (f == Family::hahn) {
                    const auto t0 = Clock::now();
                    const auto table = HahnBasisTable::direct(hp, hahn_order);
                    const auto t1 = Clock::now();
                    consume(hahn_moments_3d(g, hahn_order, table));
                    const auto t2 = Clock::now();
                    setup.push_back(elapsed_ns(t0, t1) / voxels);
                    compute.push_back(elapsed_ns(t1, t2) / voxels);
                } else {
                    const auto t0 = Clock::now();
                    consume(compute_plain(g, f, opt.max_order));
                    const auto t1 = Clock::now();
                    setup.push_back(0.0);
                    compute.push_back(elapsed_ns(t0, t1) / voxels);
                }
            }
        }
        fb.runs = compute.size();
        fb.setup = summarize(setup);
        fb.compute = summarize(compute);
        fb.peak_bytes_per_voxel = peak_per_voxel;
        out.push_back(fb);
    }
    return out;
}

std::string bench_report_csv(const std::vector<FamilyBench>& results, int repeats) {
    std::ostringstream os;
    os << "# machine-dependent timings; repeats=" << repeats
       << "; memory = allocator peak above baseline during one run / voxels\n";
    os << "family,phase,runs,median_ns_per_voxel,min_ns_per_voxel,max_ns_per_voxel,iqr_ns_per_voxel,"
          "peak_bytes_per_voxel\n";
    for (const auto& r : results) {
        for (int phase = 0; phase < 2; ++phase) {
            const PhaseStats& s = phase == 0 ? r.setup : r.compute;
            os << family_name(r.family) << ',' << (phase == 0 ? "setup" : "compute") << ',' << r.runs << ','
               << fmt(s.median_ns_per_voxel) << ',' << fmt(s.min_ns_per_voxel) << ','
               << fmt(s.max_ns_per_voxel) << ',' << fmt(s.iqr_ns_per_voxel) << ','
               << fmt(r.peak_bytes_per_voxel) << '\n';
        }
    }
    return os.str();
}

}  // namespace molmom
