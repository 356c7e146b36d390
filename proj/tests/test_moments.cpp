#include <doctest.h>

#include <cmath>
#include <random>

#include "molmom/error.hpp"
#include "molmom/moments.hpp"
#include "support.hpp"

using namespace molmom;
using namespace molmom::testing;

namespace {

Complex get(const MomentSet& m, int i, int j, int k) {
    const auto v = m.find(i, j, k);
    REQUIRE(v.has_value());
    return *v;
}

VoxelGrid ones(std::size_t n) { return VoxelGrid(n, std::vector<double>(n * n * n, 1.0)); }

}  // namespace

TEST_CASE("monomial integral closed forms") {
    for (int a = -3; a <= 3; ++a) {
        CHECK(monomial_integral(0, a) == doctest::Approx(1.0));
        CHECK(monomial_integral(1, a) == doctest::Approx(double(a)));
    }
    CHECK(monomial_integral(2, 2) == doctest::Approx(49.0 / 12).epsilon(1e-15));
}

TEST_CASE("index enumerations give 165 features at order 8") {
    CHECK(cube_indices(8).size() == kFeatureCount);
    CHECK(spherical_indices(8).size() == kFeatureCount);
    std::size_t per_order = 0;
    for (int n = 0; n <= 8; ++n) per_order += std::size_t((n + 1) * (n + 2) / 2);
    CHECK(per_order == 165);
    CHECK(box_indices(3).size() == 64);
    const auto cube = cube_indices(2);
    CHECK(cube[1] == MomentIndex{0, 0, 1});
    CHECK(cube[3] == MomentIndex{1, 0, 0});
    const auto sph = spherical_indices(2);
    CHECK(sph[1] == MomentIndex{1, 1, -1});
    CHECK(sph[4] == MomentIndex{2, 0, 0});
}

TEST_CASE("single-voxel geometric moments") {
    VoxelGrid g(6);
    g.set(1, 2, 3, 1.0);  // 1-based coordinates (2, 3, 4)
    CHECK(get(geometric_moments(g, 3), 1, 1, 0).real() == doctest::Approx(6.0));
    CHECK(get(geometric_moments(g, 3, GeometricVariant::precise), 1, 1, 0).real() == doctest::Approx(6.0));
    CHECK(get(geometric_moments(g, 3), 0, 0, 2).real() == doctest::Approx(16.0));
    CHECK(get(geometric_moments(g, 3, GeometricVariant::precise), 0, 0, 2).real() ==
          doctest::Approx(16.0 + 1.0 / 12));
}

TEST_CASE("m_000 is the grid total in both variants") {
    std::mt19937_64 rng(1);
    const auto g = random_real_grid(7, rng);
    CHECK(get(geometric_moments(g, 2), 0, 0, 0).real() == doctest::Approx(g.total()));
    CHECK(get(geometric_moments(g, 2, GeometricVariant::precise), 0, 0, 0).real() == doctest::Approx(g.total()));
}

TEST_CASE("legendre moments of constant and L_2 fields") {
    const auto m = legendre_moments_3d(ones(10), 4);
    CHECK(get(m, 0, 0, 0).real() == doctest::Approx(1.0));
    CHECK(std::abs(get(m, 1, 0, 0).real()) < 1e-14);

    const std::size_t n = 64;
    VoxelGrid g(n);
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = 0; y < n; ++y)
            for (std::size_t z = 0; z < n; ++z) g.set(x, y, z, legendre(2, (2.0 * double(x) - double(n) + 1) / double(n)));
    const auto l2 = legendre_moments_3d(g, 2);
    // midpoint quadrature error of the L_2^2 integral is about 5 / n^2
    CHECK(std::abs(get(l2, 2, 0, 0).real() - 1.0) < 8.0 / (n * n));
    CHECK(std::abs(get(l2, 0, 0, 0).real()) < 8.0 / (n * n));
}

TEST_CASE("complex moments of a centred single voxel") {
    const std::size_t n = 9;
    VoxelGrid g(n);
    g.set(4, 4, 4, 2.0);
    const auto m = complex_moments_3d(g, 4);
    const double dv = std::pow(2.0 / n, 3);
    CHECK(get(m, 0, 0, 0).real() == doctest::Approx(2.0 * dv / std::sqrt(4 * M_PI)));
    for (std::size_t t = 0; t < m.size(); ++t)
        if (m.indices[t].i > 0) CHECK(std::abs(m.values[t]) == 0.0);
}

TEST_CASE("complex moments satisfy conjugate symmetry") {
    std::mt19937_64 rng(2);
    const auto g = random_real_grid(8, rng);
    const auto m = complex_moments_3d(g, 6);
    for (std::size_t t = 0; t < m.size(); ++t) {
        const auto [s, l, mm] = m.indices[t];
        const Complex mirror = get(m, s, l, -mm);
        CHECK(std::abs(mirror - (mm % 2 ? -1.0 : 1.0) * std::conj(m.values[t])) <= 1e-12 * std::max(1.0, std::abs(m.values[t])));
    }
}

TEST_CASE("zernike moments of the constant ball vanish except the first") {
    const std::size_t n = 64;
    VoxelGrid g(n);
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = 0; y < n; ++y)
            for (std::size_t z = 0; z < n; ++z) {
                const auto [px, py, pz] = ball_point(g, x, y, z);
                if (px * px + py * py + pz * pz <= 1.0) g.set(x, y, z, 1.0);
            }
    const auto m = zernike_moments_3d(g, 8);
    CHECK(m.outside_mass_fraction == 0.0);
    CHECK(get(m, 0, 0, 0).real() == doctest::Approx(1.0).epsilon(2e-2));
    for (std::size_t t = 1; t < m.size(); ++t) CHECK(std::abs(m.values[t]) < 2e-2);
}

TEST_CASE("spherical families report mass outside the inscribed ball") {
    const auto m = zernike_moments_3d(ones(8), 2);
    CHECK(m.outside_mass_fraction > 0.3);
    CHECK(m.outside_mass_fraction < 0.6);
}

TEST_CASE("hahn moments of a separable basis field") {
    const HahnParams p{0, 0, 10};
    const auto table = HahnBasisTable::direct(p, 9);
    VoxelGrid g(10);
    for (int x = 0; x < 10; ++x)
        for (int y = 0; y < 10; ++y)
            for (int z = 0; z < 10; ++z) g.set(x, y, z, table(1, x) * table(0, y) * table(0, z));
    const auto m = hahn_moments_3d(g, 4, p);
    for (std::size_t t = 0; t < m.size(); ++t) {
        const bool target = m.indices[t] == MomentIndex{1, 0, 0};
        CHECK(std::abs(m.values[t].real() - (target ? 1.0 : 0.0)) < 1e-9);
    }
    const auto empty = hahn_moments_3d(VoxelGrid(10), 4, p);
    for (const auto& v : empty.values) CHECK(v == Complex{});
}

TEST_CASE("hahn moments check the lattice size and order") {
    CHECK_THROWS_AS(hahn_moments_3d(VoxelGrid(8), 3, HahnParams{0, 0, 9}), DomainError);
    CHECK_THROWS_AS(hahn_moments_3d(VoxelGrid(4), 4, HahnParams{0, 0, 4}), DomainError);
}

TEST_CASE("complete hahn reconstruction is exact") {
    std::mt19937_64 rng(4);
    for (const HahnParams& p : {HahnParams{0, 0, 8}, HahnParams{2, 10, 8}}) {
        const auto g = random_binary_grid(8, rng);
        const auto back = reconstruct_hahn(hahn_moments_complete(g, p));
        for (std::size_t i = 0; i < g.size(); ++i) CHECK(std::abs(back.values()[i] - g.values()[i]) < 1e-9);
    }
    const auto zero = reconstruct_hahn(hahn_moments_complete(VoxelGrid(6), {0, 0, 6}));
    CHECK(zero.total() == 0.0);
}

TEST_CASE("truncated hahn reconstruction is refused unless allowed, and its residual shrinks") {
    std::mt19937_64 rng(5);
    const auto g = random_binary_grid(8, rng);
    const HahnParams p{0, 0, 8};
    CHECK_THROWS(reconstruct_hahn(hahn_moments_3d(g, 2, p)));
    double previous = INFINITY;
    for (int order = 0; order <= 7; ++order) {
        const auto back = reconstruct_hahn(hahn_moments_3d(g, order, p), Reconstruction::allow_truncated);
        double r2 = 0;
        for (std::size_t i = 0; i < g.size(); ++i) r2 += std::pow(back.values()[i] - g.values()[i], 2);
        CHECK(r2 <= previous + 1e-12);
        previous = r2;
    }
}

TEST_CASE("all engines match the triple-loop reference sums") {
    std::mt19937_64 rng(6);
    const HahnParams hp{1.5, 3, 6};
    for (int trial = 0; trial < 3; ++trial) {
        const auto g = random_real_grid(6, rng);
        const auto check = [&](const MomentSet& m, auto naive) {
            for (std::size_t t = 0; t < m.size(); ++t) {
                const auto [i, j, k] = m.indices[t];
                const Complex ref = naive(i, j, k);
                CHECK(std::abs(m.values[t] - ref) <= 1e-10 * std::max(1.0, std::abs(ref)));
            }
        };
        check(geometric_moments(g, 5), [&](int i, int j, int k) { return naive_geometric(g, i, j, k); });
        check(geometric_moments(g, 5, GeometricVariant::precise),
              [&](int i, int j, int k) { return naive_geometric_precise(g, i, j, k); });
        check(legendre_moments_3d(g, 5), [&](int i, int j, int k) { return naive_legendre(g, i, j, k); });
        check(complex_moments_3d(g, 5), [&](int i, int j, int k) { return naive_complex(g, i, j, k); });
        check(zernike_moments_3d(g, 5), [&](int i, int j, int k) { return naive_zernike(g, i, j, k); });
        check(hahn_moments_3d(g, 5, hp), [&](int i, int j, int k) { return naive_hahn(g, i, j, k, hp); });
    }
}

TEST_CASE("moments are linear in the grid") {
    std::mt19937_64 rng(8);
    const auto a = random_real_grid(6, rng), b = random_real_grid(6, rng);
    std::vector<double> mix(a.size());
    for (std::size_t i = 0; i < mix.size(); ++i) mix[i] = 2.0 * a.values()[i] - 0.5 * b.values()[i];
    const VoxelGrid c(6, mix);
    for (Family f : kAllFamilies) {
        auto run = [&](const VoxelGrid& g) {
            switch (f) {
                case Family::geometric: return geometric_moments(g, 4);
                case Family::complex: return complex_moments_3d(g, 4);
                case Family::legendre: return legendre_moments_3d(g, 4);
                case Family::zernike: return zernike_moments_3d(g, 4);
                case Family::hahn: return hahn_moments_3d(g, 4, HahnParams{0, 0, 6});
            }
            return MomentSet{};
        };
        const auto ma = run(a), mb = run(b), mc = run(c);
        for (std::size_t t = 0; t < mc.size(); ++t) {
            const Complex expect = 2.0 * ma.values[t] - 0.5 * mb.values[t];
            CHECK(std::abs(mc.values[t] - expect) <= 1e-11 * std::max(1.0, std::abs(expect)));
        }
    }
}

TEST_CASE("moment sets are deterministic and order-8 feature vectors have 165 entries") {
    std::mt19937_64 rng(9);
    const auto g = random_binary_grid(12, rng, 0.3);
    for (Family f : kAllFamilies) {
        auto run = [&] {
            switch (f) {
                case Family::geometric: return geometric_moments(g, 8);
                case Family::complex: return complex_moments_3d(g, 8);
                case Family::legendre: return legendre_moments_3d(g, 8);
                case Family::zernike: return zernike_moments_3d(g, 8);
                case Family::hahn: return hahn_moments_3d(g, 8, HahnParams{0, 0, 12});
            }
            return MomentSet{};
        };
        const auto m1 = run(), m2 = run();
        CHECK(m1.values == m2.values);
        const auto fv = feature_vector(m1);
        CHECK(fv.values.size() == kFeatureCount);
        CHECK(fv.indices == canonical_indices(f, 8));
    }
    CHECK_THROWS(feature_vector(geometric_moments(g, 7)));
}

TEST_CASE("feature names") {
    CHECK(feature_name(Family::hahn, {1, 0, 2}) == "hahn_1_0_2");
    CHECK(feature_name(Family::zernike, {4, 2, -1}) == "zernike_4_2_-1");
    CHECK(parse_family("legendre") == Family::legendre);
    CHECK_THROWS(parse_family("fourier"));
}
