#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include "molmom/moments.hpp"
#include "molmom/special.hpp"
#include "molmom/voxel.hpp"

namespace molmom::testing {

inline VoxelGrid random_binary_grid(std::size_t n, std::mt19937_64& rng, double p = 0.5) {
    std::bernoulli_distribution bit(p);
    std::vector<double> v(n * n * n);
    for (auto& x : v) x = bit(rng) ? 1.0 : 0.0;
    return VoxelGrid(n, std::move(v));
}

inline VoxelGrid random_real_grid(std::size_t n, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> v(n * n * n);
    for (auto& x : v) x = u(rng);
    return VoxelGrid(n, std::move(v));
}

inline double rel_err(Complex a, Complex b) {
    const double scale = std::max({std::abs(a), std::abs(b), 1e-300});
    return std::abs(a - b) / scale;
}

// Triple-loop reference sums, written straight from the moment definitions
// with no staging or shared tables.

inline Complex naive_geometric(const VoxelGrid& g, int p, int q, int r) {
    double s = 0;
    for (std::size_t x = 0; x < g.n(); ++x)
        for (std::size_t y = 0; y < g.n(); ++y)
            for (std::size_t z = 0; z < g.n(); ++z)
                s += std::pow(double(x + 1), p) * std::pow(double(y + 1), q) * std::pow(double(z + 1), r) *
                     g.at(x, y, z);
    return s;
}

inline Complex naive_geometric_precise(const VoxelGrid& g, int p, int q, int r) {
    double s = 0;
    for (std::size_t x = 0; x < g.n(); ++x)
        for (std::size_t y = 0; y < g.n(); ++y)
            for (std::size_t z = 0; z < g.n(); ++z) {
                auto u = [](int k, double a) {
                    return (std::pow(a + 0.5, k + 1) - std::pow(a - 0.5, k + 1)) / (k + 1);
                };
                s += u(p, double(x + 1)) * u(q, double(y + 1)) * u(r, double(z + 1)) * g.at(x, y, z);
            }
    return s;
}

inline Complex naive_legendre(const VoxelGrid& g, int p, int q, int r) {
    const double n = double(g.n());
    const double dv = std::pow(2.0 / n, 3);
    double s = 0;
    for (std::size_t x = 0; x < g.n(); ++x)
        for (std::size_t y = 0; y < g.n(); ++y)
            for (std::size_t z = 0; z < g.n(); ++z) {
                const double cx = (2.0 * double(x) - n + 1) / n;
                const double cy = (2.0 * double(y) - n + 1) / n;
                const double cz = (2.0 * double(z) - n + 1) / n;
                s += std::legendre(p, cx) * std::legendre(q, cy) * std::legendre(r, cz) * g.at(x, y, z) * dv;
            }
    return s * (2 * p + 1) * (2 * q + 1) * (2 * r + 1) / 8.0;
}

// Voxel centre mapped into the unit ball inscribed in the cube.
inline std::array<double, 3> ball_point(const VoxelGrid& g, std::size_t x, std::size_t y, std::size_t z) {
    const double h = double(g.n()) / 2.0;
    return {(double(x) + 0.5 - h) / h, (double(y) + 0.5 - h) / h, (double(z) + 0.5 - h) / h};
}

inline Complex naive_complex(const VoxelGrid& g, int s_, int l, int m) {
    const double dv = std::pow(2.0 / double(g.n()), 3);
    Complex s = 0;
    for (std::size_t x = 0; x < g.n(); ++x)
        for (std::size_t y = 0; y < g.n(); ++y)
            for (std::size_t z = 0; z < g.n(); ++z) {
                const auto [px, py, pz] = ball_point(g, x, y, z);
                const double rho = std::sqrt(px * px + py * py + pz * pz);
                if (rho > 1.0) continue;
                const double theta = std::acos(pz / rho);
                const double phi = std::atan2(py, px);
                // Independent Y_l^m from the C++17 special functions.
                const int am = std::abs(m);
                double ylm_abs = std::sph_legendre(l, am, theta);
                Complex y_lm = ylm_abs * std::polar(1.0, am * phi);
                if (m < 0) y_lm = (am % 2 ? -1.0 : 1.0) * std::conj(y_lm);
                s += std::pow(rho, s_) * y_lm * g.at(x, y, z) * dv;
            }
    return s;
}

inline Complex naive_zernike(const VoxelGrid& g, int n_, int l, int m) {
    const double dv = std::pow(2.0 / double(g.n()), 3);
    Complex s = 0;
    for (std::size_t x = 0; x < g.n(); ++x)
        for (std::size_t y = 0; y < g.n(); ++y)
            for (std::size_t z = 0; z < g.n(); ++z) {
                const auto [px, py, pz] = ball_point(g, x, y, z);
                if (px * px + py * py + pz * pz > 1.0) continue;
                s += std::conj(zernike_poly(n_, l, m, px, py, pz)) * g.at(x, y, z) * dv;
            }
    return s * 3.0 / (4.0 * M_PI);
}

inline Complex naive_hahn(const VoxelGrid& g, int p, int q, int r, const HahnParams& hp) {
    std::vector<double> hx, hy, hz;
    for (int a = 0; a < int(g.n()); ++a) {
        hx.push_back(hahn_normalized(p, a, hp));
        hy.push_back(hahn_normalized(q, a, hp));
        hz.push_back(hahn_normalized(r, a, hp));
    }
    double s = 0;
    for (std::size_t x = 0; x < g.n(); ++x)
        for (std::size_t y = 0; y < g.n(); ++y)
            for (std::size_t z = 0; z < g.n(); ++z) s += hx[x] * hy[y] * hz[z] * g.at(x, y, z);
    return s;
}

}  // namespace molmom::testing
