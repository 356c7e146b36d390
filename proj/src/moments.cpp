#include "molmom/moments.hpp"
#include <algorithm>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "molmom/error.hpp"

namespace molmom {

std::string_view family_name(Family f) {
    switch (f) {
        case Family::geometric: return "geometric";
        case Family::complex: return "complex";
        case Family::legendre: return "legendre";
        case Family::zernike: return "zernike";
        case Family::hahn: return "hahn";
    }
    return "?";
}

Family parse_family(std::string_view name) {
    for (Family f : kAllFamilies)
        if (family_name(f) == name) return f;
    throw Error("unknown moment family '" + std::string(name) + "'");
}

bool is_spherical(Family f) { return f == Family::complex || f == Family::zernike; }

std::vector<MomentIndex> cube_indices(int max_order) {
    std::vector<MomentIndex> out;
    for (int s = 0; s <= max_order; ++s)
        for (int p = 0; p <= s; ++p)
            for (int q = 0; q <= s - p; ++q) out.push_back({p, q, s - p - q});
    return out;
}

std::vector<MomentIndex> spherical_indices(int max_order) {
    std::vector<MomentIndex> out;
    for (int s = 0; s <= max_order; ++s)
        for (int l = s % 2; l <= s; l += 2)
            for (int m = -l; m <= l; ++m) out.push_back({s, l, m});
    return out;
}

std::vector<MomentIndex> box_indices(int max_per_axis) {
    std::vector<MomentIndex> out;
    for (int s = 0; s <= 3 * max_per_axis; ++s)
        for (int p = 0; p <= std::min(s, max_per_axis); ++p)
            for (int q = 0; q <= std::min(s - p, max_per_axis); ++q)
                if (s - p - q <= max_per_axis) out.push_back({p, q, s - p - q});
    return out;
}

std::vector<MomentIndex> canonical_indices(Family f, int max_order) {
    return is_spherical(f) ? spherical_indices(max_order) : cube_indices(max_order);
}

std::optional<Complex> MomentSet::find(int i, int j, int k) const {
    for (std::size_t t = 0; t < indices.size(); ++t)
        if (indices[t] == MomentIndex{i, j, k}) return values[t];
    return std::nullopt;
}

double monomial_integral(int s, double a) {
    if (s < 0) throw DomainError("monomial power must be >= 0");
    return (std::pow(a + 0.5, s + 1) - std::pow(a - 0.5, s + 1)) / (s + 1.0);
}

namespace {

void check_order(int max_order) {
    if (max_order < 0) throw DomainError("max order must be >= 0");
}

GridMeta meta_of(const VoxelGrid& g) { return {g.n(), g.translate(), g.scale()}; }

// Per-axis basis values: basis[p * n + x] for p in 0..orders-1.
struct AxisBasis {
    int orders = 0;
    std::size_t n = 0;
    std::vector<double> values;
    double operator()(int p, std::size_t x) const { return values[static_cast<std::size_t>(p) * n + x]; }
};

// out[(p*R + q)*R + r] = sum_xyz bx(p,x) by(q,y) bz(r,z) f(x,y,z), contracting one axis at a time.
std::vector<double> separable_box(std::span<const double> f, std::size_t n, const AxisBasis& b) {
    const auto R = static_cast<std::size_t>(b.orders);
    // contract z: t1[(x*n + y)*R + r]
    std::vector<double> t1(n * n * R, 0.0);
    for (std::size_t xy = 0; xy < n * n; ++xy) {
        const double* row = f.data() + xy * n;
        for (std::size_t r = 0; r < R; ++r) {
            const double* br = b.values.data() + r * n;
            double acc = 0;
            for (std::size_t z = 0; z < n; ++z) acc += br[z] * row[z];
            t1[xy * R + r] = acc;
        }
    }
    // contract y: t2[(x*R + q)*R + r]
    std::vector<double> t2(n * R * R, 0.0);
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t q = 0; q < R; ++q) {
            const double* bq = b.values.data() + q * n;
            double* dst = t2.data() + (x * R + q) * R;
            for (std::size_t y = 0; y < n; ++y) {
                const double w = bq[y];
                const double* src = t1.data() + (x * n + y) * R;
                for (std::size_t r = 0; r < R; ++r) dst[r] += w * src[r];
            }
        }
    // contract x
    std::vector<double> out(R * R * R, 0.0);
    for (std::size_t p = 0; p < R; ++p) {
        const double* bp = b.values.data() + p * n;
        double* dst = out.data() + p * R * R;
        for (std::size_t x = 0; x < n; ++x) {
            const double w = bp[x];
            const double* src = t2.data() + x * R * R;
            for (std::size_t qr = 0; qr < R * R; ++qr) dst[qr] += w * src[qr];
        }
    }
    return out;
}

MomentSet cube_family(const VoxelGrid& grid, Family family, int max_order, const AxisBasis& basis) {
    const auto box = separable_box(grid.values(), grid.n(), basis);
    const auto R = static_cast<std::size_t>(basis.orders);
    MomentSet set;
    set.family = family;
    set.max_order = max_order;
    set.grid = meta_of(grid);
    set.indices = cube_indices(max_order);
    set.values.reserve(set.indices.size());
    for (const auto& idx : set.indices)
        set.values.emplace_back(box[(static_cast<std::size_t>(idx.i) * R + static_cast<std::size_t>(idx.j)) * R +
                                    static_cast<std::size_t>(idx.k)],
                                0.0);
    return set;
}

AxisBasis hahn_axis(const HahnBasisTable& table) {
    AxisBasis b{table.max_order() + 1, static_cast<std::size_t>(table.n()), {}};
    b.values.assign(static_cast<std::size_t>(b.orders) * b.n, 0.0);
    for (int p = 0; p < b.orders; ++p)
        for (int x = 0; x < table.n(); ++x) b.values[static_cast<std::size_t>(p) * b.n + static_cast<std::size_t>(x)] = table(p, x);
    return b;
}

// Voxel centre in unit-ball coordinates; the ball is inscribed in the grid cube.
struct BallPoint {
    double x, y, z, rho;
};

template <class Visit>
double for_each_ball_voxel(const VoxelGrid& grid, Visit&& visit) {
    const auto n = grid.n();
    const double half = 0.5 * static_cast<double>(n);
    double inside = 0, outside = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = (static_cast<double>(i) + 0.5 - half) / half;
        for (std::size_t j = 0; j < n; ++j) {
            const double y = (static_cast<double>(j) + 0.5 - half) / half;
            for (std::size_t k = 0; k < n; ++k) {
                const double f = grid.at(i, j, k);
                if (f == 0.0) continue;
                const double z = (static_cast<double>(k) + 0.5 - half) / half;
                const double rho = std::sqrt(x * x + y * y + z * z);
                if (rho > 1.0) {
                    outside += std::abs(f);
                    continue;
                }
                inside += std::abs(f);
                visit(BallPoint{x, y, z, rho}, f);
            }
        }
    }
    return inside + outside > 0 ? outside / (inside + outside) : 0.0;
}

void angles(const BallPoint& pt, double& theta, double& phi) {
    if (pt.rho == 0.0) {
        theta = 0.0;
        phi = 0.0;
        return;
    }
    theta = std::acos(std::clamp(pt.z / pt.rho, -1.0, 1.0));
    phi = std::atan2(pt.y, pt.x);
}

}  // namespace

MomentSet geometric_moments(const VoxelGrid& grid, int max_order, GeometricVariant variant) {
    check_order(max_order);
    const auto n = grid.n();
    AxisBasis b{max_order + 1, n, std::vector<double>(static_cast<std::size_t>(max_order + 1) * n)};
    for (int p = 0; p <= max_order; ++p)
        for (std::size_t x = 0; x < n; ++x) {
            const double coord = static_cast<double>(x + 1);
            b.values[static_cast<std::size_t>(p) * n + x] =
                variant == GeometricVariant::zero_order ? std::pow(coord, p) : monomial_integral(p, coord);
        }
    return cube_family(grid, Family::geometric, max_order, b);
}

MomentSet legendre_moments_3d(const VoxelGrid& grid, int max_order) {
    check_order(max_order);
    const auto n = grid.n();
    const double nd = static_cast<double>(n);
    const double delta = 2.0 / nd;
    AxisBasis b{max_order + 1, n, std::vector<double>(static_cast<std::size_t>(max_order + 1) * n)};
    for (int p = 0; p <= max_order; ++p)
        for (std::size_t x = 0; x < n; ++x) {
            const double c = (2.0 * static_cast<double>(x) - nd + 1.0) / nd;
            b.values[static_cast<std::size_t>(p) * n + x] = 0.5 * (2.0 * p + 1.0) * legendre(p, c) * delta;
        }
    return cube_family(grid, Family::legendre, max_order, b);
}

MomentSet complex_moments_3d(const VoxelGrid& grid, int max_order) {
    check_order(max_order);
    MomentSet set;
    set.family = Family::complex;
    set.max_order = max_order;
    set.grid = meta_of(grid);
    set.indices = spherical_indices(max_order);
    set.values.assign(set.indices.size(), Complex{});

    const double dv = std::pow(2.0 / static_cast<double>(grid.n()), 3);
    std::vector<Complex> ylm;
    std::vector<double> rho_pow(static_cast<std::size_t>(max_order) + 1);
    set.outside_mass_fraction = for_each_ball_voxel(grid, [&](const BallPoint& pt, double f) {
        double theta, phi;
        angles(pt, theta, phi);
        spherical_harmonics_all(max_order, theta, phi, ylm);
        rho_pow[0] = 1.0;
        for (int s = 1; s <= max_order; ++s) rho_pow[static_cast<std::size_t>(s)] = rho_pow[static_cast<std::size_t>(s) - 1] * pt.rho;
        const double w = f * dv;
        std::size_t t = 0;
        for (int s = 0; s <= max_order; ++s) {
            const double ws = w * rho_pow[static_cast<std::size_t>(s)];
            for (int l = s % 2; l <= s; l += 2)
                for (int m = -l; m <= l; ++m) set.values[t++] += ws * ylm[static_cast<std::size_t>(l * l + l + m)];
        }
    });
    return set;
}

MomentSet zernike_moments_3d(const VoxelGrid& grid, int max_order) {
    check_order(max_order);
    MomentSet set;
    set.family = Family::zernike;
    set.max_order = max_order;
    set.grid = meta_of(grid);
    set.indices = spherical_indices(max_order);
    set.values.assign(set.indices.size(), Complex{});

    // q_kl^v table, flattened per (n,l)
    struct Radial {
        int l;
        std::vector<double> q;
    };
    std::vector<Radial> radial;
    for (int n = 0; n <= max_order; ++n)
        for (int l = n % 2; l <= n; l += 2) {
            const int k = (n - l) / 2;
            Radial r{l, {}};
            for (int v = 0; v <= k; ++v) r.q.push_back(zernike_radial_coeff(k, l, v));
            radial.push_back(std::move(r));
        }

    const double dv = std::pow(2.0 / static_cast<double>(grid.n()), 3);
    const double norm = 3.0 / (4.0 * std::numbers::pi) * std::sqrt(4.0 * std::numbers::pi);
    std::vector<Complex> ylm;
    std::vector<double> rho_pow(static_cast<std::size_t>(max_order) + 1);
    set.outside_mass_fraction = for_each_ball_voxel(grid, [&](const BallPoint& pt, double f) {
        double theta, phi;
        angles(pt, theta, phi);
        spherical_harmonics_all(max_order, theta, phi, ylm);
        rho_pow[0] = 1.0;
        for (int s = 1; s <= max_order; ++s) rho_pow[static_cast<std::size_t>(s)] = rho_pow[static_cast<std::size_t>(s) - 1] * pt.rho;
        const double w = norm * f * dv;
        std::size_t t = 0;
        for (const auto& r : radial) {
            double R = 0;
            for (std::size_t v = 0; v < r.q.size(); ++v) R += r.q[v] * rho_pow[2 * v + static_cast<std::size_t>(r.l)];
            const double wr = w * R;
            for (int m = -r.l; m <= r.l; ++m)
                set.values[t++] += wr * std::conj(ylm[static_cast<std::size_t>(r.l * r.l + r.l + m)]);
        }
    });
    return set;
}

MomentSet hahn_moments_3d(const VoxelGrid& grid, int max_order, const HahnBasisTable& table) {
    check_order(max_order);
    if (static_cast<std::size_t>(table.n()) != grid.n())
        throw DomainError("Hahn lattice size " + std::to_string(table.n()) + " does not match grid n=" +
                          std::to_string(grid.n()));
    if (max_order > table.max_order())
        throw DomainError("Hahn table holds orders up to " + std::to_string(table.max_order()) +
                          ", requested " + std::to_string(max_order));
    auto set = cube_family(grid, Family::hahn, max_order, hahn_axis(table));
    set.hahn = table.params();
    return set;
}

MomentSet hahn_moments_3d(const VoxelGrid& grid, int max_order, const HahnParams& params) {
    params.validate();
    if (static_cast<std::size_t>(params.n) != grid.n())
        throw DomainError("Hahn lattice size " + std::to_string(params.n) + " does not match grid n=" +
                          std::to_string(grid.n()));
    if (max_order > params.n - 1)
        throw DomainError("Hahn order " + std::to_string(max_order) + " exceeds n-1 = " +
                          std::to_string(params.n - 1));
    return hahn_moments_3d(grid, max_order, HahnBasisTable::direct(params, max_order));
}

MomentSet hahn_moments_complete(const VoxelGrid& grid, const HahnParams& params) {
    params.validate();
    if (static_cast<std::size_t>(params.n) != grid.n())
        throw DomainError("Hahn lattice size does not match grid");
    const int top = params.n - 1;
    const auto table = HahnBasisTable::direct(params, top);
    const auto basis = hahn_axis(table);
    const auto box = separable_box(grid.values(), grid.n(), basis);
    const auto R = static_cast<std::size_t>(basis.orders);

    MomentSet set;
    set.family = Family::hahn;
    set.max_order = top;
    set.layout = IndexLayout::box;
    set.grid = meta_of(grid);
    set.hahn = params;
    set.indices = box_indices(top);
    set.values.reserve(set.indices.size());
    for (const auto& idx : set.indices)
        set.values.emplace_back(box[(static_cast<std::size_t>(idx.i) * R + static_cast<std::size_t>(idx.j)) * R +
                                    static_cast<std::size_t>(idx.k)],
                                0.0);
    return set;
}

VoxelGrid reconstruct_hahn(const MomentSet& moments, Reconstruction mode) {
    if (moments.family != Family::hahn || !moments.hahn)
        throw Error("reconstruction needs a Hahn moment set with its parameters");
    const auto& params = *moments.hahn;
    params.validate();
    const auto n = static_cast<std::size_t>(params.n);
    if (moments.grid.n != n) throw DomainError("moment set grid size does not match its Hahn parameters");

    // dense coefficient box over p,q,r <= n-1
    std::vector<double> coeff(n * n * n, 0.0);
    std::vector<char> present(n * n * n, 0);
    int top = 0;
    for (std::size_t t = 0; t < moments.indices.size(); ++t) {
        const auto& idx = moments.indices[t];
        if (idx.i < 0 || idx.j < 0 || idx.k < 0 || static_cast<std::size_t>(std::max({idx.i, idx.j, idx.k})) >= n)
            throw DomainError("Hahn coefficient index outside the lattice");
        const auto pos = (static_cast<std::size_t>(idx.i) * n + static_cast<std::size_t>(idx.j)) * n +
                         static_cast<std::size_t>(idx.k);
        coeff[pos] = moments.values[t].real();
        present[pos] = 1;
        top = std::max({top, idx.i, idx.j, idx.k});
    }
    if (mode == Reconstruction::require_complete) {
        const auto missing = static_cast<std::size_t>(std::count(present.begin(), present.end(), 0));
        if (missing)
            throw Error("incomplete coefficient set: " + std::to_string(missing) + " of " +
                        std::to_string(n * n * n) + " Hahn coefficients missing");
    }

    // f(x,y,z) = sum_pqr H_pqr h_p(x) h_q(y) h_r(z): the same separable contraction
    // with the transposed table (rows indexed by lattice point, columns by order).
    const auto table = HahnBasisTable::direct(params, top);
    AxisBasis inverse{static_cast<int>(n), n, std::vector<double>(n * n, 0.0)};
    for (std::size_t x = 0; x < n; ++x)
        for (int p = 0; p <= top; ++p) inverse.values[x * n + static_cast<std::size_t>(p)] = table(p, static_cast<int>(x));
    auto values = separable_box(coeff, n, inverse);
    return VoxelGrid(n, std::move(values), moments.grid.translate, moments.grid.scale);
}

FeatureVector feature_vector(const MomentSet& moments) {
    if (moments.layout != IndexLayout::triangular || moments.max_order != kFeatureOrder)
        throw Error("feature vectors need a triangular moment set of order " + std::to_string(kFeatureOrder) +
                    ", got order " + std::to_string(moments.max_order));
    const auto expected = canonical_indices(moments.family, kFeatureOrder);
    if (moments.indices != expected) throw Error("moment set is not in canonical order");
    return FeatureVector{moments.family, moments.indices, moments.values};
}

std::string feature_name(Family f, const MomentIndex& idx) {
    return std::string(family_name(f)) + "_" + std::to_string(idx.i) + "_" + std::to_string(idx.j) + "_" +
           std::to_string(idx.k);
}

}  // namespace molmom
