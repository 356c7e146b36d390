#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "molmom/hahn.hpp"
#include "molmom/special.hpp"
#include "molmom/voxel.hpp"

namespace molmom {

enum class Family { geometric, complex, legendre, zernike, hahn };

inline constexpr Family kAllFamilies[] = {Family::geometric, Family::complex, Family::legendre,
                                          Family::zernike, Family::hahn};

std::string_view family_name(Family f);
Family parse_family(std::string_view name);
bool is_spherical(Family f);  // complex, zernike: indexed (s|n, l, m), complex-valued

enum class GeometricVariant { zero_order, precise };

// (p,q,r) for cube families; (s,l,m) or (n,l,m) for spherical ones.
struct MomentIndex {
    int i = 0, j = 0, k = 0;
    friend bool operator==(const MomentIndex&, const MomentIndex&) = default;
};

// Canonical orders. Cube: total order ascending, then lexicographic (p,q,r).
// Spherical: s ascending, l ascending over l = s, s-2, ..., m from -l to l.
std::vector<MomentIndex> cube_indices(int max_order);
std::vector<MomentIndex> spherical_indices(int max_order);
// All (p,q,r) with each index <= max_per_axis, in cube canonical order.
std::vector<MomentIndex> box_indices(int max_per_axis);
std::vector<MomentIndex> canonical_indices(Family f, int max_order);

enum class IndexLayout {
    triangular,  // total order <= max_order (spherical families: s or n <= max_order)
    box          // every index <= max_order per axis
};

struct GridMeta {
    std::size_t n = 0;
    Vec3 translate{0, 0, 0};
    double scale = 1.0;
};

struct MomentSet {
    Family family = Family::geometric;
    int max_order = 0;
    IndexLayout layout = IndexLayout::triangular;
    std::vector<MomentIndex> indices;
    std::vector<Complex> values;  // imaginary part 0 for real families
    GridMeta grid;
    std::optional<HahnParams> hahn;
    // Spherical families: share of sum|f| lying outside the inscribed unit ball.
    double outside_mass_fraction = 0.0;

    std::size_t size() const noexcept { return values.size(); }
    std::optional<Complex> find(int i, int j, int k) const;
};

// U_s(a) = ((a+0.5)^{s+1} - (a-0.5)^{s+1}) / (s+1): exact integral of x^s over the voxel at a.
double monomial_integral(int s, double a);

// Voxel indices are 1-based, i = x+1 etc.
MomentSet geometric_moments(const VoxelGrid& grid, int max_order,
                            GeometricVariant variant = GeometricVariant::zero_order);

// Midpoint quadrature with voxel centres at (2i - n + 1)/n in (-1, 1).
MomentSet legendre_moments_3d(const VoxelGrid& grid, int max_order);

// Voxel centres mapped into the ball inscribed in the cube; voxels outside contribute nothing.
// c_sl^m = sum rho^s Y_l^m f dV, dV = (2/n)^3 (Y not conjugated).
MomentSet complex_moments_3d(const VoxelGrid& grid, int max_order);

// Omega_nl^m = (3/4pi) sum conj(Z_nl^m) f dV over the same unit-ball mapping.
MomentSet zernike_moments_3d(const VoxelGrid& grid, int max_order);

// H_pqr over p+q+r <= max_order, voxel indices 0..n-1. params.n must equal grid.n().
MomentSet hahn_moments_3d(const VoxelGrid& grid, int max_order, const HahnParams& params);
MomentSet hahn_moments_3d(const VoxelGrid& grid, int max_order, const HahnBasisTable& table);
// Every H_pqr with p,q,r <= n-1 (box layout); the input of an exact reconstruction.
MomentSet hahn_moments_complete(const VoxelGrid& grid, const HahnParams& params);

enum class Reconstruction { require_complete, allow_truncated };

// f(x,y,z) = sum H_pqr h~_p(x) h~_q(y) h~_r(z). Missing coefficients count as zero when
// truncation is allowed; otherwise every (p,q,r) <= n-1 must be present.
VoxelGrid reconstruct_hahn(const MomentSet& moments,
                           Reconstruction mode = Reconstruction::require_complete);

inline constexpr int kFeatureOrder = 8;
inline constexpr std::size_t kFeatureCount = 165;

struct FeatureVector {
    Family family = Family::geometric;
    std::vector<MomentIndex> indices;
    std::vector<Complex> values;
};

// The 165 canonical features of an order-8 moment set.
FeatureVector feature_vector(const MomentSet& moments);

// Column label, e.g. "hahn_1_0_2" or "zernike_4_2_-1".
std::string feature_name(Family f, const MomentIndex& idx);

}  // namespace molmom
