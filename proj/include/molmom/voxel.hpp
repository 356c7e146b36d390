#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace molmom {

using Vec3 = std::array<double, 3>;

struct Atom {
    std::string element;
    Vec3 position{};
};

struct Molecule {
    std::vector<Atom> atoms;
    std::string name;
};

// Cubic scalar field f(x,y,z) on an n^3 lattice.
//
// Storage is x-major: index(x,y,z) = (x*n + y)*n + z. translate/scale follow
// the binvox convention, world = (grid + 0.5)/n * scale + translate per axis
// (voxel centres), with translate the world position of the cube's min corner.
//
// Values only need to be finite; ingest paths produce occupancies in [0,1]
// (see is_occupancy()), while reconstructions and synthetic test fields may
// leave that range.
class VoxelGrid {
public:
    VoxelGrid() = default;
    explicit VoxelGrid(std::size_t n, Vec3 translate = {0, 0, 0}, double scale = 1.0);
    VoxelGrid(std::size_t n, std::vector<double> values, Vec3 translate = {0, 0, 0},
              double scale = 1.0);

    std::size_t n() const noexcept { return n_; }
    std::size_t size() const noexcept { return values_.size(); }
    const Vec3& translate() const noexcept { return translate_; }
    double scale() const noexcept { return scale_; }

    std::size_t index(std::size_t x, std::size_t y, std::size_t z) const noexcept {
        return (x * n_ + y) * n_ + z;
    }
    double at(std::size_t x, std::size_t y, std::size_t z) const noexcept {
        return values_[index(x, y, z)];
    }
    void set(std::size_t x, std::size_t y, std::size_t z, double v);

    std::span<const double> values() const noexcept { return values_; }

    bool is_occupancy() const noexcept;
    std::size_t occupied_count(double threshold = 0.5) const noexcept;
    double total() const noexcept;

    friend bool operator==(const VoxelGrid&, const VoxelGrid&) = default;

private:
    std::size_t n_ = 0;
    std::vector<double> values_;
    Vec3 translate_{0, 0, 0};
    double scale_ = 1.0;
};

// XYZ text: atom count, comment line, then "symbol x y z" records.
// The comment line becomes Molecule::name (trimmed).
Molecule parse_xyz(std::string_view text);

enum class VoxelMode { point, sphere };

using RadiusTable = std::map<std::string, double, std::less<>>;

// Bondi van der Waals radii in angstrom for H C N O S P F Cl Br I.
const RadiusTable& default_vdw_radii();
inline constexpr double kFallbackRadius = 1.5;

struct VoxelizeOptions {
    std::size_t n = 64;
    VoxelMode mode = VoxelMode::sphere;
    RadiusTable radii = default_vdw_radii();
    // Used for elements missing from radii; nullopt makes them an error.
    std::optional<double> fallback_radius = kFallbackRadius;
    double margin = 0.05;
};

// Uniformly fits the (radius-inflated) bounding box into the cube minus the
// margin on every side, centred. Output values are exactly 0 or 1.
VoxelGrid voxelize(const Molecule& mol, const VoxelizeOptions& opts = {});

// binvox v1: ASCII header then (value, count) byte pairs, y fastest, then z, then x.
VoxelGrid read_binvox(std::span<const std::uint8_t> bytes);
// Occupancy is thresholded at 0.5.
std::vector<std::uint8_t> write_binvox(const VoxelGrid& grid);

VoxelGrid load_binvox(const std::string& path);
void save_binvox(const VoxelGrid& grid, const std::string& path);

}  // namespace molmom
