#include "molmom/voxel.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <limits>

#include "molmom/error.hpp"

namespace molmom {

namespace {

void check_lattice(std::size_t n) {
    if (n < 2) throw DomainError("voxel grid needs n >= 2, got " + std::to_string(n));
}

std::string_view trim(std::string_view s) {
    auto is_space = [](char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; };
    while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
    while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split_ws(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
        std::size_t j = i;
        while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) ++j;
        if (j > i) out.push_back(s.substr(i, j - i));
        i = j;
    }
    return out;
}

std::vector<std::string_view> split_lines(std::string_view text) {
    std::vector<std::string_view> lines;
    std::size_t start = 0;
    while (start <= text.size()) {
        auto end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        auto line = text.substr(start, end - start);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        lines.push_back(line);
        start = end + 1;
    }
    return lines;
}

double parse_double(std::string_view tok, std::size_t line) {
    double v = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc{} || ptr != tok.data() + tok.size() || !std::isfinite(v))
        throw ParseError("non-numeric coordinate '" + std::string(tok) + "'", line);
    return v;
}

// "CL" / "cl" -> "Cl"
std::string normalize_symbol(std::string_view sym) {
    std::string out(sym);
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = static_cast<char>(i == 0 ? std::toupper(static_cast<unsigned char>(out[i]))
                                          : std::tolower(static_cast<unsigned char>(out[i])));
    return out;
}

}  // namespace

VoxelGrid::VoxelGrid(std::size_t n, Vec3 translate, double scale)
    : VoxelGrid(n, std::vector<double>(n * n * n, 0.0), translate, scale) {}

VoxelGrid::VoxelGrid(std::size_t n, std::vector<double> values, Vec3 translate, double scale)
    : n_(n), values_(std::move(values)), translate_(translate), scale_(scale) {
    check_lattice(n);
    if (values_.size() != n * n * n)
        throw DomainError("voxel grid of n=" + std::to_string(n) + " needs " +
                          std::to_string(n * n * n) + " values, got " +
                          std::to_string(values_.size()));
    if (!(scale > 0) || !std::isfinite(scale)) throw DomainError("voxel grid scale must be positive");
    for (double t : translate)
        if (!std::isfinite(t)) throw DomainError("voxel grid translate must be finite");
    for (double v : values_)
        if (!std::isfinite(v)) throw DomainError("voxel grid values must be finite");
}

void VoxelGrid::set(std::size_t x, std::size_t y, std::size_t z, double v) {
    if (!std::isfinite(v)) throw DomainError("voxel grid values must be finite");
    values_[index(x, y, z)] = v;
}

bool VoxelGrid::is_occupancy() const noexcept {
    return std::all_of(values_.begin(), values_.end(), [](double v) { return v >= 0.0 && v <= 1.0; });
}

std::size_t VoxelGrid::occupied_count(double threshold) const noexcept {
    return static_cast<std::size_t>(
        std::count_if(values_.begin(), values_.end(), [=](double v) { return v >= threshold; }));
}

double VoxelGrid::total() const noexcept {
    double s = 0;
    for (double v : values_) s += v;
    return s;
}

Molecule parse_xyz(std::string_view text) {
    auto lines = split_lines(text);
    while (!lines.empty() && trim(lines.back()).empty()) lines.pop_back();
    if (lines.empty()) throw ParseError("empty file", 1);

    auto count_tok = trim(lines[0]);
    std::size_t declared = 0;
    auto [ptr, ec] = std::from_chars(count_tok.data(), count_tok.data() + count_tok.size(), declared);
    if (ec != std::errc{} || ptr != count_tok.data() + count_tok.size())
        throw ParseError("expected atom count, got '" + std::string(count_tok) + "'", 1);
    if (declared == 0) throw ParseError("molecule must declare at least one atom", 1);

    Molecule mol;
    if (lines.size() > 1) mol.name = std::string(trim(lines[1]));

    for (std::size_t i = 2; i < lines.size(); ++i) {
        const std::size_t lineno = i + 1;
        auto toks = split_ws(lines[i]);
        if (toks.empty()) throw ParseError("blank line inside atom block", lineno);
        if (toks.size() < 4) throw ParseError("expected 'symbol x y z'", lineno);
        const auto sym = toks[0];
        if (!std::all_of(sym.begin(), sym.end(),
                         [](char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; }))
            throw ParseError("bad element symbol '" + std::string(sym) + "'", lineno);
        Atom atom{normalize_symbol(sym),
                  {parse_double(toks[1], lineno), parse_double(toks[2], lineno),
                   parse_double(toks[3], lineno)}};
        mol.atoms.push_back(std::move(atom));
    }
    if (mol.atoms.size() != declared)
        throw ParseError("declared " + std::to_string(declared) + " atoms, found " +
                             std::to_string(mol.atoms.size()),
                         lines.size());
    return mol;
}

const RadiusTable& default_vdw_radii() {
    static const RadiusTable table{{"H", 1.20},  {"C", 1.70},  {"N", 1.55}, {"O", 1.52},
                                   {"S", 1.80},  {"P", 1.80},  {"F", 1.47}, {"Cl", 1.75},
                                   {"Br", 1.85}, {"I", 1.98}};
    return table;
}

VoxelGrid voxelize(const Molecule& mol, const VoxelizeOptions& opts) {
    check_lattice(opts.n);
    if (!(opts.margin >= 0.0 && opts.margin <= 0.45))
        throw DomainError("margin must lie in [0, 0.45]");
    if (mol.atoms.empty()) throw DomainError("molecule has no atoms");

    const bool sphere = opts.mode == VoxelMode::sphere;
    std::vector<double> radius(mol.atoms.size(), 0.0);
    if (sphere) {
        for (std::size_t i = 0; i < mol.atoms.size(); ++i) {
            const auto& el = mol.atoms[i].element;
            if (auto it = opts.radii.find(el); it != opts.radii.end())
                radius[i] = it->second;
            else if (opts.fallback_radius)
                radius[i] = *opts.fallback_radius;
            else
                throw DomainError("no radius for element '" + el + "'");
        }
    }

    Vec3 lo, hi;
    lo.fill(std::numeric_limits<double>::infinity());
    hi.fill(-std::numeric_limits<double>::infinity());
    for (std::size_t i = 0; i < mol.atoms.size(); ++i)
        for (int d = 0; d < 3; ++d) {
            lo[d] = std::min(lo[d], mol.atoms[i].position[d] - radius[i]);
            hi[d] = std::max(hi[d], mol.atoms[i].position[d] + radius[i]);
        }
    Vec3 centre;
    double extent = 0;
    for (int d = 0; d < 3; ++d) {
        centre[d] = 0.5 * (lo[d] + hi[d]);
        extent = std::max(extent, hi[d] - lo[d]);
    }

    const auto n = opts.n;
    const double half = 0.5 * static_cast<double>(n);
    // voxels per angstrom; a zero-extent molecule is simply put at the centre
    const double s = extent > 0 ? static_cast<double>(n) * (1.0 - 2.0 * opts.margin) / extent : 1.0;

    Vec3 translate;
    for (int d = 0; d < 3; ++d) translate[d] = centre[d] - half / s;
    VoxelGrid grid(n, translate, static_cast<double>(n) / s);

    auto to_grid = [&](const Vec3& p) {
        Vec3 g;
        for (int d = 0; d < 3; ++d) g[d] = (p[d] - centre[d]) * s + half;
        return g;
    };
    auto clamp_idx = [n](double v) {
        const double c = std::clamp(std::floor(v), 0.0, static_cast<double>(n - 1));
        return static_cast<std::size_t>(c);
    };

    for (std::size_t a = 0; a < mol.atoms.size(); ++a) {
        const Vec3 g = to_grid(mol.atoms[a].position);
        if (!sphere) {
            grid.set(clamp_idx(g[0]), clamp_idx(g[1]), clamp_idx(g[2]), 1.0);
            continue;
        }
        const double r = radius[a] * s;
        const double r2 = r * r;
        std::array<std::size_t, 3> from, to;
        for (int d = 0; d < 3; ++d) {
            from[d] = clamp_idx(g[d] - r - 1.0);
            to[d] = clamp_idx(g[d] + r + 1.0);
        }
        for (std::size_t x = from[0]; x <= to[0]; ++x) {
            const double dx = static_cast<double>(x) + 0.5 - g[0];
            for (std::size_t y = from[1]; y <= to[1]; ++y) {
                const double dy = static_cast<double>(y) + 0.5 - g[1];
                for (std::size_t z = from[2]; z <= to[2]; ++z) {
                    const double dz = static_cast<double>(z) + 0.5 - g[2];
                    if (dx * dx + dy * dy + dz * dz <= r2) grid.set(x, y, z, 1.0);
                }
            }
        }
    }
    return grid;
}

}  // namespace molmom
