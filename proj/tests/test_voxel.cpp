#include <doctest.h>

#include <cmath>

#include "molmom/error.hpp"
#include "molmom/voxel.hpp"

using namespace molmom;

TEST_CASE("parse_xyz reads a minimal single-atom file") {
    const auto mol = parse_xyz("1\n\nC 0.0 0.0 0.0");
    REQUIRE(mol.atoms.size() == 1);
    CHECK(mol.atoms[0].element == "C");
    CHECK(mol.atoms[0].position == Vec3{0, 0, 0});
    CHECK(mol.name.empty());
}

TEST_CASE("parse_xyz maps fields and keeps the comment as the name") {
    const auto mol = parse_xyz("2\nwater-ish\nO 0 0 0\nH 0.96 0 0");
    REQUIRE(mol.atoms.size() == 2);
    CHECK(mol.name == "water-ish");
    CHECK(mol.atoms[1].element == "H");
    CHECK(mol.atoms[1].position[0] == doctest::Approx(0.96));
}

TEST_CASE("parse_xyz rejects a short atom block") {
    CHECK_THROWS_WITH_AS(parse_xyz("3\n\nC 0 0 0\nH 1 0 0"), doctest::Contains("declared 3 atoms, found 2"),
                         ParseError);
}

TEST_CASE("parse_xyz reports malformed input with line numbers") {
    CHECK_THROWS_AS(parse_xyz(""), ParseError);
    CHECK_THROWS_WITH(parse_xyz("1\n\nC 0 zero 0"), doctest::Contains("line 3"));
    CHECK_THROWS_AS(parse_xyz("x\n\nC 0 0 0"), ParseError);
    CHECK_THROWS_AS(parse_xyz("1\n\nC 0 0"), ParseError);
}

TEST_CASE("parse_xyz normalises element case and tolerates CRLF") {
    const auto mol = parse_xyz("2\r\nname\r\nCL 0 0 0\r\nbr 1 1 1\r\n");
    CHECK(mol.atoms[0].element == "Cl");
    CHECK(mol.atoms[1].element == "Br");
}

TEST_CASE("point voxelization of a single atom lands in the middle voxel") {
    Molecule mol{{{"C", {0, 0, 0}}}, ""};
    VoxelizeOptions o;
    o.n = 9;
    o.mode = VoxelMode::point;
    const auto g = voxelize(mol, o);
    CHECK(g.occupied_count() == 1);
    CHECK(g.at(4, 4, 4) == 1.0);
}

TEST_CASE("sphere voxelization matches a brute-force distance scan") {
    Molecule mol{{{"C", {1.25, -3.0, 7.5}}}, ""};
    VoxelizeOptions o;
    o.n = 32;
    o.mode = VoxelMode::sphere;
    o.margin = 0.1;
    const auto g = voxelize(mol, o);

    const double s = 32 * 0.8 / 3.4;  // voxels per angstrom: inset width over the 2r extent
    const double r = 1.7 * s;
    std::size_t expected = 0;
    for (int x = 0; x < 32; ++x)
        for (int y = 0; y < 32; ++y)
            for (int z = 0; z < 32; ++z) {
                const double d2 = std::pow(x + 0.5 - 16, 2) + std::pow(y + 0.5 - 16, 2) + std::pow(z + 0.5 - 16, 2);
                const bool inside = d2 <= r * r;
                expected += inside;
                CHECK(g.at(x, y, z) == (inside ? 1.0 : 0.0));
            }
    CHECK(g.occupied_count() == expected);
    CHECK(expected > 0);
}

TEST_CASE("two distant atoms sit on opposite faces of the margin-inset cube") {
    Molecule mol{{{"C", {0, 0, 0}}, {"C", {100, 0, 0}}}, ""};
    VoxelizeOptions o;
    o.n = 16;
    o.mode = VoxelMode::point;
    o.margin = 0.05;
    const auto g = voxelize(mol, o);
    // grid coordinates 8 -/+ 50 * (16 * 0.9 / 100) = 0.8 and 15.2
    CHECK(g.occupied_count() == 2);
    CHECK(g.at(0, 8, 8) == 1.0);
    CHECK(g.at(15, 8, 8) == 1.0);
}

TEST_CASE("voxelization is invariant under rigid translation of the molecule") {
    Molecule a{{{"C", {0, 0, 0}}, {"O", {1.2, 0.3, -0.4}}, {"N", {-0.7, 1.1, 0.2}}}, ""};
    Molecule b = a;
    for (auto& at : b.atoms)
        for (int d = 0; d < 3; ++d) at.position[d] += 13.0 * (d + 1);
    const auto ga = voxelize(a, {});
    const auto gb = voxelize(b, {});
    CHECK(std::equal(ga.values().begin(), ga.values().end(), gb.values().begin()));
    CHECK(ga.scale() == doctest::Approx(gb.scale()));
}

TEST_CASE("unknown elements use the fallback radius unless it is disabled") {
    Molecule mol{{{"Xx", {0, 0, 0}}}, ""};
    VoxelizeOptions o;
    o.n = 16;
    CHECK(voxelize(mol, o).occupied_count() > 0);
    o.fallback_radius.reset();
    CHECK_THROWS_AS(voxelize(mol, o), DomainError);
}

TEST_CASE("voxel grids validate their inputs") {
    CHECK_THROWS_AS(VoxelGrid(1), DomainError);
    CHECK_THROWS_AS(VoxelGrid(2, std::vector<double>(7)), DomainError);
    CHECK_THROWS_AS(VoxelGrid(2, std::vector<double>(8, NAN)), DomainError);
    CHECK_THROWS_AS(VoxelGrid(2, {0, 0, 0}, -1.0), DomainError);
    VoxelGrid g(2);
    g.set(1, 0, 1, 0.25);
    CHECK(g.at(1, 0, 1) == 0.25);
    CHECK(g.values()[g.index(1, 0, 1)] == 0.25);
    CHECK(g.is_occupancy());
    CHECK_THROWS_AS(g.set(0, 0, 0, INFINITY), DomainError);
}
