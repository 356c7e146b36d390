#include <doctest.h>

#include <random>
#include <string>

#include "molmom/error.hpp"
#include "molmom/voxel.hpp"
#include "support.hpp"

using namespace molmom;

namespace {

std::vector<std::uint8_t> binvox_bytes(int dim, std::vector<std::uint8_t> payload) {
    const std::string header = "#binvox 1\ndim " + std::to_string(dim) + " " + std::to_string(dim) + " " +
                               std::to_string(dim) + "\ntranslate 0 0 0\nscale 1\ndata\n";
    std::vector<std::uint8_t> out(header.begin(), header.end());
    out.insert(out.end(), payload.begin(), payload.end());
    return out;
}

std::vector<std::uint8_t> payload_of(const std::vector<std::uint8_t>& file) {
    const std::string marker = "data\n";
    const std::string text(file.begin(), file.end());
    const auto pos = text.find(marker);
    REQUIRE(pos != std::string::npos);
    return {file.begin() + static_cast<std::ptrdiff_t>(pos + marker.size()), file.end()};
}

}  // namespace

TEST_CASE("a single run fills the whole grid") {
    const auto g = read_binvox(binvox_bytes(2, {1, 8}));
    CHECK(g.n() == 2);
    CHECK(g.occupied_count() == 8);
}

TEST_CASE("runs decode in binvox order: y fastest, then z, then x") {
    const auto g = read_binvox(binvox_bytes(2, {0, 4, 1, 4}));
    // binvox order visits x = 0 first, so the x = 1 half is occupied
    for (std::size_t y = 0; y < 2; ++y)
        for (std::size_t z = 0; z < 2; ++z) {
            CHECK(g.at(0, y, z) == 0.0);
            CHECK(g.at(1, y, z) == 1.0);
        }
}

TEST_CASE("binvox y-fastest order maps onto the x-major grid") {
    const auto g = read_binvox(binvox_bytes(2, {0, 1, 1, 1, 0, 6}));
    CHECK(g.occupied_count() == 1);
    CHECK(g.at(0, 1, 0) == 1.0);
}

TEST_CASE("payload size must equal n^3") {
    CHECK_THROWS_WITH_AS(read_binvox(binvox_bytes(2, {1, 7})), doctest::Contains("RLE payload 7 ≠ 8"), ParseError);
    CHECK_THROWS_AS(read_binvox(binvox_bytes(2, {1, 9})), ParseError);
}

TEST_CASE("malformed headers are rejected") {
    const std::string bad = "#binvox 2\ndim 2 2 2\ndata\n";
    CHECK_THROWS_AS(read_binvox(std::vector<std::uint8_t>(bad.begin(), bad.end())), ParseError);
    const std::string noncubic = "#binvox 1\ndim 2 3 2\ntranslate 0 0 0\nscale 1\ndata\n";
    CHECK_THROWS_AS(read_binvox(std::vector<std::uint8_t>(noncubic.begin(), noncubic.end())), ParseError);
}

TEST_CASE("an empty 4^3 grid writes one maximal run") {
    const auto payload = payload_of(write_binvox(VoxelGrid(4)));
    CHECK(payload == std::vector<std::uint8_t>{0, 64});
}

TEST_CASE("runs longer than 255 are split") {
    const auto payload = payload_of(write_binvox(VoxelGrid(8)));
    CHECK(payload == std::vector<std::uint8_t>{0, 255, 0, 255, 0, 2});
}

TEST_CASE("header metadata survives a round trip") {
    VoxelGrid g(4, {1.5, -2.25, 0.1}, 3.75);
    g.set(1, 2, 3, 1.0);
    const auto back = read_binvox(write_binvox(g));
    CHECK(back == g);
}

TEST_CASE("random binary grids round-trip exactly") {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 100; ++i) {
        const auto g = testing::random_binary_grid(8, rng, 0.05 + 0.009 * i);
        CHECK(read_binvox(write_binvox(g)) == g);
    }
}
