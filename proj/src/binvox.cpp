#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iterator>
#include <string>

#include "molmom/error.hpp"
#include "molmom/voxel.hpp"

namespace molmom {

namespace {

class HeaderReader {
public:
    explicit HeaderReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

    // Next '\n'-terminated line without the terminator; throws at end of input.
    std::string next_line() {
        std::string line;
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') line.push_back(static_cast<char>(bytes_[pos_++]));
        if (pos_ >= bytes_.size()) throw ParseError("truncated binvox header", line_ + 1);
        ++pos_;
        ++line_;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        return line;
    }
    std::size_t pos() const { return pos_; }
    std::size_t line() const { return line_; }

private:
    std::span<const std::uint8_t> bytes_;
    std::size_t pos_ = 0;
    std::size_t line_ = 0;
};

template <class T>
T parse_number(std::string_view tok, std::size_t line) {
    T v{};
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc{} || ptr != tok.data() + tok.size())
        throw ParseError("bad number '" + std::string(tok) + "' in binvox header", line);
    return v;
}

std::vector<std::string_view> fields(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && s[i] == ' ') ++i;
        std::size_t j = i;
        while (j < s.size() && s[j] != ' ') ++j;
        if (j > i) out.push_back(s.substr(i, j - i));
        i = j;
    }
    return out;
}

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

}  // namespace

VoxelGrid read_binvox(std::span<const std::uint8_t> bytes) {
    HeaderReader in(bytes);
    if (in.next_line() != "#binvox 1") throw ParseError("bad magic, expected '#binvox 1'", 1);

    std::size_t dim = 0;
    Vec3 translate{0, 0, 0};
    double scale = 1.0;
    for (;;) {
        const auto line = in.next_line();
        const auto f = fields(line);
        if (f.empty()) continue;
        if (f[0] == "data") break;
        if (f[0] == "dim") {
            if (f.size() != 4) throw ParseError("dim needs three values", in.line());
            const auto d0 = parse_number<std::size_t>(f[1], in.line());
            const auto d1 = parse_number<std::size_t>(f[2], in.line());
            const auto d2 = parse_number<std::size_t>(f[3], in.line());
            if (d0 != d1 || d1 != d2) throw ParseError("non-cubic dim " + line.substr(4), in.line());
            dim = d0;
        } else if (f[0] == "translate") {
            if (f.size() != 4) throw ParseError("translate needs three values", in.line());
            for (int d = 0; d < 3; ++d) translate[d] = parse_number<double>(f[d + 1], in.line());
        } else if (f[0] == "scale") {
            if (f.size() != 2) throw ParseError("scale needs one value", in.line());
            scale = parse_number<double>(f[1], in.line());
        } else {
            throw ParseError("unknown binvox header keyword '" + std::string(f[0]) + "'", in.line());
        }
    }
    if (dim < 2) throw ParseError("missing or too small dim in binvox header");

    const std::size_t total = dim * dim * dim;
    const auto payload = bytes.subspan(in.pos());
    if (payload.size() % 2 != 0) throw ParseError("RLE payload has an odd number of bytes");

    std::vector<double> binvox_order;
    binvox_order.reserve(total);
    std::size_t decoded = 0;
    for (std::size_t i = 0; i < payload.size(); i += 2) {
        const double value = payload[i] ? 1.0 : 0.0;
        const std::size_t count = payload[i + 1];
        decoded += count;
        if (decoded <= total) binvox_order.insert(binvox_order.end(), count, value);
    }
    if (decoded != total)
        throw ParseError("RLE payload " + std::to_string(decoded) + " ≠ " + std::to_string(total));

    VoxelGrid grid(dim, translate, scale);
    std::size_t b = 0;
    for (std::size_t x = 0; x < dim; ++x)
        for (std::size_t z = 0; z < dim; ++z)
            for (std::size_t y = 0; y < dim; ++y) grid.set(x, y, z, binvox_order[b++]);
    return grid;
}

std::vector<std::uint8_t> write_binvox(const VoxelGrid& grid) {
    const auto n = grid.n();
    std::string header = "#binvox 1\n";
    header += "dim " + std::to_string(n) + " " + std::to_string(n) + " " + std::to_string(n) + "\n";
    header += "translate " + format_double(grid.translate()[0]) + " " +
              format_double(grid.translate()[1]) + " " + format_double(grid.translate()[2]) + "\n";
    header += "scale " + format_double(grid.scale()) + "\n";
    header += "data\n";

    std::vector<std::uint8_t> out(header.begin(), header.end());
    std::uint8_t run_value = 0;
    std::size_t run = 0;
    auto flush = [&] {
        while (run > 0) {
            const auto chunk = std::min<std::size_t>(run, 255);
            out.push_back(run_value);
            out.push_back(static_cast<std::uint8_t>(chunk));
            run -= chunk;
        }
    };
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t z = 0; z < n; ++z)
            for (std::size_t y = 0; y < n; ++y) {
                const std::uint8_t v = grid.at(x, y, z) >= 0.5 ? 1 : 0;
                if (run > 0 && v != run_value) flush();
                run_value = v;
                ++run;
            }
    flush();
    return out;
}

VoxelGrid load_binvox(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path);
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return read_binvox(bytes);
}

void save_binvox(const VoxelGrid& grid, const std::string& path) {
    const auto bytes = write_binvox(grid);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path);
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error("write failed for " + path);
}

}  // namespace molmom
