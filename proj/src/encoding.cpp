#include "molmom/encoding.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>

#include "molmom/error.hpp"

namespace molmom {

namespace {

std::uint64_t bits_of(double d) { return std::bit_cast<std::uint64_t>(d); }
double double_of(std::uint64_t b) { return std::bit_cast<double>(b); }

std::uint64_t reverse_bits(std::uint64_t v) {
    std::uint64_t r = 0;
    for (int i = 0; i < 64; ++i) r |= ((v >> i) & 1u) << (63 - i);
    return r;
}

std::uint64_t byte_swap(std::uint64_t v) {
    std::uint64_t r = 0;
    for (int i = 0; i < 8; ++i) r |= ((v >> (8 * i)) & 0xffu) << (8 * (7 - i));
    return r;
}

// odd lane on bits 2i+1, even lane on bits 2i
uint128 spread(std::uint64_t odd, std::uint64_t even) {
    uint128 out = 0;
    for (int i = 0; i < 64; ++i) {
        out |= static_cast<uint128>((odd >> i) & 1u) << (2 * i + 1);
        out |= static_cast<uint128>((even >> i) & 1u) << (2 * i);
    }
    return out;
}

}  // namespace

std::string to_decimal(uint128 v) {
    if (v == 0) return "0";
    std::string s;
    while (v > 0) {
        s.push_back(static_cast<char>('0' + static_cast<int>(v % 10)));
        v /= 10;
    }
    std::reverse(s.begin(), s.end());
    return s;
}

uint128 parse_uint128(std::string_view s) {
    if (s.empty()) throw ParseError("empty integer");
    if (s.size() > 1 && s[0] == '0') throw ParseError("leading zero in '" + std::string(s) + "'");
    const uint128 max = ~static_cast<uint128>(0);
    uint128 v = 0;
    for (char c : s) {
        if (c < '0' || c > '9') throw ParseError("not a decimal integer: '" + std::string(s) + "'");
        const auto d = static_cast<unsigned>(c - '0');
        if (v > (max - d) / 10) throw ParseError("integer exceeds 128 bits: '" + std::string(s) + "'");
        v = v * 10 + d;
    }
    return v;
}

std::string EncodedFeature::decimal() const { return to_decimal(value); }

EncodedFeature interleave(Complex c) {
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
        throw DomainError("cannot interleave a non-finite complex value");
    return {spread(bits_of(c.real()), bits_of(c.imag()))};
}

Deinterleaved deinterleave(EncodedFeature e) {
    std::uint64_t re = 0, im = 0;
    for (int i = 0; i < 64; ++i) {
        re |= static_cast<std::uint64_t>((e.value >> (2 * i + 1)) & 1u) << i;
        im |= static_cast<std::uint64_t>((e.value >> (2 * i)) & 1u) << i;
    }
    const Complex c(double_of(re), double_of(im));
    return {c, std::isfinite(c.real()) && std::isfinite(c.imag())};
}

std::vector<std::string> encode_feature_vector(const FeatureVector& fv) {
    std::vector<std::string> out;
    out.reserve(fv.values.size());
    const bool cplx = is_spherical(fv.family);
    for (const auto& v : fv.values) out.push_back(interleave(cplx ? v : Complex(v.real(), 0.0)).decimal());
    return out;
}

Complex decode_feature(std::string_view decimal) {
    const auto d = deinterleave({parse_uint128(decimal)});
    if (!d.finite) throw ParseError("encoded feature '" + std::string(decimal) + "' holds a non-finite lane");
    return d.value;
}

std::string InterleaveVariant::name() const {
    std::string s = real_on_odd ? "real-odd" : "real-even";
    s += lane_reversed ? "/lsb-first" : "/msb-first";
    s += byte_swapped ? "/byte-swapped" : "/native";
    return s;
}

std::array<InterleaveVariant, 8> all_interleave_variants() {
    std::array<InterleaveVariant, 8> out{};
    for (int i = 0; i < 8; ++i) out[static_cast<std::size_t>(i)] = {(i & 1) == 0, (i & 2) != 0, (i & 4) != 0};
    return out;
}

uint128 interleave_variant(Complex c, const InterleaveVariant& v) {
    auto lane = [&](double d) {
        auto b = bits_of(d);
        if (v.byte_swapped) b = byte_swap(b);
        if (v.lane_reversed) b = reverse_bits(b);
        return b;
    };
    const auto re = lane(c.real()), im = lane(c.imag());
    return v.real_on_odd ? spread(re, im) : spread(im, re);
}

const std::array<ReferenceRow, 5>& reference_rows() {
    // Zero-order moments of MDMA and their published encodings (print breaks removed).
    static const std::array<ReferenceRow, 5> rows{{
        {"geometric", "306425", "42545721700200699567041133799352041472"},
        {"complex", "16130711836.218561", "42576847550484374798153183560267891362"},
        {"legendre", "0.000285380519926548", "14175173924443230618113893434503725056"},
        {"zernike", "7708.229987404831", "42538108148784362155157822007266511528"},
        {"hahn", "0.12138471769954105", "14177782865744079550609449631697511082"},
    }};
    return rows;
}

std::vector<VariantReport> search_reference_encoding() {
    std::vector<VariantReport> out;
    for (const auto& variant : all_interleave_variants()) {
        VariantReport rep{variant, 0, {}};
        for (std::size_t r = 0; r < reference_rows().size(); ++r) {
            const auto& row = reference_rows()[r];
            const double value = std::stod(std::string(row.original));
            const auto got = to_decimal(interleave_variant(Complex(value, 0.0), variant));
            int same = 0;
            while (static_cast<std::size_t>(same) < std::min(got.size(), row.encoded.size()) &&
                   got[static_cast<std::size_t>(same)] == row.encoded[static_cast<std::size_t>(same)])
                ++same;
            rep.leading_digits[r] = same;
            if (got == row.encoded) ++rep.exact_matches;
        }
        out.push_back(rep);
    }
    return out;
}

}  // namespace molmom
