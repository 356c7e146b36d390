#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "molmom/moments.hpp"
#include "molmom/special.hpp"

namespace molmom {

__extension__ using uint128 = unsigned __int128;

// Cartesian bit interleaving of a complex value into one 128-bit integer.
//
// Bit i of the IEEE-754 pattern of re lands on bit 2i+1, bit i of im on bit 2i,
// so the real lane occupies the odd positions and its most significant bit is
// the most significant bit of the result. A value with im = 0 therefore has
// every even bit clear.
struct EncodedFeature {
    uint128 value = 0;
    std::string decimal() const;
    friend bool operator==(const EncodedFeature&, const EncodedFeature&) = default;
};

EncodedFeature interleave(Complex c);  // throws DomainError on NaN/Inf

struct Deinterleaved {
    Complex value;
    bool finite = true;  // false when either lane holds a NaN or Inf pattern
};
Deinterleaved deinterleave(EncodedFeature e);

// Base-10 rendering: no sign, no separators, "0" for zero.
std::string to_decimal(uint128 v);
uint128 parse_uint128(std::string_view s);  // throws ParseError

// Real families are encoded as (value, 0).
std::vector<std::string> encode_feature_vector(const FeatureVector& fv);
Complex decode_feature(std::string_view decimal);

// --- bit-order search over the zero-order rows of the published table ---

struct InterleaveVariant {
    bool real_on_odd = true;     // real lane on odd bit positions
    bool lane_reversed = false;  // lane bit i goes to pair 63-i
    bool byte_swapped = false;   // lanes taken from the byte-swapped IEEE pattern
    std::string name() const;
};

std::array<InterleaveVariant, 8> all_interleave_variants();
uint128 interleave_variant(Complex c, const InterleaveVariant& v);

struct ReferenceRow {
    std::string_view family;
    std::string_view original;  // as printed, whitespace removed
    std::string_view encoded;
};
const std::array<ReferenceRow, 5>& reference_rows();

struct VariantReport {
    InterleaveVariant variant;
    int exact_matches = 0;
    std::array<int, 5> leading_digits{};  // leading decimal digits shared with each row
};
std::vector<VariantReport> search_reference_encoding();

}  // namespace molmom
