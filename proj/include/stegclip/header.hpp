#pragma once

// In-band metadata written ahead of the payloads.
//
// Fixed part, 23 bytes, little-endian:
//   0  magic      "SMC1"
//   4  version    1
//   5  method     1 pixel-diff, 2 block, 3 histogram
//   6  flags      bit0 static payload, bit1 dynamic payload
//   7  static_len u32
//  11  dynamic_len u32
//  15  map_len    u32
//  19  crc        u32, CRC-32 of bytes 0..18 followed by the map bytes
//
// The serialized region map follows immediately: LEB128 run lengths over the
// frame-major pixel mask, labels alternating and starting with STATIC.

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "crc32.hpp"
#include "error.hpp"
#include "keying.hpp"
#include "motion.hpp"

namespace stegclip {

inline constexpr std::array<std::uint8_t, 4> kMagic{0x53, 0x4D, 0x43, 0x31};
inline constexpr std::uint8_t kVersion = 1;
inline constexpr std::size_t kHeaderSize = 23;
inline constexpr std::uint8_t kFlagStatic = 0x01;
inline constexpr std::uint8_t kFlagDynamic = 0x02;

struct StegoHeader {
    std::uint8_t version = kVersion;
    DetectionMethod method = DetectionMethod::PixelDiff;
    std::uint8_t flags = 0;
    std::uint32_t static_len = 0;
    std::uint32_t dynamic_len = 0;
    std::uint32_t map_len = 0;
    std::uint32_t crc = 0;

    bool has_static() const noexcept { return flags & kFlagStatic; }
    bool has_dynamic() const noexcept { return flags & kFlagDynamic; }

    bool operator==(const StegoHeader&) const = default;
};

namespace header_detail {

inline void put_u32(std::uint8_t* out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out[i] = static_cast<std::uint8_t>(v >> (8 * i));
}

inline std::uint32_t get_u32(const std::uint8_t* in) {
    return static_cast<std::uint32_t>(in[0]) | (static_cast<std::uint32_t>(in[1]) << 8) |
           (static_cast<std::uint32_t>(in[2]) << 16) | (static_cast<std::uint32_t>(in[3]) << 24);
}

} // namespace header_detail

// CRC over the first 19 header bytes and the map bytes.
inline std::uint32_t header_crc(std::span<const std::uint8_t> fixed, std::span<const std::uint8_t> map_bytes) {
    return Crc32{}.update(fixed.first(kHeaderSize - 4)).update(map_bytes).value();
}

// Plaintext header followed by map bytes; the crc field is computed here.
inline Bytes serialize_header(StegoHeader header, std::span<const std::uint8_t> map_bytes) {
    using header_detail::put_u32;
    header.map_len = static_cast<std::uint32_t>(map_bytes.size());
    Bytes out(kHeaderSize + map_bytes.size());
    std::copy(kMagic.begin(), kMagic.end(), out.begin());
    std::copy(map_bytes.begin(), map_bytes.end(), out.begin() + kHeaderSize);
    out[4] = header.version;
    out[5] = static_cast<std::uint8_t>(header.method);
    out[6] = header.flags;
    put_u32(&out[7], header.static_len);
    put_u32(&out[11], header.dynamic_len);
    put_u32(&out[15], header.map_len);
    put_u32(&out[19], header_crc(out, map_bytes));
    return out;
}

// Parses the fixed part only (magic and version checked, crc not verified).
inline StegoHeader parse_fixed_header(std::span<const std::uint8_t> fixed) {
    using header_detail::get_u32;
    if (fixed.size() < kHeaderSize) {
        throw Error(ErrorCode::ClipTooSmall, "header needs 23 bytes");
    }
    if (!std::equal(kMagic.begin(), kMagic.end(), fixed.begin())) {
        throw Error(ErrorCode::BadMagic, "no stego header found (wrong key or not a stego clip)");
    }
    StegoHeader h;
    h.version = fixed[4];
    if (h.version != kVersion) {
        throw Error(ErrorCode::UnsupportedVersion, "header version " + std::to_string(h.version));
    }
    h.method = static_cast<DetectionMethod>(fixed[5]);
    h.flags = fixed[6];
    h.static_len = get_u32(&fixed[7]);
    h.dynamic_len = get_u32(&fixed[11]);
    h.map_len = get_u32(&fixed[15]);
    h.crc = get_u32(&fixed[19]);
    return h;
}

// Checks the fields the crc cannot vouch for semantically.
inline void validate_header(const StegoHeader& h) {
    const auto m = static_cast<std::uint8_t>(h.method);
    if (m < 1 || m > 3) {
        throw Error(ErrorCode::CorruptHeader, "unknown detection method " + std::to_string(m));
    }
    if ((h.flags & ~(kFlagStatic | kFlagDynamic)) != 0 || (!h.has_static() && h.static_len != 0) ||
        (!h.has_dynamic() && h.dynamic_len != 0)) {
        throw Error(ErrorCode::CorruptHeader, "payload flags disagree with payload lengths");
    }
}

// ---- region map run-length codec ----

inline void put_leb128(Bytes& out, std::uint64_t v) {
    do {
        std::uint8_t byte = v & 0x7F;
        v >>= 7;
        if (v != 0) byte |= 0x80;
        out.push_back(byte);
    } while (v != 0);
}

inline std::uint64_t get_leb128(std::span<const std::uint8_t> in, std::size_t& pos) {
    std::uint64_t v = 0;
    for (int shift = 0; shift < 64; shift += 7) {
        if (pos >= in.size()) {
            throw Error(ErrorCode::CorruptHeader, "region map ends inside a varint");
        }
        const auto byte = in[pos++];
        v |= static_cast<std::uint64_t>(byte & 0x7F) << shift;
        if ((byte & 0x80) == 0) return v;
    }
    throw Error(ErrorCode::CorruptHeader, "region map varint too long");
}

inline Bytes encode_region_map(const RegionMap& map) {
    Bytes out;
    const auto labels = map.labels();
    Label current = Label::Static;
    std::uint64_t run = 0;
    for (const auto l : labels) {
        if (l == current) {
            ++run;
        } else {
            put_leb128(out, run);
            current = l;
            run = 1;
        }
    }
    put_leb128(out, run);
    return out;
}

inline RegionMap decode_region_map(std::span<const std::uint8_t> bytes, std::size_t width, std::size_t height,
                                   std::size_t frame_count) {
    RegionMap map(width, height, frame_count);
    const auto total = map.size();
    std::size_t pos = 0;
    std::size_t filled = 0;
    Label current = Label::Static;
    bool first = true;
    while (pos < bytes.size()) {
        const auto run = get_leb128(bytes, pos);
        if (run == 0 && !first) {
            throw Error(ErrorCode::CorruptHeader, "zero-length run inside region map");
        }
        if (run > total - filled) {
            throw Error(ErrorCode::CorruptHeader, "region map runs exceed pixel count");
        }
        for (std::uint64_t k = 0; k < run; ++k) map[filled++] = current;
        current = current == Label::Static ? Label::Dynamic : Label::Static;
        first = false;
    }
    if (filled != total) {
        throw Error(ErrorCode::CorruptHeader, "region map covers " + std::to_string(filled) + " of " +
                                                  std::to_string(total) + " pixels");
    }
    return map;
}

} // namespace stegclip
