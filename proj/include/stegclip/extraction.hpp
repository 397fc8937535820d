#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>

#include "embedding.hpp"
#include "error.hpp"
#include "frame.hpp"
#include "header.hpp"
#include "keying.hpp"
#include "motion.hpp"

namespace stegclip {

namespace extract_detail {

// Packs parities of slot(first..first+8*n) MSB-first into n bytes.
template <typename SlotFn>
Bytes read_parity_bytes(const Clip& clip, std::size_t n, std::uint64_t first, SlotFn&& slot) {
    Bytes out(n, 0);
    std::uint64_t k = first;
    for (auto& byte : out) {
        for (int bit = 0; bit < 8; ++bit, ++k) {
            byte = static_cast<std::uint8_t>((byte << 1) | (clip.byte_at(slot(k)) & 1u));
        }
    }
    return out;
}

} // namespace extract_detail

struct DecodedHeader {
    StegoHeader header;
    RegionMap map;
    Bytes map_bytes;
};

inline DecodedHeader read_header(const Clip& stego, const KeyMaterial& km) {
    const auto identity = [](std::uint64_t k) { return k; };
    if (8 * kHeaderSize > stego.total_bytes()) {
        throw Error(ErrorCode::ClipTooSmall, "clip has fewer than 184 bytes");
    }
    Keystream ks(km.header_seed);
    auto fixed = extract_detail::read_parity_bytes(stego, kHeaderSize, 0, identity);
    ks.apply(fixed);
    const auto header = parse_fixed_header(fixed);

    if (reserved_bits_for(header.map_len) > stego.total_bytes()) {
        throw Error(ErrorCode::ClipTooSmall, "header claims a " + std::to_string(header.map_len) +
                                                 "-byte region map that cannot fit in this clip");
    }
    auto map_bytes = extract_detail::read_parity_bytes(stego, header.map_len, 8 * kHeaderSize, identity);
    ks.apply(map_bytes);
    if (header_crc(fixed, map_bytes) != header.crc) {
        throw Error(ErrorCode::CrcMismatch, "header checksum mismatch (wrong key or corrupted clip)");
    }
    validate_header(header);
    auto map = decode_region_map(map_bytes, stego.width(), stego.height(), stego.frame_count());
    return {header, std::move(map), std::move(map_bytes)};
}

inline Bytes extract_static(const Clip& stego, const EmbedPlan& plan, const KeyMaterial& km, std::size_t length) {
    if (length > plan.capacity_static_bytes) {
        throw Error(ErrorCode::OutOfRange, "static length " + std::to_string(length) + " exceeds capacity " +
                                               std::to_string(plan.capacity_static_bytes));
    }
    const auto pixels = static_pixels_for(plan, length);
    Bytes out(length);
    for (std::size_t i = 0; i < length; ++i) {
        out[i] = stego.byte_at(pixels[i / 3] * kChannels + i % 3);
    }
    Keystream(km.static_seed).apply(out);
    return out;
}

inline Bytes extract_dynamic(const Clip& stego, const EmbedPlan& plan, const KeyMaterial& km, std::size_t length) {
    if (8 * static_cast<std::uint64_t>(length) > plan.capacity_dynamic_bits) {
        throw Error(ErrorCode::OutOfRange, "dynamic length " + std::to_string(length) + " exceeds capacity " +
                                               std::to_string(plan.capacity_dynamic_bits / 8));
    }
    auto out = extract_detail::read_parity_bytes(stego, length, 0, [&](std::uint64_t k) { return plan.dynamic_slots[k]; });
    Keystream(km.dynamic_seed).apply(out);
    return out;
}

struct ExtractResult {
    Bytes static_payload;
    Bytes dynamic_payload;
    DetectionMethod method = DetectionMethod::PixelDiff;
    RegionMap map;
    EmbedPlan plan;
};

inline ExtractResult extract_with(const Clip& stego, const KeyMaterial& static_km, const KeyMaterial& dynamic_km) {
    auto decoded = read_header(stego, static_km);
    ExtractResult result;
    result.method = decoded.header.method;
    result.plan = build_plan(decoded.map, static_km, decoded.map_bytes.size());
    if (decoded.header.has_static()) {
        result.static_payload = extract_static(stego, result.plan, static_km, decoded.header.static_len);
    }
    if (decoded.header.has_dynamic()) {
        result.dynamic_payload = extract_dynamic(stego, result.plan, dynamic_km, decoded.header.dynamic_len);
    }
    result.map = std::move(decoded.map);
    return result;
}

inline ExtractResult extract(const Clip& stego, const std::optional<Bytes>& static_key = std::nullopt,
                             const std::optional<Bytes>& dynamic_key = std::nullopt) {
    const auto static_km = derive_key_material(static_key);
    const auto dynamic_km = dynamic_key ? derive_key_material(dynamic_key) : static_km;
    return extract_with(stego, static_km, dynamic_km);
}

} // namespace stegclip
