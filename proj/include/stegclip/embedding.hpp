#pragma once

// Payload embedding.
//
// Carrier addressing (all clip-global, frame-major then row-major):
//   reserved prefix  the first ceil(bits/3) pixels, where bits = 8*(23 + map_len);
//                    header and map ride in the LSBs of its first `bits` bytes
//   static stream    the remaining STATIC pixels, in order; the key's progression
//                    start_i + (j-1)*step_d (1-based) picks which of them carry
//                    a whole payload triplet as (R,G,B)
//   dynamic stream   every channel byte of the remaining DYNAMIC pixels; each
//                    carries one payload bit as its parity
//
// Parity writes only ever move a byte by one: odd values step down, even
// values step up, so nothing wraps.

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "error.hpp"
#include "frame.hpp"
#include "header.hpp"
#include "keying.hpp"
#include "motion.hpp"

namespace stegclip {

inline constexpr std::uint64_t kUnbounded = std::numeric_limits<std::uint64_t>::max();

// How many progression terms start_i + (j-1)*step_d stay <= limit.
inline std::uint64_t max_ap_count(std::uint64_t start_i, std::uint64_t step_d, std::uint64_t limit) {
    if (start_i < 1 || step_d < 1) {
        throw Error(ErrorCode::InvalidArgument, "progression needs start_i >= 1 and step_d >= 1");
    }
    return limit < start_i ? 0 : (limit - start_i) / step_d + 1;
}

// 1-based positions start_i, start_i + step_d, ... (count terms), all <= limit.
inline std::vector<std::uint64_t> ap_positions(std::uint64_t start_i, std::uint64_t step_d, std::uint64_t count,
                                               std::uint64_t limit = kUnbounded) {
    const auto admissible = max_ap_count(start_i, step_d, limit);
    if (count > admissible) {
        throw Error(ErrorCode::OutOfRange, std::to_string(count) + " positions requested but only " +
                                               std::to_string(admissible) + " fit below " + std::to_string(limit));
    }
    std::vector<std::uint64_t> positions(count);
    for (std::uint64_t j = 0; j < count; ++j) {
        positions[j] = start_i + j * step_d;
    }
    return positions;
}

inline std::uint64_t reserved_bits_for(std::size_t map_len) { return 8 * (kHeaderSize + map_len); }
inline std::uint64_t reserved_pixels_for(std::size_t map_len) { return (reserved_bits_for(map_len) + 2) / 3; }

struct EmbedPlan {
    std::uint64_t reserved_slot_count = 0; // LSB slots holding header + map
    std::uint64_t reserved_pixel_count = 0;
    std::uint64_t start_i = 1;
    std::uint64_t step_d = 1;
    std::vector<std::uint64_t> static_slots;  // global pixel indices
    std::vector<std::uint64_t> dynamic_slots; // global byte indices
    std::uint64_t capacity_static_bytes = 0;
    std::uint64_t capacity_dynamic_bits = 0;

    bool operator==(const EmbedPlan&) const = default;
};

inline EmbedPlan build_plan(const RegionMap& map, const KeyMaterial& km, std::size_t map_bytes_len) {
    const auto total_bytes = static_cast<std::uint64_t>(map.size()) * kChannels;
    EmbedPlan plan;
    plan.reserved_slot_count = reserved_bits_for(map_bytes_len);
    if (plan.reserved_slot_count > total_bytes) {
        throw Error(ErrorCode::ClipTooSmall, "header and region map need " + std::to_string(plan.reserved_slot_count) +
                                                 " LSB slots but the clip has " + std::to_string(total_bytes) + " bytes");
    }
    plan.reserved_pixel_count = reserved_pixels_for(map_bytes_len);
    plan.start_i = km.start_i;
    plan.step_d = km.step_d;

    for (std::uint64_t p = plan.reserved_pixel_count; p < map.size(); ++p) {
        if (map[p] == Label::Static) {
            plan.static_slots.push_back(p);
        } else {
            for (std::uint64_t c = 0; c < kChannels; ++c) plan.dynamic_slots.push_back(p * kChannels + c);
        }
    }
    plan.capacity_static_bytes = 3 * max_ap_count(km.start_i, km.step_d, plan.static_slots.size());
    plan.capacity_dynamic_bits = plan.dynamic_slots.size();
    return plan;
}

// Global pixel indices that receive static payload triplets, in payload order.
inline std::vector<std::uint64_t> static_pixels_for(const EmbedPlan& plan, std::size_t payload_len) {
    const auto triplets = (payload_len + 2) / 3;
    const auto positions = ap_positions(plan.start_i, plan.step_d, triplets, plan.static_slots.size());
    std::vector<std::uint64_t> pixels(positions.size());
    for (std::size_t j = 0; j < positions.size(); ++j) pixels[j] = plan.static_slots[positions[j] - 1];
    return pixels;
}

// Sets the parity of one carrier byte.
inline std::uint8_t with_parity(std::uint8_t v, unsigned bit) {
    if ((v & 1u) == bit) return v;
    return bit == 0 ? static_cast<std::uint8_t>(v - 1) : static_cast<std::uint8_t>(v + 1);
}

namespace embed_detail {

// Writes bytes MSB-first into the parities of slot(k) for k = 0, 1, ...
template <typename SlotFn>
void write_parity_bits(Clip& clip, std::span<const std::uint8_t> bytes, SlotFn&& slot) {
    std::uint64_t k = 0;
    for (const auto byte : bytes) {
        for (int bit = 7; bit >= 0; --bit, ++k) {
            auto& v = clip.byte_at(slot(k));
            v = with_parity(v, (byte >> bit) & 1u);
        }
    }
}

inline void check_static_capacity(const EmbedPlan& plan, std::size_t len) {
    if (len > plan.capacity_static_bytes) {
        throw Error(ErrorCode::CapacityExceeded, "Secret Data size is more than the static region holds (" +
                                                     std::to_string(len) + " > " +
                                                     std::to_string(plan.capacity_static_bytes) + " bytes)");
    }
}

inline void check_dynamic_capacity(const EmbedPlan& plan, std::size_t len) {
    if (8 * static_cast<std::uint64_t>(len) > plan.capacity_dynamic_bits) {
        throw Error(ErrorCode::CapacityExceeded, "dynamic payload needs " + std::to_string(8 * len) +
                                                     " bits but the dynamic region holds " +
                                                     std::to_string(plan.capacity_dynamic_bits));
    }
}

} // namespace embed_detail

// Substitutes already-masked bytes into the AP-selected static pixels, three per pixel.
inline void place_static(Clip& clip, const EmbedPlan& plan, std::span<const std::uint8_t> masked) {
    embed_detail::check_static_capacity(plan, masked.size());
    const auto pixels = static_pixels_for(plan, masked.size());
    for (std::size_t i = 0; i < masked.size(); ++i) {
        clip.byte_at(pixels[i / 3] * kChannels + i % 3) = masked[i];
    }
}

inline Clip embed_static(const Clip& clip, const EmbedPlan& plan, const KeyMaterial& km,
                         std::span<const std::uint8_t> payload) {
    embed_detail::check_static_capacity(plan, payload.size());
    Clip out = clip;
    place_static(out, plan, mask(payload, km.static_seed));
    return out;
}

inline Clip embed_dynamic(const Clip& clip, const EmbedPlan& plan, const KeyMaterial& km,
                          std::span<const std::uint8_t> payload) {
    embed_detail::check_dynamic_capacity(plan, payload.size());
    Clip out = clip;
    embed_detail::write_parity_bits(out, mask(payload, km.dynamic_seed),
                                    [&](std::uint64_t k) { return plan.dynamic_slots[k]; });
    return out;
}

// Masks header+map with the header keystream and writes it into the LSBs of
// the clip's leading bytes.
inline Clip embed_header(const Clip& clip, std::span<const std::uint8_t> header_plus_map, const KeyMaterial& km) {
    if (8 * static_cast<std::uint64_t>(header_plus_map.size()) > clip.total_bytes()) {
        throw Error(ErrorCode::ClipTooSmall, "header and region map need " +
                                                 std::to_string(8 * header_plus_map.size()) +
                                                 " LSB slots but the clip has " + std::to_string(clip.total_bytes()));
    }
    Clip out = clip;
    embed_detail::write_parity_bits(out, mask(header_plus_map, km.header_seed), [](std::uint64_t k) { return k; });
    return out;
}

// ---- pipeline ----

struct CapacityReport {
    DetectionMethod method = DetectionMethod::PixelDiff;
    std::uint64_t start_i = 0;
    std::uint64_t step_d = 0;
    std::uint64_t capacity_static_bytes = 0;
    std::uint64_t capacity_dynamic_bits = 0;
    std::uint64_t gross_static_bytes = 0; // as if no pixels were reserved
    std::uint64_t map_bytes = 0;
    std::uint64_t reserved_bits = 0;
    std::uint64_t reserved_pixels = 0;
    std::vector<std::uint64_t> per_frame_static_pixels;
    std::vector<std::uint64_t> per_frame_dynamic_pixels;

    std::uint64_t capacity_dynamic_bytes() const noexcept { return capacity_dynamic_bits / 8; }
};

struct EmbedReport {
    CapacityReport capacity;
    std::uint64_t static_bytes = 0;
    std::uint64_t dynamic_bytes = 0;
    std::uint64_t dynamic_slots_used = 0;
    std::vector<std::uint64_t> static_positions; // 1-based, into the static stream
    std::vector<std::uint64_t> static_pixels;    // clip-global pixel indices
    std::vector<std::uint64_t> per_frame_changed_pixels;
};

inline CapacityReport capacity_from(const RegionMap& map, DetectionMethod method, const KeyMaterial& km) {
    const auto map_bytes = encode_region_map(map);
    const auto plan = build_plan(map, km, map_bytes.size());
    CapacityReport r;
    r.method = method;
    r.start_i = km.start_i;
    r.step_d = km.step_d;
    r.capacity_static_bytes = plan.capacity_static_bytes;
    r.capacity_dynamic_bits = plan.capacity_dynamic_bits;
    r.gross_static_bytes = 3 * max_ap_count(km.start_i, km.step_d, map.count(Label::Static));
    r.map_bytes = map_bytes.size();
    r.reserved_bits = plan.reserved_slot_count;
    r.reserved_pixels = plan.reserved_pixel_count;
    for (std::size_t t = 0; t < map.frame_count(); ++t) {
        r.per_frame_static_pixels.push_back(map.count_in_frame(t, Label::Static));
        r.per_frame_dynamic_pixels.push_back(map.count_in_frame(t, Label::Dynamic));
    }
    return r;
}

inline CapacityReport capacity(const Clip& cover, const AnalysisParams& params, const KeyMaterial& km) {
    return capacity_from(analyze(cover, params), params.method, km);
}

inline CapacityReport capacity(const Clip& cover, const AnalysisParams& params, const std::optional<Bytes>& key) {
    return capacity(cover, params, derive_key_material(key));
}

struct EmbedResult {
    Clip stego;
    EmbedReport report;
};

inline std::vector<std::uint64_t> changed_pixels_per_frame(const Clip& a, const Clip& b) {
    std::vector<std::uint64_t> counts(a.frame_count(), 0);
    for (std::size_t t = 0; t < a.frame_count(); ++t) {
        const auto x = a.frame(t).bytes();
        const auto y = b.frame(t).bytes();
        for (std::size_t p = 0; p < a.pixels_per_frame(); ++p) {
            if (x[3 * p] != y[3 * p] || x[3 * p + 1] != y[3 * p + 1] || x[3 * p + 2] != y[3 * p + 2]) ++counts[t];
        }
    }
    return counts;
}

// Full pipeline with explicit key material. The static key material also
// governs the header keystream and the static progression.
inline EmbedResult embed_with(const Clip& cover, const AnalysisParams& params, std::span<const std::uint8_t> static_payload,
                              std::span<const std::uint8_t> dynamic_payload, const KeyMaterial& static_km,
                              const KeyMaterial& dynamic_km) {
    if (static_payload.empty() && dynamic_payload.empty()) {
        throw Error(ErrorCode::InvalidArgument, "nothing to embed: both payloads are empty");
    }
    constexpr auto kMaxLen = std::numeric_limits<std::uint32_t>::max();
    if (static_payload.size() > kMaxLen || dynamic_payload.size() > kMaxLen) {
        throw Error(ErrorCode::CapacityExceeded, "payload exceeds the 4 GiB header limit");
    }

    const auto map = analyze(cover, params);
    const auto map_bytes = encode_region_map(map);
    const auto plan = build_plan(map, static_km, map_bytes.size());
    embed_detail::check_static_capacity(plan, static_payload.size());
    embed_detail::check_dynamic_capacity(plan, dynamic_payload.size());

    StegoHeader header;
    header.method = params.method;
    header.flags = static_cast<std::uint8_t>((static_payload.empty() ? 0 : kFlagStatic) |
                                             (dynamic_payload.empty() ? 0 : kFlagDynamic));
    header.static_len = static_cast<std::uint32_t>(static_payload.size());
    header.dynamic_len = static_cast<std::uint32_t>(dynamic_payload.size());

    Clip stego = embed_header(cover, serialize_header(header, map_bytes), static_km);
    place_static(stego, plan, mask(static_payload, static_km.static_seed));
    embed_detail::write_parity_bits(stego, mask(dynamic_payload, dynamic_km.dynamic_seed),
                                    [&](std::uint64_t k) { return plan.dynamic_slots[k]; });

    EmbedReport report;
    report.capacity = capacity_from(map, params.method, static_km);
    report.static_bytes = static_payload.size();
    report.dynamic_bytes = dynamic_payload.size();
    report.dynamic_slots_used = 8 * dynamic_payload.size();
    report.static_positions = ap_positions(plan.start_i, plan.step_d, (static_payload.size() + 2) / 3,
                                           plan.static_slots.size());
    report.static_pixels = static_pixels_for(plan, static_payload.size());
    report.per_frame_changed_pixels = changed_pixels_per_frame(cover, stego);
    return {std::move(stego), std::move(report)};
}

// Keys as raw bytes; the dynamic key defaults to the static key.
inline EmbedResult embed(const Clip& cover, const AnalysisParams& params, const std::optional<Bytes>& static_payload,
                         const std::optional<Bytes>& dynamic_payload, const std::optional<Bytes>& static_key = std::nullopt,
                         const std::optional<Bytes>& dynamic_key = std::nullopt) {
    const auto static_km = derive_key_material(static_key);
    const auto dynamic_km = dynamic_key ? derive_key_material(dynamic_key) : static_km;
    static const Bytes kEmpty;
    return embed_with(cover, params, static_payload ? *static_payload : kEmpty,
                      dynamic_payload ? *dynamic_payload : kEmpty, static_km, dynamic_km);
}

// ---- key-value text ----

namespace report_detail {

inline std::string join(const std::vector<std::uint64_t>& values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(values[i]);
    }
    return out;
}

} // namespace report_detail

inline std::string to_key_value(const CapacityReport& r) {
    std::ostringstream os;
    os << "method=" << to_string(r.method) << '\n'
       << "start_i=" << r.start_i << '\n'
       << "step_d=" << r.step_d << '\n'
       << "capacity_static_bytes=" << r.capacity_static_bytes << '\n'
       << "capacity_dynamic_bits=" << r.capacity_dynamic_bits << '\n'
       << "capacity_dynamic_bytes=" << r.capacity_dynamic_bytes() << '\n'
       << "gross_static_bytes=" << r.gross_static_bytes << '\n'
       << "map_bytes=" << r.map_bytes << '\n'
       << "reserved_bits=" << r.reserved_bits << '\n'
       << "reserved_pixels=" << r.reserved_pixels << '\n'
       << "per_frame_static_pixels=" << report_detail::join(r.per_frame_static_pixels) << '\n'
       << "per_frame_dynamic_pixels=" << report_detail::join(r.per_frame_dynamic_pixels) << '\n';
    return os.str();
}

inline std::string to_key_value(const EmbedReport& r) {
    std::ostringstream os;
    os << to_key_value(r.capacity) << "static_bytes=" << r.static_bytes << '\n'
       << "dynamic_bytes=" << r.dynamic_bytes << '\n'
       << "static_pixels_used=" << r.static_pixels.size() << '\n'
       << "dynamic_slots_used=" << r.dynamic_slots_used << '\n'
       << "per_frame_changed_pixels=" << report_detail::join(r.per_frame_changed_pixels) << '\n';
    return os.str();
}

} // namespace stegclip
