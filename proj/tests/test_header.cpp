#include <gtest/gtest.h>

#include <random>

#include "stegclip/stegclip.hpp"
#include "test_support.hpp"

namespace stegclip {
namespace {

TEST(RegionCodec, AllStaticIsOneRun) {
    const RegionMap map(10, 10, 1);
    EXPECT_EQ(encode_region_map(map), (Bytes{100}));
}

TEST(RegionCodec, LeadingDynamicGetsZeroRun) {
    RegionMap map(3, 1, 1);
    map[0] = Label::Dynamic;
    EXPECT_EQ(encode_region_map(map), (Bytes{0, 1, 2}));
    EXPECT_EQ(decode_region_map(encode_region_map(map), 3, 1, 1), map);
}

TEST(RegionCodec, MultiByteVarint) {
    const RegionMap map(800, 600, 1); // 480000 = 0x75300
    EXPECT_EQ(encode_region_map(map), (Bytes{0x80, 0xA6, 0x1D}));
}

TEST(RegionCodec, RoundTripProperty) {
    std::mt19937_64 rng(31);
    for (int i = 0; i < 200; ++i) {
        const std::size_t w = 1 + rng() % 20, h = 1 + rng() % 20, n = 1 + rng() % 4;
        RegionMap map(w, h, n);
        const auto bias = rng() % 8;
        for (std::size_t p = 0; p < map.size(); ++p) map[p] = rng() % 8 < bias ? Label::Dynamic : Label::Static;
        const auto bytes = encode_region_map(map);
        ASSERT_EQ(decode_region_map(bytes, w, h, n), map);
    }
}

TEST(RegionCodec, RejectsInconsistentRuns) {
    EXPECT_EQ(testing::error_of([] { decode_region_map(Bytes{5}, 2, 2, 1); }), ErrorCode::CorruptHeader);
    EXPECT_EQ(testing::error_of([] { decode_region_map(Bytes{3}, 2, 2, 1); }), ErrorCode::CorruptHeader);
    EXPECT_EQ(testing::error_of([] { decode_region_map(Bytes{2, 0, 2}, 2, 2, 1); }), ErrorCode::CorruptHeader);
    EXPECT_EQ(testing::error_of([] { decode_region_map(Bytes{0x80}, 2, 2, 1); }), ErrorCode::CorruptHeader);
}

TEST(Header, FixedLayout) {
    StegoHeader h;
    h.method = DetectionMethod::ColorHistogram;
    h.flags = kFlagStatic | kFlagDynamic;
    h.static_len = 0x01020304;
    h.dynamic_len = 7;
    const Bytes map{100};
    const auto bytes = serialize_header(h, map);
    ASSERT_EQ(bytes.size(), kHeaderSize + 1);
    EXPECT_EQ((Bytes(bytes.begin(), bytes.begin() + 7)), (Bytes{'S', 'M', 'C', '1', 1, 3, 3}));
    EXPECT_EQ((Bytes(bytes.begin() + 7, bytes.begin() + 19)), (Bytes{4, 3, 2, 1, 7, 0, 0, 0, 1, 0, 0, 0}));
    Crc32 crc;
    crc.update(std::span(bytes).first(19)).update(map);
    const auto parsed = parse_fixed_header(bytes);
    EXPECT_EQ(parsed.crc, crc.value());
    EXPECT_EQ(parsed.static_len, 0x01020304u);
    EXPECT_EQ(parsed.map_len, 1u);
    EXPECT_EQ(bytes.back(), 100);
}

TEST(Header, ParseRejectsBadMagicAndVersion) {
    auto bytes = serialize_header({}, Bytes{1});
    bytes[0] ^= 1;
    EXPECT_EQ(testing::error_of([&] { parse_fixed_header(bytes); }), ErrorCode::BadMagic);
    bytes = serialize_header({}, Bytes{1});
    bytes[4] = 2;
    EXPECT_EQ(testing::error_of([&] { parse_fixed_header(bytes); }), ErrorCode::UnsupportedVersion);
}

TEST(Header, ValidateChecksFlagsAgainstLengths) {
    StegoHeader h;
    h.flags = kFlagDynamic;
    h.static_len = 3;
    EXPECT_EQ(testing::error_of([&] { validate_header(h); }), ErrorCode::CorruptHeader);
    h.static_len = 0;
    EXPECT_FALSE(testing::error_of([&] { validate_header(h); }).has_value());
}

} // namespace
} // namespace stegclip
