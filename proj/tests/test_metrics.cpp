#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "stegclip/stegclip.hpp"
#include "test_support.hpp"

namespace stegclip {
namespace {

double oracle_mse(const Frame& a, const Frame& b) {
    double sum = 0;
    for (std::size_t y = 0; y < a.height(); ++y)
        for (std::size_t x = 0; x < a.width(); ++x)
            for (std::size_t c = 0; c < 3; ++c) {
                const double d = double(a.at(x, y, c)) - double(b.at(x, y, c));
                sum += d * d;
            }
    return sum / double(a.width() * a.height() * 3);
}

TEST(Mse, SinglePixel) {
    Frame a(1, 1), b(1, 1);
    a.at(0, 0, 0) = 100;
    b.at(0, 0, 0) = 102;
    EXPECT_DOUBLE_EQ(mse(a, b), 4.0 / 3.0);
    EXPECT_EQ(mse(a, a), 0.0);
    EXPECT_EQ(testing::error_of([&] { mse(a, Frame(2, 1)); }), ErrorCode::DimensionMismatch);
}

TEST(Mse, MatchesOracleAndIsSymmetric) {
    std::mt19937_64 rng(71);
    for (int i = 0; i < 30; ++i) {
        const auto w = 1 + rng() % 20, h = 1 + rng() % 20;
        const auto a = testing::random_frame(rng, w, h), b = testing::random_frame(rng, w, h);
        ASSERT_NEAR(mse(a, b), oracle_mse(a, b), 1e-9);
        ASSERT_EQ(mse(a, b), mse(b, a));
    }
}

TEST(Psnr, KnownValues) {
    EXPECT_NEAR(psnr(1.0), 48.1308, 1e-4);
    EXPECT_NEAR(psnr(65025.0), 0.0, 1e-12);
    EXPECT_TRUE(std::isinf(psnr(0.0)));
    EXPECT_EQ(testing::error_of([] { psnr(-1.0); }), ErrorCode::InvalidArgument);
}

TEST(Psnr, DecreasingInMse) {
    double prev = psnr(0.01);
    for (double m = 0.02; m < 1000; m *= 1.7) {
        const double p = psnr(m);
        ASSERT_LT(p, prev);
        prev = p;
    }
}

TEST(Compare, IdenticalClips) {
    std::mt19937_64 rng(72);
    const auto clip = testing::random_clip(rng, 8, 8, 3);
    const auto r = compare(clip, clip);
    EXPECT_EQ(r.changed_byte_count, 0u);
    EXPECT_EQ(r.max_abs_byte_delta, 0);
    EXPECT_TRUE(std::isinf(r.mean_psnr));
    EXPECT_EQ(r.per_frame_mse, (std::vector<double>{0, 0, 0}));
}

TEST(Compare, PerFrameAndMean) {
    Frame a(2, 1), b(2, 1);
    b.at(0, 0, 0) = 6; // frame 2 mse = 36 / 6 = 6
    const auto r = compare(Clip({a, a}), Clip({a, b}));
    EXPECT_EQ(r.per_frame_mse, (std::vector<double>{0, 6}));
    EXPECT_DOUBLE_EQ(r.mean_mse, 3.0);
    EXPECT_DOUBLE_EQ(r.mean_psnr, psnr(3.0));
    EXPECT_EQ(r.changed_byte_count, 1u);
    EXPECT_EQ(r.max_abs_byte_delta, 6);
    EXPECT_EQ(testing::error_of([&] { compare(Clip({a}), Clip({a, a})); }), ErrorCode::DimensionMismatch);
}

TEST(Compare, DynamicOnlyEmbedStaysAboveUnitMsePsnr) {
    std::mt19937_64 rng(73);
    const auto clip = testing::random_clip(rng, 32, 32, 3);
    const auto cap = capacity(clip, {}, std::nullopt);
    const auto result = embed(clip, {}, std::nullopt, testing::random_bytes(rng, cap.capacity_dynamic_bytes()));
    const auto r = compare(clip, result.stego);
    EXPECT_EQ(r.max_abs_byte_delta, 1);
    EXPECT_GE(r.mean_psnr, psnr(1.0));
    for (const double p : r.per_frame_psnr) EXPECT_GE(p, psnr(1.0));
}

TEST(Compare, KeyValueFormat) {
    Frame a(2, 1), b(2, 1);
    b.at(0, 0, 0) = 1;
    const auto text = to_key_value(compare(Clip({a}), Clip({b})));
    EXPECT_EQ(text,
              "frames=1\n"
              "mean_mse=0.166667\n"
              "mean_psnr_db=55.9123\n"
              "changed_byte_count=1\n"
              "max_abs_byte_delta=1\n"
              "frame.1.mse=0.166667\n"
              "frame.1.psnr_db=55.9123\n");
}

} // namespace
} // namespace stegclip
