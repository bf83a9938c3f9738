#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "ssw/attacks.hpp"
#include "ssw/keystream.hpp"
#include "ssw/metrics.hpp"

using namespace ssw;

TEST_CASE("noise attack hits the requested SNR on the coefficient stream") {
    KeyStream ks(1);
    CoeffStream s;
    s.values.resize(400000);
    for (auto& v : s.values) v = ks.next_laplace(20.0);
    double sig = 0.0;
    for (double v : s.values) sig += v * v;

    for (double target : {0.0, 4.0, 10.0, 20.0}) {
        const CoeffStream attacked = laplace_noise_attack(s, target, 99);
        double np = 0.0;
        for (std::size_t i = 0; i < s.values.size(); ++i) {
            const double d = attacked.values[i] - s.values[i];
            np += d * d;
        }
        const double achieved = 10.0 * std::log10(sig / np);
        CHECK(std::fabs(achieved - target) < 0.1);
    }
}

TEST_CASE("pixel noise attack is deterministic and roughly on-target") {
    // mid-gray cover so clipping does not bias the empirical SNR
    GrayImage img(256, 256);
    KeyStream ks(7);
    for (auto& p : img.data)
        p = static_cast<std::uint8_t>(96 + ks.next_u64() % 64);
    const GrayImage a = laplace_noise_attack(img, 20.0, 5);
    const GrayImage b = laplace_noise_attack(img, 20.0, 5);
    CHECK(a == b);
    CHECK_FALSE(a == img);

    double sig = 0.0, np = 0.0;
    for (std::size_t i = 0; i < img.size(); ++i) {
        sig += static_cast<double>(img.data[i]) * img.data[i];
        const double d = static_cast<double>(a.data[i]) - img.data[i];
        np += d * d;
    }
    const double achieved = 10.0 * std::log10(sig / np);
    CHECK(achieved == doctest::Approx(20.0).epsilon(0.1 / 20.0));

    // infinite SNR is the identity
    CHECK(laplace_noise_attack(img, std::numeric_limits<double>::infinity(), 5) == img);
}

TEST_CASE("pixel loss zeroes the exact number of distinct positions") {
    GrayImage img(512, 512, 200);
    const GrayImage half = pixel_loss_attack(img, 0.5, 3);
    std::size_t zeros = 0;
    for (auto p : half.data) zeros += p == 0;
    CHECK(zeros == 131072);

    const GrayImage tenth = pixel_loss_attack(img, 0.1, 3);
    zeros = 0;
    for (auto p : tenth.data) zeros += p == 0;
    CHECK(zeros == 26214);

    CHECK(pixel_loss_attack(img, 0.0, 3) == img);
    CHECK(pixel_loss_attack(img, 0.5, 3) == half);  // deterministic
    CHECK_FALSE(pixel_loss_attack(img, 0.5, 4) == half);
    CHECK_THROWS_AS(pixel_loss_attack(img, 1.0, 3), std::invalid_argument);
    CHECK_THROWS_AS(pixel_loss_attack(img, -0.1, 3), std::invalid_argument);
}

TEST_CASE("jpeg round trip keeps dimensions and quality orders distortion") {
    const GrayImage img = read_pgm(std::string(SSW_DATA_DIR) + "/camera.pgm");
    const GrayImage q90 = jpeg_attack(img, 90);
    CHECK(q90.width == img.width);
    CHECK(q90.height == img.height);
    const GrayImage q10 = jpeg_attack(img, 10);
    CHECK(mse(img, q10) > mse(img, q90));
    CHECK(mse(img, q90) > 0.0);
    CHECK_THROWS_AS(jpeg_attack(img, 0), std::invalid_argument);
    CHECK_THROWS_AS(jpeg_attack(img, 101), std::invalid_argument);
}

TEST_CASE("brightness attack") {
    GrayImage img(4, 4);
    for (std::size_t i = 0; i < img.size(); ++i)
        img.data[i] = static_cast<std::uint8_t>(16 * i);
    CHECK(brightness_attack(img, 1.0) == img);
    const GrayImage darker = brightness_attack(img, 0.5);
    for (std::size_t i = 0; i < img.size(); ++i)
        CHECK(darker.data[i] == static_cast<std::uint8_t>(std::lround(0.5 * img.data[i])));
    const GrayImage brighter = brightness_attack(img, 2.0);
    CHECK(brighter.data[15] == 255);  // clamped
    CHECK_THROWS_AS(brightness_attack(img, 0.0), std::invalid_argument);
}

TEST_CASE("auto adjust stretches the 1st..99th percentile range to full scale") {
    // image whose percentiles are easy to reason about: values 50..150
    GrayImage img(100, 100);
    KeyStream ks(21);
    for (auto& p : img.data) p = static_cast<std::uint8_t>(50 + ks.next_u64() % 101);
    const GrayImage out = auto_adjust_attack(img);
    std::uint8_t lo = 255, hi = 0;
    for (auto p : out.data) {
        lo = std::min(lo, p);
        hi = std::max(hi, p);
    }
    CHECK(lo == 0);
    CHECK(hi == 255);

    // already full-range data is nearly unchanged
    GrayImage full(64, 64);
    for (std::size_t i = 0; i < full.size(); ++i)
        full.data[i] = static_cast<std::uint8_t>(i % 256);
    const GrayImage same = auto_adjust_attack(full);
    double maxdiff = 0.0;
    for (std::size_t i = 0; i < full.size(); ++i)
        maxdiff = std::max(maxdiff,
                           std::fabs(static_cast<double>(same.data[i]) - full.data[i]));
    CHECK(maxdiff <= 6.0);

    GrayImage flat(16, 16, 77);
    CHECK(auto_adjust_attack(flat) == flat);
}

TEST_CASE("apply_attack dispatch and kind parsing") {
    GrayImage img(16, 16, 128);
    CHECK(apply_attack(img, {AttackKind::Brightness, 1.0, 0}) == img);
    CHECK(apply_attack(img, {AttackKind::PixelLoss, 0.0, 0}) == img);
    CHECK(parse_attack_kind("laplace-noise") == AttackKind::LaplaceNoise);
    CHECK(parse_attack_kind("pixel-loss") == AttackKind::PixelLoss);
    CHECK(parse_attack_kind("jpeg") == AttackKind::Jpeg);
    CHECK(parse_attack_kind("brightness") == AttackKind::Brightness);
    CHECK(parse_attack_kind("auto-adjust") == AttackKind::AutoAdjust);
    CHECK_THROWS_AS(parse_attack_kind("bogus"), std::invalid_argument);
}
