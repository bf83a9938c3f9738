#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "ssw/embedder.hpp"
#include "ssw/keystream.hpp"
#include "ssw/metrics.hpp"

using namespace ssw;

TEST_CASE("mse basics") {
    GrayImage a(8, 8, 100), b(8, 8, 100);
    CHECK(mse(a, b) == 0.0);
    for (auto& p : b.data) p = 102;
    CHECK(mse(a, b) == 4.0);
    GrayImage c(4, 8);
    CHECK_THROWS_AS(mse(a, c), std::invalid_argument);
}

TEST_CASE("psnr") {
    GrayImage a(16, 16, 10), b(16, 16, 11);  // mse 1
    CHECK(psnr(a, b) == doctest::Approx(48.1308).epsilon(1e-4));
    CHECK(std::isinf(psnr(a, a)));
    // strictly decreasing in mse
    GrayImage c(16, 16, 13);
    CHECK(psnr(a, c) < psnr(a, b));
}

TEST_CASE("dwr of the multiplicative rule is -20 log10 alpha") {
    KeyStream ks(5);
    CoeffStream cover;
    cover.values.resize(5000);
    for (auto& v : cover.values) v = ks.next_laplace(8.0);
    const SpreadSequence w = generate_chips(77, cover.values.size());

    for (double alpha : {0.01, 0.1}) {
        CoeffStream wm = cover;
        embed_segment(wm.values, 1, w.chips, alpha);
        CHECK(dwr(cover, wm) == doctest::Approx(-20.0 * std::log10(alpha)).epsilon(1e-9));
    }
    CoeffStream zero;
    zero.values.assign(10, 0.0);
    CHECK_THROWS_AS(dwr(zero, zero), std::invalid_argument);
}

TEST_CASE("ber and recovery rate") {
    BitPayload a{0, 1, 1, 0, 1, 0, 0, 1};
    CHECK(ber(a, a) == 0.0);
    BitPayload comp = a;
    for (auto& b : comp) b ^= 1;
    CHECK(ber(a, comp) == 1.0);
    BitPayload one = a;
    one[3] ^= 1;
    CHECK(ber(a, one) == 0.125);
    CHECK(ber(one, a) == ber(a, one));  // symmetric
    CHECK(recovery_rate(a, one) == 1.0 - ber(a, one));
    BitPayload shorter{0, 1};
    CHECK_THROWS_AS(ber(a, shorter), std::invalid_argument);
}
