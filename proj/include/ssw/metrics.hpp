#ifndef SSW_METRICS_HPP
#define SSW_METRICS_HPP

#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "ssw/dct.hpp"
#include "ssw/image.hpp"

namespace ssw {

using BitPayload = std::vector<std::uint8_t>;  // values in {0,1}

inline double mse(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size() || a.empty()) throw std::invalid_argument("mse: size mismatch");
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        acc += d * d;
    }
    return acc / static_cast<double>(a.size());
}

inline double mse(const GrayImage& a, const GrayImage& b) {
    if (a.width != b.width || a.height != b.height)
        throw std::invalid_argument("mse: dimension mismatch");
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = static_cast<double>(a.data[i]) - static_cast<double>(b.data[i]);
        acc += d * d;
    }
    return acc / static_cast<double>(a.size());
}

/// 10 log10(255^2 / MSE); +inf sentinel for identical images.
inline double psnr(const GrayImage& cover, const GrayImage& test) {
    const double m = mse(cover, test);
    if (m == 0.0) return std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(255.0 * 255.0 / m);
}

/// Empirical document-to-watermark ratio in dB: 10 log10(sum x^2 / sum (y-x)^2).
inline double dwr(const CoeffStream& cover, const CoeffStream& watermarked) {
    if (cover.values.size() != watermarked.values.size())
        throw std::invalid_argument("dwr: length mismatch");
    double sx = 0.0, sd = 0.0;
    for (std::size_t i = 0; i < cover.values.size(); ++i) {
        const double x = cover.values[i];
        const double d = watermarked.values[i] - x;
        sx += x * x;
        sd += d * d;
    }
    if (sx == 0.0) throw std::invalid_argument("dwr: zero cover energy");
    if (sd == 0.0) return std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(sx / sd);
}

/// Analytic DWR of the multiplicative rule: -20 log10(alpha).
inline double dwr_analytic(double alpha) { return -20.0 * std::log10(alpha); }

inline double ber(const BitPayload& sent, const BitPayload& received) {
    if (sent.size() != received.size() || sent.empty())
        throw std::invalid_argument("ber: length mismatch");
    std::size_t errs = 0;
    for (std::size_t i = 0; i < sent.size(); ++i) errs += sent[i] != received[i];
    return static_cast<double>(errs) / static_cast<double>(sent.size());
}

inline double recovery_rate(const BitPayload& sent, const BitPayload& received) {
    return 1.0 - ber(sent, received);
}

}  // namespace ssw

#endif
