#ifndef SSW_DECODER_HPP
#define SSW_DECODER_HPP

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "ssw/dct.hpp"
#include "ssw/image.hpp"
#include "ssw/key.hpp"
#include "ssw/keystream.hpp"
#include "ssw/metrics.hpp"
#include "ssw/statmodel.hpp"

namespace ssw {

/// Outcome of one bit decision. bit = 1 iff statistic >= threshold
/// (ties decide 1).
struct DecisionTrace {
    double statistic = 0.0;
    double threshold = 0.0;
    int bit = 0;
    bool oracle_fallback = false;
    std::vector<double> per_chip_terms;  // filled only when requested
};

enum class DecoderModel { LaplaceClean, LaplaceNoisy, Gaussian };

namespace detail {

inline void check_segment(std::size_t ny, std::size_t nw, double alpha) {
    if (ny != nw || ny == 0) throw std::invalid_argument("segment length mismatch");
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha out of range");
}

}  // namespace detail

/// Noise-free ML rule: T = sum |y_i| w_i against
/// tau = ((1-a^2) b_x / 2a) log((1+a)/(1-a)) sum w_i.
inline DecisionTrace decode_clean(std::span<const double> y, std::span<const std::int8_t> w,
                                  double alpha, double scale_x) {
    detail::check_segment(y.size(), w.size(), alpha);
    if (!(scale_x > 0.0)) throw std::invalid_argument("scale_x must be positive");
    double t = 0.0;
    long sum_w = 0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        t += std::fabs(y[i]) * static_cast<double>(w[i]);
        sum_w += w[i];
    }
    DecisionTrace trace;
    trace.statistic = t;
    trace.threshold = (1.0 - alpha * alpha) * scale_x / (2.0 * alpha) *
                      std::log((1.0 + alpha) / (1.0 - alpha)) * static_cast<double>(sum_w);
    trace.bit = t >= trace.threshold ? 1 : 0;
    return trace;
}

/// Ground-truth decoder: direct per-chip log-likelihood ratio with the
/// conditional scale b_x (1 + alpha (2b-1) w_i), using the plain Laplacian
/// density when noise is absent and the two-Laplacian sum density otherwise.
inline DecisionTrace decode_llr_oracle(std::span<const double> z,
                                       std::span<const std::int8_t> w, double alpha,
                                       double scale_x, double scale_n = 0.0) {
    detail::check_segment(z.size(), w.size(), alpha);
    if (!(scale_x > 0.0)) throw std::invalid_argument("scale_x must be positive");
    const bool noisy = scale_n > 0.0;
    double llr = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) {
        const double s1 = scale_x * (1.0 + alpha * w[i]);
        const double s0 = scale_x * (1.0 - alpha * w[i]);
        double term;
        if (noisy) {
            term = sum_log_density(z[i], {s1, scale_n}) - sum_log_density(z[i], {s0, scale_n});
        } else {
            term = laplace_log_pdf(z[i], s1) - laplace_log_pdf(z[i], s0);
        }
        if (!std::isfinite(term))
            throw std::runtime_error("llr oracle: non-finite density term (corrupt parameters)");
        llr += term;
    }
    DecisionTrace trace;
    trace.statistic = llr;
    trace.threshold = 0.0;
    trace.bit = llr >= 0.0 ? 1 : 0;
    return trace;
}

namespace detail {

/// log | a e^{-|z|/a} - b e^{-|z|/b} |, evaluated by factoring out the slower
/// (larger-scale) decay so both tails stay finite.
inline double log_abs_two_exp(double az, double a, double b) {
    const double L = std::max(a, b), S = std::min(a, b);
    return -az / L + std::log(L - S * std::exp(-az * (1.0 / S - 1.0 / L)));
}

}  // namespace detail

/// Noisy-channel ML rule, simplified form: statistic sum w_i F(z_i) against a
/// data-independent threshold, where per chip
///   F(z) = log|B(z; s+, s_n)| - log|B(z; s-, s_n)|,
///   B(z; a, b) = a e^{-|z|/a} - b e^{-|z|/b},  s+- = b_x (1 +- alpha),
///   tau_n = sum w_i log(|s+^2 - s_n^2| / |s-^2 - s_n^2|).
/// Chips whose hypothesis scale is degenerate with the noise scale fold the
/// full limit-form log ratio into the statistic instead. A non-finite F falls
/// back to the exact-LLR oracle for the whole segment and flags the trace.
inline DecisionTrace decode_noisy(std::span<const double> z, std::span<const std::int8_t> w,
                                  double alpha, double scale_x, double scale_n) {
    detail::check_segment(z.size(), w.size(), alpha);
    if (!(scale_x > 0.0) || !(scale_n > 0.0))
        throw std::invalid_argument("scales must be positive");
    const double sp = scale_x * (1.0 + alpha);
    const double sm = scale_x * (1.0 - alpha);
    const bool degen_p = std::fabs(sp - scale_n) < kSumDensityDegenerateTol * std::max(sp, scale_n);
    const bool degen_m = std::fabs(sm - scale_n) < kSumDensityDegenerateTol * std::max(sm, scale_n);
    const double log_norm_ratio =
        (degen_p || degen_m)
            ? 0.0
            : std::log(std::fabs(sp * sp - scale_n * scale_n) /
                       std::fabs(sm * sm - scale_n * scale_n));

    double stat = 0.0;
    long sum_w = 0;
    bool finite = true;
    for (std::size_t i = 0; i < z.size() && finite; ++i) {
        const double az = std::fabs(z[i]);
        double f;
        if (degen_p || degen_m) {
            // limit regime: use the full per-chip log ratio, no tau contribution
            f = sum_log_density(z[i], {sp, scale_n}) - sum_log_density(z[i], {sm, scale_n});
        } else {
            f = detail::log_abs_two_exp(az, sp, scale_n) -
                detail::log_abs_two_exp(az, sm, scale_n);
        }
        if (!std::isfinite(f)) {
            finite = false;
            break;
        }
        stat += static_cast<double>(w[i]) * f;
        sum_w += w[i];
    }
    if (!finite) {
        DecisionTrace trace = decode_llr_oracle(z, w, alpha, scale_x, scale_n);
        trace.oracle_fallback = true;
        return trace;
    }
    DecisionTrace trace;
    trace.statistic = stat;
    trace.threshold = (degen_p || degen_m) ? 0.0 : static_cast<double>(sum_w) * log_norm_ratio;
    trace.bit = stat >= trace.threshold ? 1 : 0;
    return trace;
}

/// Baseline with both host and noise modeled Gaussian: exact per-chip
/// log-density ratio with conditional variance
/// sigma_x^2 (1 + alpha (2b-1) w_i)^2 + sigma_n^2 (a weighted energy detector).
inline DecisionTrace decode_gaussian_baseline(std::span<const double> z,
                                              std::span<const std::int8_t> w, double alpha,
                                              double sigma_x, double sigma_n) {
    detail::check_segment(z.size(), w.size(), alpha);
    if (!(sigma_x > 0.0) || !(sigma_n > 0.0))
        throw std::invalid_argument("sigmas must be positive");
    const double vp = sigma_x * sigma_x * (1.0 + alpha) * (1.0 + alpha) + sigma_n * sigma_n;
    const double vm = sigma_x * sigma_x * (1.0 - alpha) * (1.0 - alpha) + sigma_n * sigma_n;
    // per chip, hypothesis b=1 has variance vp when w=+1 and vm when w=-1
    const double log_ratio = 0.5 * std::log(vm / vp);
    const double quad = 0.5 * (1.0 / vm - 1.0 / vp);
    double llr = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) {
        const double zz = z[i] * z[i];
        llr += static_cast<double>(w[i]) * (log_ratio + quad * zz);
    }
    DecisionTrace trace;
    trace.statistic = llr;
    trace.threshold = 0.0;
    trace.bit = llr >= 0.0 ? 1 : 0;
    return trace;
}

/// Rough blind noise-scale estimate from high-frequency coefficients outside
/// the embedding mask (r+c >= 5), which carry little host energy.
inline double estimate_noise_scale(const BlockDctPlane& plane, const WatermarkKey& key) {
    std::vector<double> residual;
    const auto mask = canonical_mask(key.midband_mask);
    for (int by = 0; by < plane.height; by += kBlockSize)
        for (int bx = 0; bx < plane.width; bx += kBlockSize)
            for (int r = 0; r < kBlockSize; ++r)
                for (int c = 0; c < kBlockSize; ++c) {
                    if (r + c < 5) continue;
                    bool masked = false;
                    for (const auto& [mr, mc] : mask) masked |= (mr == r && mc == c);
                    if (!masked) residual.push_back(plane.at(bx + c, by + r));
                }
    if (residual.empty()) return 0.0;
    return mle_scale(residual);
}

struct ExtractResult {
    BitPayload bits;
    std::vector<DecisionTrace> traces;
};

/// Blind extraction: forward DCT -> gather -> per-segment decode. The host
/// scale b_x is the segment MLE of the received coefficients (O(alpha^2)
/// bias relative to the cover). The noise scale, when needed and not given,
/// comes from estimate_noise_scale.
inline ExtractResult extract_image_traced(const GrayImage& watermarked, const WatermarkKey& key,
                                          int bit_count, DecoderModel model,
                                          double noise_scale = 0.0) {
    const GrayImage work = center_crop_to_block_grid(watermarked);
    const int capacity = validate_key(key, work.width, work.height);
    if (bit_count < 1 || bit_count > capacity)
        throw std::invalid_argument("bit_count outside capacity");

    const BlockDctPlane plane = forward_block_dct(work);
    const CoeffStream stream = gather_midband(plane, key);
    const std::size_t n = static_cast<std::size_t>(key.chips_per_bit);
    const SpreadSequence seq = generate_chips(key.seed, static_cast<std::size_t>(bit_count) * n);

    double sn = noise_scale;
    if (sn <= 0.0 && (model == DecoderModel::LaplaceNoisy || model == DecoderModel::Gaussian))
        sn = estimate_noise_scale(plane, key);

    ExtractResult result;
    result.bits.resize(static_cast<std::size_t>(bit_count));
    result.traces.reserve(static_cast<std::size_t>(bit_count));
    for (int k = 0; k < bit_count; ++k) {
        const auto z = std::span<const double>(stream.values).subspan(k * n, n);
        const auto w = std::span<const std::int8_t>(seq.chips).subspan(k * n, n);
        const double sx = mle_scale(z);
        DecisionTrace trace;
        switch (model) {
            case DecoderModel::LaplaceClean:
                trace = decode_clean(z, w, key.alpha, sx);
                break;
            case DecoderModel::LaplaceNoisy:
                trace = sn > 0.0 ? decode_noisy(z, w, key.alpha, sx, sn)
                                 : decode_clean(z, w, key.alpha, sx);
                break;
            case DecoderModel::Gaussian: {
                double ss = 0.0;
                for (double v : z) ss += v * v;
                const double sigma_z = std::sqrt(ss / static_cast<double>(z.size()));
                const double sigma_n = sn > 0.0 ? std::sqrt(2.0) * sn : 1e-6 * sigma_z;
                const double vx = std::max(sigma_z * sigma_z - sigma_n * sigma_n,
                                           1e-12 * sigma_z * sigma_z);
                trace = decode_gaussian_baseline(z, w, key.alpha, std::sqrt(vx), sigma_n);
                break;
            }
        }
        result.bits[static_cast<std::size_t>(k)] = static_cast<std::uint8_t>(trace.bit);
        result.traces.push_back(std::move(trace));
    }
    return result;
}

inline BitPayload extract_image(const GrayImage& watermarked, const WatermarkKey& key,
                                int bit_count, DecoderModel model, double noise_scale = 0.0) {
    return extract_image_traced(watermarked, key, bit_count, model, noise_scale).bits;
}

}  // namespace ssw

#endif
