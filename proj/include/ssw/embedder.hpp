#ifndef SSW_EMBEDDER_HPP
#define SSW_EMBEDDER_HPP

#include <cstdint>
#include <span>
#include <stdexcept>

#include "ssw/dct.hpp"
#include "ssw/image.hpp"
#include "ssw/key.hpp"
#include "ssw/keystream.hpp"
#include "ssw/metrics.hpp"

namespace ssw {

struct EmbedResult {
    GrayImage watermarked;
    double achieved_psnr = 0.0;  // pixel domain, post-quantization
    double achieved_dwr = 0.0;   // DCT domain, pre-quantization
    int bits_embedded = 0;
};

/// Multiplicative rule per coefficient: y_i = x_i (1 + alpha (2b-1) w_i).
inline void embed_segment(std::span<double> coeffs, int bit,
                          std::span<const std::int8_t> chips, double alpha) {
    if (coeffs.size() != chips.size()) throw std::invalid_argument("segment length mismatch");
    if (!(alpha >= 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha out of range");
    const double m = alpha * (2 * bit - 1);
    for (std::size_t i = 0; i < coeffs.size(); ++i)
        coeffs[i] *= 1.0 + m * static_cast<double>(chips[i]);
}

/// Full pipeline: forward DCT -> gather -> per-bit embedding over disjoint
/// consecutive segments -> scatter -> inverse DCT. Images whose dims are not
/// divisible by 4 are center-cropped for embedding; the borders pass through
/// unchanged.
inline EmbedResult embed_image(const GrayImage& cover, const BitPayload& payload,
                               const WatermarkKey& key) {
    const auto [x0, y0, w, h] = block_grid_region(cover.width, cover.height);
    GrayImage work(w, h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) work.at(x, y) = cover.at(x0 + x, y0 + y);

    const int capacity = validate_key(key, w, h);
    if (static_cast<int>(payload.size()) > capacity)
        throw std::invalid_argument("payload exceeds capacity");
    for (auto b : payload)
        if (b > 1) throw std::invalid_argument("payload bits must be 0 or 1");

    BlockDctPlane plane = forward_block_dct(work);
    CoeffStream cover_stream = gather_midband(plane, key);
    CoeffStream stream = cover_stream;

    const std::size_t n = static_cast<std::size_t>(key.chips_per_bit);
    const SpreadSequence seq = generate_chips(key.seed, payload.size() * n);
    for (std::size_t k = 0; k < payload.size(); ++k) {
        embed_segment(std::span<double>(stream.values).subspan(k * n, n), payload[k],
                      std::span<const std::int8_t>(seq.chips).subspan(k * n, n), key.alpha);
    }
    // coefficients past payload.size()*n are left unmodified

    scatter_midband(plane, stream, key);
    GrayImage wm_center = inverse_block_dct(plane);

    GrayImage out = cover;
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) out.at(x0 + x, y0 + y) = wm_center.at(x, y);

    EmbedResult res;
    res.achieved_psnr = psnr(cover, out);
    res.achieved_dwr = dwr(cover_stream, stream);
    res.bits_embedded = static_cast<int>(payload.size());
    res.watermarked = std::move(out);
    return res;
}

}  // namespace ssw

#endif
