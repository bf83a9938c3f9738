#ifndef SSW_DCT_HPP
#define SSW_DCT_HPP

#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "ssw/image.hpp"
#include "ssw/key.hpp"

namespace ssw {

/// Real-valued 4x4-blockwise DCT-II plane of an image.
struct BlockDctPlane {
    int width = 0;
    int height = 0;
    std::vector<double> coeffs;  // row-major, same geometry as the image

    double& at(int x, int y) { return coeffs[static_cast<std::size_t>(y) * width + x]; }
    double at(int x, int y) const { return coeffs[static_cast<std::size_t>(y) * width + x]; }
    int blocks_x() const { return width / kBlockSize; }
    int blocks_y() const { return height / kBlockSize; }
};

/// Ordered mid-band coefficients in block-raster order, within-block order
/// fixed by the canonical zig-zag of the mask.
struct CoeffStream {
    std::vector<double> values;
};

namespace detail {

/// Orthonormal DCT-II basis matrix: C[k][n] = s_k cos((2n+1)k pi / 8),
/// s_0 = 1/2, s_k = sqrt(2)/2 for k > 0.
inline const std::array<std::array<double, 4>, 4>& dct_basis() {
    static const std::array<std::array<double, 4>, 4> C = [] {
        std::array<std::array<double, 4>, 4> c{};
        const double pi = std::acos(-1.0);
        for (int k = 0; k < 4; ++k) {
            const double s = (k == 0) ? std::sqrt(0.25) : std::sqrt(0.5);
            for (int n = 0; n < 4; ++n) c[k][n] = s * std::cos(pi * (2 * n + 1) * k / 8.0);
        }
        return c;
    }();
    return C;
}

// F = C B C^T (forward), B = C^T F C (inverse)
inline void dct4x4(const double in[4][4], double out[4][4], bool forward) {
    const auto& C = dct_basis();
    double tmp[4][4];
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            double s = 0.0;
            for (int k = 0; k < 4; ++k)
                s += (forward ? C[i][k] : C[k][i]) * in[k][j];
            tmp[i][j] = s;
        }
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            double s = 0.0;
            for (int k = 0; k < 4; ++k)
                s += tmp[i][k] * (forward ? C[j][k] : C[k][j]);
            out[i][j] = s;
        }
}

}  // namespace detail

inline BlockDctPlane forward_block_dct(const GrayImage& img) {
    if (!img.block_aligned()) throw std::invalid_argument("dims must be divisible by 4");
    BlockDctPlane plane{img.width, img.height,
                        std::vector<double>(img.size())};
    double in[4][4], out[4][4];
    for (int by = 0; by < img.height; by += kBlockSize)
        for (int bx = 0; bx < img.width; bx += kBlockSize) {
            for (int r = 0; r < 4; ++r)
                for (int c = 0; c < 4; ++c) in[r][c] = img.at(bx + c, by + r);
            detail::dct4x4(in, out, true);
            for (int r = 0; r < 4; ++r)
                for (int c = 0; c < 4; ++c) plane.at(bx + c, by + r) = out[r][c];
        }
    return plane;
}

/// Round half away from zero, clamp to [0,255].
inline std::uint8_t quantize_pixel(double v) {
    const long r = std::lround(v);
    return static_cast<std::uint8_t>(r < 0 ? 0 : (r > 255 ? 255 : r));
}

inline GrayImage inverse_block_dct(const BlockDctPlane& plane) {
    if (plane.width % kBlockSize != 0 || plane.height % kBlockSize != 0)
        throw std::invalid_argument("dims must be divisible by 4");
    GrayImage img(plane.width, plane.height);
    double in[4][4], out[4][4];
    for (int by = 0; by < plane.height; by += kBlockSize)
        for (int bx = 0; bx < plane.width; bx += kBlockSize) {
            for (int r = 0; r < 4; ++r)
                for (int c = 0; c < 4; ++c) in[r][c] = plane.at(bx + c, by + r);
            detail::dct4x4(in, out, false);
            for (int r = 0; r < 4; ++r)
                for (int c = 0; c < 4; ++c) img.at(bx + c, by + r) = quantize_pixel(out[r][c]);
        }
    return img;
}

inline CoeffStream gather_midband(const BlockDctPlane& plane, const WatermarkKey& key) {
    const auto mask = canonical_mask(key.midband_mask);
    CoeffStream stream;
    stream.values.reserve(static_cast<std::size_t>(plane.blocks_x()) * plane.blocks_y() *
                          mask.size());
    for (int by = 0; by < plane.height; by += kBlockSize)
        for (int bx = 0; bx < plane.width; bx += kBlockSize)
            for (const auto& [r, c] : mask) stream.values.push_back(plane.at(bx + c, by + r));
    return stream;
}

inline void scatter_midband(BlockDctPlane& plane, const CoeffStream& stream,
                            const WatermarkKey& key) {
    const auto mask = canonical_mask(key.midband_mask);
    const std::size_t expected =
        static_cast<std::size_t>(plane.blocks_x()) * plane.blocks_y() * mask.size();
    if (stream.values.size() != expected)
        throw std::invalid_argument("coefficient stream length mismatch");
    std::size_t i = 0;
    for (int by = 0; by < plane.height; by += kBlockSize)
        for (int bx = 0; bx < plane.width; bx += kBlockSize)
            for (const auto& [r, c] : mask) plane.at(bx + c, by + r) = stream.values[i++];
}

}  // namespace ssw

#endif
