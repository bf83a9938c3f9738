#ifndef SSW_ATTACKS_HPP
#define SSW_ATTACKS_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include <jpeglib.h>

#include "ssw/dct.hpp"
#include "ssw/image.hpp"
#include "ssw/keystream.hpp"

namespace ssw {

enum class AttackKind { LaplaceNoise, PixelLoss, Jpeg, Brightness, AutoAdjust };

struct AttackSpec {
    AttackKind kind = AttackKind::LaplaceNoise;
    double parameter = 0.0;  // SNR dB | loss fraction | quality | ratio | unused
    std::uint64_t rng_seed = 0;
    bool dct_domain = false;  // noise attack only: inject into mid-band coefficients
};

namespace detail {

/// Noise scale for a target SNR given the empirical mean square of the
/// attacked domain's samples: SNR = 10 log10(P_signal / P_noise), Laplacian
/// noise power 2 b^2.
inline double noise_scale_for_snr(double mean_square, double snr_db) {
    const double p_noise = mean_square / std::pow(10.0, snr_db / 10.0);
    return std::sqrt(p_noise / 2.0);
}

}  // namespace detail

/// Adds i.i.d. zero-mean Laplacian noise at the requested SNR. Signal power is
/// the empirical mean square of the pixels. Deterministic given the seed.
inline GrayImage laplace_noise_attack(const GrayImage& image, double snr_db,
                                      std::uint64_t seed) {
    if (std::isinf(snr_db)) return image;
    double ms = 0.0;
    for (auto p : image.data) ms += static_cast<double>(p) * p;
    ms /= static_cast<double>(image.size());
    const double scale = detail::noise_scale_for_snr(ms, snr_db);
    KeyStream ks(seed);
    GrayImage out = image;
    for (auto& p : out.data)
        p = quantize_pixel(static_cast<double>(p) + ks.next_laplace(scale));
    return out;
}

/// Coefficient-domain variant, for model-exactness experiments.
inline CoeffStream laplace_noise_attack(const CoeffStream& stream, double snr_db,
                                        std::uint64_t seed) {
    if (std::isinf(snr_db)) return stream;
    double ms = 0.0;
    for (double v : stream.values) ms += v * v;
    ms /= static_cast<double>(stream.values.size());
    const double scale = detail::noise_scale_for_snr(ms, snr_db);
    KeyStream ks(seed);
    CoeffStream out = stream;
    for (auto& v : out.values) v += ks.next_laplace(scale);
    return out;
}

/// Sets exactly round(fraction * W * H) distinct pixel positions to 0,
/// chosen uniformly without replacement (partial Fisher-Yates).
inline GrayImage pixel_loss_attack(const GrayImage& image, double loss_fraction,
                                   std::uint64_t seed) {
    if (!(loss_fraction >= 0.0 && loss_fraction < 1.0))
        throw std::invalid_argument("loss fraction must be in [0,1)");
    const std::size_t total = image.size();
    const std::size_t k =
        static_cast<std::size_t>(std::llround(loss_fraction * static_cast<double>(total)));
    if (k == 0) return image;
    std::vector<std::uint32_t> idx(total);
    std::iota(idx.begin(), idx.end(), 0u);
    KeyStream ks(seed);
    GrayImage out = image;
    for (std::size_t i = 0; i < k; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(ks.next_u64() % (total - i));
        std::swap(idx[i], idx[j]);
        out.data[idx[i]] = 0;
    }
    return out;
}

/// Round-trips through a baseline grayscale JPEG at the given quality.
inline GrayImage jpeg_attack(const GrayImage& image, int quality) {
    if (quality < 1 || quality > 100) throw std::invalid_argument("quality must be in [1,100]");

    unsigned char* buf = nullptr;
    unsigned long buf_size = 0;
    {
        jpeg_compress_struct cinfo;
        jpeg_error_mgr jerr;
        cinfo.err = jpeg_std_error(&jerr);
        jpeg_create_compress(&cinfo);
        jpeg_mem_dest(&cinfo, &buf, &buf_size);
        cinfo.image_width = static_cast<JDIMENSION>(image.width);
        cinfo.image_height = static_cast<JDIMENSION>(image.height);
        cinfo.input_components = 1;
        cinfo.in_color_space = JCS_GRAYSCALE;
        jpeg_set_defaults(&cinfo);
        jpeg_set_quality(&cinfo, quality, TRUE);
        jpeg_start_compress(&cinfo, TRUE);
        std::vector<std::uint8_t> row(image.width);
        while (cinfo.next_scanline < cinfo.image_height) {
            JSAMPROW rp = const_cast<JSAMPROW>(
                image.data.data() + static_cast<std::size_t>(cinfo.next_scanline) * image.width);
            jpeg_write_scanlines(&cinfo, &rp, 1);
        }
        jpeg_finish_compress(&cinfo);
        jpeg_destroy_compress(&cinfo);
    }

    GrayImage out;
    {
        jpeg_decompress_struct dinfo;
        jpeg_error_mgr jerr;
        dinfo.err = jpeg_std_error(&jerr);
        jpeg_create_decompress(&dinfo);
        jpeg_mem_src(&dinfo, buf, buf_size);
        if (jpeg_read_header(&dinfo, TRUE) != JPEG_HEADER_OK) {
            jpeg_destroy_decompress(&dinfo);
            free(buf);
            throw std::runtime_error("jpeg attack: decode failed");
        }
        dinfo.out_color_space = JCS_GRAYSCALE;
        jpeg_start_decompress(&dinfo);
        out = GrayImage(static_cast<int>(dinfo.output_width),
                        static_cast<int>(dinfo.output_height));
        while (dinfo.output_scanline < dinfo.output_height) {
            JSAMPROW rp =
                out.data.data() + static_cast<std::size_t>(dinfo.output_scanline) * out.width;
            jpeg_read_scanlines(&dinfo, &rp, 1);
        }
        jpeg_finish_decompress(&dinfo);
        jpeg_destroy_decompress(&dinfo);
    }
    free(buf);
    return out;
}

/// pixel <- clamp(round(ratio * pixel)).
inline GrayImage brightness_attack(const GrayImage& image, double ratio) {
    if (!(ratio > 0.0)) throw std::invalid_argument("ratio must be positive");
    GrayImage out = image;
    for (auto& p : out.data) p = quantize_pixel(ratio * static_cast<double>(p));
    return out;
}

/// Linear contrast stretch mapping the 1st intensity percentile to 0 and the
/// 99th to 255. Constant images pass through unchanged.
inline GrayImage auto_adjust_attack(const GrayImage& image) {
    std::vector<std::uint8_t> sorted(image.data);
    const std::size_t n = sorted.size();
    const std::size_t i1 = static_cast<std::size_t>(std::llround(0.01 * (n - 1)));
    const std::size_t i99 = static_cast<std::size_t>(std::llround(0.99 * (n - 1)));
    std::nth_element(sorted.begin(), sorted.begin() + i1, sorted.end());
    const double p1 = sorted[i1];
    std::nth_element(sorted.begin(), sorted.begin() + i99, sorted.end());
    const double p99 = sorted[i99];
    if (p99 <= p1) return image;
    const double gain = 255.0 / (p99 - p1);
    GrayImage out = image;
    for (auto& p : out.data) p = quantize_pixel((static_cast<double>(p) - p1) * gain);
    return out;
}

inline GrayImage apply_attack(const GrayImage& image, const AttackSpec& spec) {
    switch (spec.kind) {
        case AttackKind::LaplaceNoise:
            return laplace_noise_attack(image, spec.parameter, spec.rng_seed);
        case AttackKind::PixelLoss:
            return pixel_loss_attack(image, spec.parameter, spec.rng_seed);
        case AttackKind::Jpeg:
            return jpeg_attack(image, static_cast<int>(std::lround(spec.parameter)));
        case AttackKind::Brightness:
            return brightness_attack(image, spec.parameter);
        case AttackKind::AutoAdjust:
            return auto_adjust_attack(image);
    }
    throw std::logic_error("unknown attack kind");
}

inline AttackKind parse_attack_kind(const std::string& s) {
    if (s == "laplace-noise") return AttackKind::LaplaceNoise;
    if (s == "pixel-loss") return AttackKind::PixelLoss;
    if (s == "jpeg") return AttackKind::Jpeg;
    if (s == "brightness") return AttackKind::Brightness;
    if (s == "auto-adjust") return AttackKind::AutoAdjust;
    throw std::invalid_argument("unknown attack kind: " + s);
}

}  // namespace ssw

#endif
