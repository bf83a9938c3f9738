#ifndef SSW_IMAGE_HPP
#define SSW_IMAGE_HPP

#include <array>
#include <cctype>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace ssw {

inline constexpr int kBlockSize = 4;

/// 8-bit single-channel raster, row-major.
struct GrayImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> data;

    GrayImage() = default;
    GrayImage(int w, int h, std::uint8_t fill = 0)
        : width(w), height(h), data(static_cast<std::size_t>(w) * h, fill) {
        if (w <= 0 || h <= 0) throw std::invalid_argument("GrayImage: nonpositive dims");
    }

    std::uint8_t& at(int x, int y) { return data[static_cast<std::size_t>(y) * width + x]; }
    std::uint8_t at(int x, int y) const { return data[static_cast<std::size_t>(y) * width + x]; }
    std::size_t size() const { return data.size(); }

    bool block_aligned() const { return width % kBlockSize == 0 && height % kBlockSize == 0; }

    bool operator==(const GrayImage&) const = default;
};

/// Largest centered region with both dims divisible by the block size.
/// Returns (x0, y0, w, h).
inline std::array<int, 4> block_grid_region(int width, int height) {
    const int w = width - width % kBlockSize;
    const int h = height - height % kBlockSize;
    if (w == 0 || h == 0) throw std::invalid_argument("image smaller than one block");
    return {(width - w) / 2, (height - h) / 2, w, h};
}

inline GrayImage center_crop_to_block_grid(const GrayImage& img) {
    if (img.block_aligned()) return img;
    const auto [x0, y0, w, h] = block_grid_region(img.width, img.height);
    GrayImage out(w, h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) out.at(x, y) = img.at(x0 + x, y0 + y);
    return out;
}

// ---- PGM (P5, binary, maxval 255) ----

inline GrayImage read_pgm(std::istream& in) {
    std::string magic;
    in >> magic;
    if (magic != "P5") throw std::runtime_error("not a binary PGM (P5)");
    auto next_int = [&in]() {
        // skip whitespace and '#' comment lines
        int c;
        while ((c = in.peek()) != EOF) {
            if (c == '#') {
                std::string line;
                std::getline(in, line);
            } else if (std::isspace(c)) {
                in.get();
            } else {
                break;
            }
        }
        long v = -1;
        in >> v;
        if (!in || v < 0) throw std::runtime_error("malformed PGM header");
        return v;
    };
    const long w = next_int(), h = next_int(), maxval = next_int();
    if (maxval != 255) throw std::runtime_error("PGM maxval must be 255");
    in.get();  // single whitespace before raster
    GrayImage img(static_cast<int>(w), static_cast<int>(h));
    in.read(reinterpret_cast<char*>(img.data.data()), static_cast<std::streamsize>(img.size()));
    if (!in) throw std::runtime_error("truncated PGM raster");
    return img;
}

inline void write_pgm(std::ostream& out, const GrayImage& img) {
    out << "P5\n" << img.width << " " << img.height << "\n255\n";
    out.write(reinterpret_cast<const char*>(img.data.data()),
              static_cast<std::streamsize>(img.size()));
}

inline GrayImage read_pgm(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path);
    return read_pgm(f);
}

inline void write_pgm(const std::string& path, const GrayImage& img) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path);
    write_pgm(f, img);
}

}  // namespace ssw

#endif
