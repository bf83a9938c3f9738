#ifndef SSW_PNG_IO_HPP
#define SSW_PNG_IO_HPP

#include <algorithm>
#include <cctype>
#include <stdexcept>
#include <string>

#include <png.h>

#include "ssw/image.hpp"

namespace ssw {

/// Reads any PNG as 8-bit grayscale (color inputs are converted by libpng).
inline GrayImage read_png(const std::string& path) {
    png_image pi{};
    pi.version = PNG_IMAGE_VERSION;
    if (!png_image_begin_read_from_file(&pi, path.c_str()))
        throw std::runtime_error("cannot read PNG " + path + ": " + pi.message);
    pi.format = PNG_FORMAT_GRAY;
    GrayImage img(static_cast<int>(pi.width), static_cast<int>(pi.height));
    if (!png_image_finish_read(&pi, nullptr, img.data.data(), 0, nullptr)) {
        const std::string msg = pi.message;
        png_image_free(&pi);
        throw std::runtime_error("cannot decode PNG " + path + ": " + msg);
    }
    return img;
}

inline void write_png(const std::string& path, const GrayImage& img) {
    png_image pi{};
    pi.version = PNG_IMAGE_VERSION;
    pi.width = static_cast<png_uint_32>(img.width);
    pi.height = static_cast<png_uint_32>(img.height);
    pi.format = PNG_FORMAT_GRAY;
    if (!png_image_write_to_file(&pi, path.c_str(), 0, img.data.data(), 0, nullptr))
        throw std::runtime_error("cannot write PNG " + path + ": " + pi.message);
}

namespace detail {

inline std::string lower_ext(const std::string& path) {
    const auto dot = path.find_last_of('.');
    if (dot == std::string::npos) return {};
    std::string ext = path.substr(dot);
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return ext;
}

}  // namespace detail

/// Format dispatch by extension: .png via libpng, anything else as binary PGM.
inline GrayImage read_image(const std::string& path) {
    return detail::lower_ext(path) == ".png" ? read_png(path) : read_pgm(path);
}

inline void write_image(const std::string& path, const GrayImage& img) {
    if (detail::lower_ext(path) == ".png")
        write_png(path, img);
    else
        write_pgm(path, img);
}

}  // namespace ssw

#endif
