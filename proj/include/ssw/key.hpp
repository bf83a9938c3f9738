#ifndef SSW_KEY_HPP
#define SSW_KEY_HPP

#include <algorithm>
#include <array>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ssw/image.hpp"

namespace ssw {

using MaskPos = std::pair<int, int>;  // (row, col) within a 4x4 block

/// Zig-zag traversal order of the 4x4 coefficient plane (JPEG-style).
inline const std::array<MaskPos, 16>& zigzag4x4() {
    static const std::array<MaskPos, 16> order = [] {
        std::array<MaskPos, 16> o{};
        int idx = 0;
        for (int d = 0; d <= 6; ++d) {
            if (d % 2 == 0) {  // up-right
                for (int r = std::min(d, 3); r >= std::max(0, d - 3); --r) o[idx++] = {r, d - r};
            } else {  // down-left
                for (int r = std::max(0, d - 3); r <= std::min(d, 3); ++r) o[idx++] = {r, d - r};
            }
        }
        return o;
    }();
    return order;
}

/// Default mid-band set: the two anti-diagonals r+c in {2,3}.
inline std::vector<MaskPos> default_midband_mask() {
    return {{0, 2}, {1, 1}, {2, 0}, {0, 3}, {1, 2}, {2, 1}, {3, 0}};
}

/// Seed plus embedding parameters; fixes the spreading sequence and the
/// coefficient layout shared by embedder and decoder.
struct WatermarkKey {
    std::uint64_t seed = 0;
    double alpha = 0.01;          // strength factor, in (0,1)
    int chips_per_bit = 8000;     // N
    std::vector<MaskPos> midband_mask = default_midband_mask();

    bool operator==(const WatermarkKey&) const = default;
};

/// Mask in canonical layout order: zig-zag order, restricted to the mask.
inline std::vector<MaskPos> canonical_mask(const std::vector<MaskPos>& mask) {
    std::vector<MaskPos> out;
    for (const auto& p : zigzag4x4())
        if (std::find(mask.begin(), mask.end(), p) != mask.end()) out.push_back(p);
    return out;
}

/// Validates parameters against image dims and returns the payload capacity
/// in bits. Throws std::invalid_argument on any violated constraint.
inline int validate_key(const WatermarkKey& key, int width, int height) {
    if (width % kBlockSize != 0 || height % kBlockSize != 0)
        throw std::invalid_argument("image dims must be divisible by the block size");
    if (!(key.alpha > 0.0 && key.alpha < 1.0))
        throw std::invalid_argument("alpha must be in (0,1)");
    if (key.chips_per_bit < 1) throw std::invalid_argument("chips_per_bit must be >= 1");
    if (key.midband_mask.empty()) throw std::invalid_argument("empty midband mask");
    for (const auto& [r, c] : key.midband_mask) {
        if (r < 0 || r >= kBlockSize || c < 0 || c >= kBlockSize)
            throw std::invalid_argument("mask position outside the block");
        if (r == 0 && c == 0) throw std::invalid_argument("mask must exclude the DC position");
    }
    const long long blocks =
        static_cast<long long>(width / kBlockSize) * (height / kBlockSize);
    const long long coeffs = blocks * static_cast<long long>(key.midband_mask.size());
    const long long capacity = coeffs / key.chips_per_bit;
    if (capacity == 0) throw std::invalid_argument("zero payload capacity");
    return static_cast<int>(capacity);
}

// ---- key file: `v1 seed=<u64> alpha=<decimal> n=<int> mask=<r,c;r,c;...>` ----

inline std::string serialize_key(const WatermarkKey& key) {
    std::ostringstream os;
    os << "v1 seed=" << key.seed << " alpha=";
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, key.alpha);
    os.write(buf, p - buf);
    os << " n=" << key.chips_per_bit << " mask=";
    bool first = true;
    for (const auto& [r, c] : key.midband_mask) {
        if (!first) os << ';';
        os << r << ',' << c;
        first = false;
    }
    return os.str();
}

inline WatermarkKey parse_key(const std::string& line) {
    std::istringstream is(line);
    std::string tok;
    is >> tok;
    if (tok != "v1") throw std::runtime_error("unsupported key file version");
    WatermarkKey key;
    key.midband_mask.clear();
    bool seen_seed = false, seen_alpha = false, seen_n = false, seen_mask = false;
    while (is >> tok) {
        const auto eq = tok.find('=');
        if (eq == std::string::npos) throw std::runtime_error("malformed key field: " + tok);
        const std::string name = tok.substr(0, eq);
        const std::string val = tok.substr(eq + 1);
        const char* b = val.data();
        const char* e = b + val.size();
        if (name == "seed") {
            auto [p, ec] = std::from_chars(b, e, key.seed);
            if (ec != std::errc{} || p != e) throw std::runtime_error("bad seed");
            seen_seed = true;
        } else if (name == "alpha") {
            auto [p, ec] = std::from_chars(b, e, key.alpha);
            if (ec != std::errc{} || p != e) throw std::runtime_error("bad alpha");
            seen_alpha = true;
        } else if (name == "n") {
            auto [p, ec] = std::from_chars(b, e, key.chips_per_bit);
            if (ec != std::errc{} || p != e) throw std::runtime_error("bad n");
            seen_n = true;
        } else if (name == "mask") {
            std::istringstream ms(val);
            std::string item;
            while (std::getline(ms, item, ';')) {
                const auto comma = item.find(',');
                if (comma == std::string::npos) throw std::runtime_error("bad mask entry");
                key.midband_mask.emplace_back(std::stoi(item.substr(0, comma)),
                                              std::stoi(item.substr(comma + 1)));
            }
            seen_mask = true;
        } else {
            throw std::runtime_error("unknown key field: " + name);
        }
    }
    if (!(seen_seed && seen_alpha && seen_n && seen_mask))
        throw std::runtime_error("incomplete key file");
    return key;
}

inline WatermarkKey read_key_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open key file " + path);
    std::string line;
    std::getline(f, line);
    return parse_key(line);
}

inline void write_key_file(const std::string& path, const WatermarkKey& key) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open key file " + path);
    f << serialize_key(key) << "\n";
}

}  // namespace ssw

#endif
