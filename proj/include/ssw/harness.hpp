#ifndef SSW_HARNESS_HPP
#define SSW_HARNESS_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <future>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "ssw/attacks.hpp"
#include "ssw/decoder.hpp"
#include "ssw/embedder.hpp"
#include "ssw/image.hpp"
#include "ssw/metrics.hpp"
#include "ssw/png_io.hpp"

namespace ssw {

struct SweepResult {
    std::string csv;
    int failed_cells = 0;
};

namespace detail {

inline std::vector<std::filesystem::path> list_dataset(const std::string& dir) {
    std::vector<std::filesystem::path> files;
    for (const auto& e : std::filesystem::directory_iterator(dir)) {
        if (!e.is_regular_file()) continue;
        const auto ext = e.path().extension().string();
        if (ext == ".pgm" || ext == ".png") files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
    return files;
}

inline BitPayload random_payload(std::uint64_t seed, std::size_t bits) {
    KeyStream ks(seed);
    BitPayload p(bits);
    for (auto& b : p) b = static_cast<std::uint8_t>(ks.next_u64() & 1u);
    return p;
}

inline std::string fmt(double v) {
    std::ostringstream os;
    os.precision(10);
    os << v;
    return os.str();
}

struct Wilson {
    double lo, hi;
};

inline Wilson wilson95(std::size_t errors, std::size_t trials) {
    const double z = 1.959963985;
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(errors) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = p + z2 / (2.0 * n);
    const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n));
    return {std::max(0.0, (center - half) / denom), std::min(1.0, (center + half) / denom)};
}

}  // namespace detail

/// Per-image PSNR/DWR rows plus the analytic DWR, schema
/// `metric,image,alpha,n,param,value`. Unreadable files produce error rows;
/// the sweep continues.
inline SweepResult run_transparency_sweep(const std::string& dataset_dir,
                                          const std::vector<double>& alphas,
                                          const std::vector<int>& n_values,
                                          std::uint64_t seed = 1) {
    std::ostringstream csv;
    csv << "metric,image,alpha,n,param,value\n";
    SweepResult res;
    for (const auto& path : detail::list_dataset(dataset_dir)) {
        const std::string name = path.stem().string();
        GrayImage cover;
        try {
            cover = read_image(path.string());
        } catch (const std::exception& ex) {
            csv << "error," << name << ",,,," << ex.what() << "\n";
            ++res.failed_cells;
            continue;
        }
        for (double alpha : alphas)
            for (int n : n_values) {
                try {
                    WatermarkKey key;
                    key.seed = seed;
                    key.alpha = alpha;
                    key.chips_per_bit = n;
                    const auto [x0, y0, w, h] = block_grid_region(cover.width, cover.height);
                    const int cap = validate_key(key, w, h);
                    const auto payload = detail::random_payload(seed ^ 0x5a5a, cap);
                    const EmbedResult r = embed_image(cover, payload, key);
                    csv << "psnr," << name << ',' << alpha << ',' << n << ",,"
                        << detail::fmt(r.achieved_psnr) << "\n";
                    csv << "dwr," << name << ',' << alpha << ',' << n << ",,"
                        << detail::fmt(r.achieved_dwr) << "\n";
                    csv << "dwr_analytic," << name << ',' << alpha << ',' << n << ",,"
                        << detail::fmt(dwr_analytic(alpha)) << "\n";
                } catch (const std::exception& ex) {
                    csv << "error," << name << ',' << alpha << ',' << n << ",," << ex.what()
                        << "\n";
                    ++res.failed_cells;
                }
            }
    }
    res.csv = csv.str();
    return res;
}

struct BerSweepConfig {
    std::vector<double> snr_db;
    std::vector<double> alphas;
    std::vector<int> n_values;
    std::size_t trials = 1000;  // bit trials per cell
    std::vector<DecoderModel> models{DecoderModel::LaplaceNoisy, DecoderModel::Gaussian};
    double host_scale = 20.0;  // Laplacian scale of the synthetic host
    std::uint64_t seed = 1;
    unsigned threads = 0;  // 0 = hardware concurrency
};

inline const char* model_name(DecoderModel m) {
    switch (m) {
        case DecoderModel::LaplaceClean: return "laplace-clean";
        case DecoderModel::LaplaceNoisy: return "laplace-noisy";
        case DecoderModel::Gaussian: return "gaussian";
    }
    return "?";
}

/// Synthetic Monte-Carlo BER: Laplacian host at the configured scale,
/// multiplicative embedding, Laplacian channel noise at the requested SNR,
/// all models decode the same realizations with the true parameters.
/// Schema: model,snr_db,alpha,n,trials,errors,ber,wilson_lo,wilson_hi.
inline SweepResult run_ber_sweep_synthetic(const BerSweepConfig& cfg) {
    std::ostringstream csv;
    csv << "model,snr_db,alpha,n,trials,errors,ber,wilson_lo,wilson_hi\n";
    const unsigned nthreads =
        cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
    for (double snr : cfg.snr_db)
        for (double alpha : cfg.alphas)
            for (int n : cfg.n_values) {
                const double sx = cfg.host_scale;
                const double signal_power = 2.0 * sx * sx * (1.0 + alpha * alpha);
                const double sn =
                    std::sqrt(signal_power / std::pow(10.0, snr / 10.0) / 2.0);
                std::vector<std::size_t> errors(cfg.models.size(), 0);

                auto worker = [&](std::uint64_t wseed, std::size_t trials) {
                    std::vector<std::size_t> errs(cfg.models.size(), 0);
                    KeyStream ks(wseed);
                    std::vector<double> z(static_cast<std::size_t>(n));
                    std::vector<std::int8_t> w(static_cast<std::size_t>(n));
                    for (std::size_t t = 0; t < trials; ++t) {
                        const int bit = static_cast<int>(ks.next_u64() & 1u);
                        const double m = alpha * (2 * bit - 1);
                        for (int i = 0; i < n; ++i) {
                            w[i] = static_cast<std::int8_t>(ks.next_chip());
                            const double x = ks.next_laplace(sx);
                            z[i] = x * (1.0 + m * w[i]) + ks.next_laplace(sn);
                        }
                        for (std::size_t mi = 0; mi < cfg.models.size(); ++mi) {
                            DecisionTrace trace;
                            switch (cfg.models[mi]) {
                                case DecoderModel::LaplaceClean:
                                    trace = decode_clean(z, w, alpha, sx);
                                    break;
                                case DecoderModel::LaplaceNoisy:
                                    trace = decode_noisy(z, w, alpha, sx, sn);
                                    break;
                                case DecoderModel::Gaussian:
                                    trace = decode_gaussian_baseline(
                                        z, w, alpha, std::sqrt(2.0) * sx, std::sqrt(2.0) * sn);
                                    break;
                            }
                            errs[mi] += trace.bit != bit;
                        }
                    }
                    return errs;
                };

                std::vector<std::future<std::vector<std::size_t>>> futs;
                const std::size_t chunk = cfg.trials / nthreads;
                std::size_t assigned = 0;
                for (unsigned th = 0; th < nthreads; ++th) {
                    const std::size_t t =
                        (th + 1 == nthreads) ? cfg.trials - assigned : chunk;
                    assigned += t;
                    const std::uint64_t wseed =
                        cfg.seed ^ (0x9E3779B97F4A7C15ULL * (th + 1)) ^
                        std::hash<double>{}(snr + 1000.0 * alpha + n);
                    futs.push_back(std::async(std::launch::async, worker, wseed, t));
                }
                for (auto& f : futs) {
                    const auto errs = f.get();
                    for (std::size_t mi = 0; mi < errs.size(); ++mi) errors[mi] += errs[mi];
                }
                for (std::size_t mi = 0; mi < cfg.models.size(); ++mi) {
                    const auto wi = detail::wilson95(errors[mi], cfg.trials);
                    csv << model_name(cfg.models[mi]) << ',' << snr << ',' << alpha << ',' << n
                        << ',' << cfg.trials << ',' << errors[mi] << ','
                        << detail::fmt(static_cast<double>(errors[mi]) /
                                       static_cast<double>(cfg.trials))
                        << ',' << detail::fmt(wi.lo) << ',' << detail::fmt(wi.hi) << "\n";
                }
            }
    return {csv.str(), 0};
}

struct AttackCell {
    AttackKind kind;
    double parameter;
};

/// embed -> attack -> extract per (image, attack cell); emits BER and
/// recovery rows in the `metric,image,alpha,n,param,value` schema.
inline SweepResult run_attack_suite(const std::string& dataset_dir, const WatermarkKey& key,
                                    const std::vector<AttackCell>& grid,
                                    DecoderModel model = DecoderModel::LaplaceClean,
                                    std::uint64_t seed = 1) {
    std::ostringstream csv;
    csv << "metric,image,alpha,n,param,value\n";
    SweepResult res;
    for (const auto& path : detail::list_dataset(dataset_dir)) {
        const std::string name = path.stem().string();
        try {
            const GrayImage cover = read_image(path.string());
            const auto [x0, y0, w, h] = block_grid_region(cover.width, cover.height);
            const int cap = validate_key(key, w, h);
            const auto payload = detail::random_payload(seed ^ 0xA11CE, cap);
            const EmbedResult er = embed_image(cover, payload, key);
            for (const auto& cell : grid) {
                try {
                    AttackSpec spec{cell.kind, cell.parameter, seed};
                    const GrayImage attacked = apply_attack(er.watermarked, spec);
                    const auto bits = extract_image(attacked, key, cap, model);
                    const double b = ber(payload, bits);
                    const char* kind = "?";
                    switch (cell.kind) {
                        case AttackKind::LaplaceNoise: kind = "laplace-noise"; break;
                        case AttackKind::PixelLoss: kind = "pixel-loss"; break;
                        case AttackKind::Jpeg: kind = "jpeg"; break;
                        case AttackKind::Brightness: kind = "brightness"; break;
                        case AttackKind::AutoAdjust: kind = "auto-adjust"; break;
                    }
                    csv << "ber_" << kind << ',' << name << ',' << key.alpha << ','
                        << key.chips_per_bit << ',' << cell.parameter << ',' << detail::fmt(b)
                        << "\n";
                    csv << "recovery_" << kind << ',' << name << ',' << key.alpha << ','
                        << key.chips_per_bit << ',' << cell.parameter << ','
                        << detail::fmt(1.0 - b) << "\n";
                } catch (const std::exception& ex) {
                    csv << "error," << name << ',' << key.alpha << ',' << key.chips_per_bit
                        << ',' << cell.parameter << ',' << ex.what() << "\n";
                    ++res.failed_cells;
                }
            }
        } catch (const std::exception& ex) {
            csv << "error," << name << ",,,," << ex.what() << "\n";
            ++res.failed_cells;
        }
    }
    res.csv = csv.str();
    return res;
}

/// Flat `key=value` config file; '#' starts a comment line.
inline std::map<std::string, std::string> read_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open config " + path);
    std::map<std::string, std::string> cfg;
    std::string line;
    while (std::getline(f, line)) {
        if (line.empty() || line[0] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw std::runtime_error("malformed config line: " + line);
        cfg[line.substr(0, eq)] = line.substr(eq + 1);
    }
    return cfg;
}

inline std::vector<double> parse_double_list(const std::string& s) {
    std::vector<double> out;
    std::istringstream is(s);
    std::string item;
    while (std::getline(is, item, ',')) out.push_back(std::stod(item));
    return out;
}

inline std::vector<int> parse_int_list(const std::string& s) {
    std::vector<int> out;
    std::istringstream is(s);
    std::string item;
    while (std::getline(is, item, ',')) out.push_back(std::stoi(item));
    return out;
}

}  // namespace ssw

#endif
