// sswmark: multiplicative spread-spectrum image watermarking CLI.
//
// Subcommands: embed, extract, attack, fit, sweep-transparency, sweep-ber,
// sweep-attacks. Exit codes: 0 success, 1 fatal error, 2 partial cell
// failures in a sweep.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ssw/attacks.hpp"
#include "ssw/decoder.hpp"
#include "ssw/embedder.hpp"
#include "ssw/harness.hpp"
#include "ssw/image.hpp"
#include "ssw/key.hpp"
#include "ssw/metrics.hpp"
#include "ssw/png_io.hpp"
#include "ssw/statmodel.hpp"

namespace {

ssw::BitPayload bits_from_hex(const std::string& hex) {
    ssw::BitPayload bits;
    for (char ch : hex) {
        int v;
        if (ch >= '0' && ch <= '9') v = ch - '0';
        else if (ch >= 'a' && ch <= 'f') v = ch - 'a' + 10;
        else if (ch >= 'A' && ch <= 'F') v = ch - 'A' + 10;
        else throw std::runtime_error(std::string("invalid hex digit: ") + ch);
        for (int b = 3; b >= 0; --b) bits.push_back(static_cast<std::uint8_t>((v >> b) & 1));
    }
    return bits;
}

std::string hex_from_bits(const ssw::BitPayload& bits) {
    std::string hex;
    for (std::size_t i = 0; i < bits.size(); i += 4) {
        int v = 0;
        for (std::size_t j = 0; j < 4 && i + j < bits.size(); ++j)
            v |= bits[i + j] << (3 - j);
        hex += "0123456789abcdef"[v];
    }
    return hex;
}

// `--bits` accepts a literal hex string or a path to a file holding one
std::string resolve_hex_arg(const std::string& arg) {
    if (std::filesystem::exists(arg)) {
        std::ifstream f(arg);
        std::string line;
        std::getline(f, line);
        return line;
    }
    return arg;
}

ssw::DecoderModel parse_model(const std::string& s) {
    if (s == "clean") return ssw::DecoderModel::LaplaceClean;
    if (s == "noisy") return ssw::DecoderModel::LaplaceNoisy;
    if (s == "gauss") return ssw::DecoderModel::Gaussian;
    throw std::runtime_error("unknown model: " + s);
}

void write_text(const std::string& path, const std::string& content) {
    if (path == "-") {
        std::cout << content;
        return;
    }
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path);
    f << content;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"multiplicative spread-spectrum image watermarking"};
    app.require_subcommand(1);

    // ---- embed ----
    auto* embed = app.add_subcommand("embed", "embed a payload into a cover image");
    std::string e_cover, e_key, e_bits, e_out, e_report;
    embed->add_option("--cover", e_cover, "cover image (PGM)")->required();
    embed->add_option("--key", e_key, "key file")->required();
    embed->add_option("--bits", e_bits, "payload as hex string or file")->required();
    embed->add_option("--out", e_out, "output image (PGM)")->required();
    embed->add_option("--report", e_report, "write PSNR/DWR report CSV");

    // ---- extract ----
    auto* extract = app.add_subcommand("extract", "extract payload bits");
    std::string x_image, x_key, x_model = "clean", x_out = "-", x_trace;
    int x_bits = 0;
    double x_noise_scale = 0.0;
    extract->add_option("--image", x_image, "watermarked image (PGM)")->required();
    extract->add_option("--key", x_key, "key file")->required();
    extract->add_option("--bits", x_bits, "number of payload bits")->required();
    extract->add_option("--model", x_model, "clean|noisy|gauss");
    extract->add_option("--noise-scale", x_noise_scale, "noise Laplacian scale (noisy/gauss)");
    extract->add_option("--out", x_out, "output hex destination ('-' = stdout)");
    extract->add_option("--trace", x_trace, "write per-bit decision trace CSV");

    // ---- attack ----
    auto* attack = app.add_subcommand("attack", "apply a channel attack");
    std::string a_in, a_out, a_kind, a_domain = "pixel", a_key;
    double a_param = 0.0;
    std::uint64_t a_seed = 0;
    attack->add_option("--in", a_in, "input image (PGM)")->required();
    attack->add_option("--out", a_out, "output image (PGM)")->required();
    attack->add_option("--kind", a_kind,
                       "laplace-noise|pixel-loss|jpeg|brightness|auto-adjust")->required();
    attack->add_option("--param", a_param, "SNR dB | loss fraction | quality | ratio");
    attack->add_option("--seed", a_seed, "attack RNG seed");
    attack->add_option("--domain", a_domain, "pixel|dct (laplace-noise only)");
    attack->add_option("--key", a_key, "key file (mask for --domain dct)");

    // ---- fit ----
    auto* fit = app.add_subcommand("fit", "Laplacian fit report for mid-band coefficients");
    std::string f_image, f_key, f_out = "-";
    fit->add_option("--image", f_image, "image (PGM)")->required();
    fit->add_option("--key", f_key, "key file (mask); default mask if omitted");
    fit->add_option("--out", f_out, "CSV destination ('-' = stdout)");

    // ---- sweep-transparency ----
    auto* st = app.add_subcommand("sweep-transparency", "PSNR/DWR dataset sweep");
    std::string st_dataset, st_out = "-", st_config;
    std::string st_alphas = "0.01,0.02", st_ns = "8000";
    std::uint64_t st_seed = 1;
    st->add_option("--dataset", st_dataset, "directory of PGM images");
    st->add_option("--alphas", st_alphas, "comma-separated strength factors");
    st->add_option("--n", st_ns, "comma-separated chips-per-bit values");
    st->add_option("--seed", st_seed, "key seed");
    st->add_option("--out", st_out, "CSV destination");
    st->add_option("--config", st_config, "flat key=value config file");

    // ---- sweep-ber ----
    auto* sb = app.add_subcommand("sweep-ber", "Monte-Carlo BER sweep");
    std::string sb_mode = "synthetic", sb_out = "-", sb_config, sb_dataset;
    std::string sb_snrs = "0,2,4,6,8,10", sb_alphas = "0.06", sb_ns = "8000";
    std::string sb_models = "laplace-noisy,gaussian";
    std::size_t sb_trials = 1000;
    double sb_scale = 20.0;
    std::uint64_t sb_seed = 1;
    unsigned sb_threads = 0;
    sb->add_option("--mode", sb_mode, "synthetic|image");
    sb->add_option("--dataset", sb_dataset, "dataset dir (image mode)");
    sb->add_option("--snrs", sb_snrs, "comma-separated SNR values in dB");
    sb->add_option("--alphas", sb_alphas, "strength factors");
    sb->add_option("--n", sb_ns, "chips-per-bit values");
    sb->add_option("--models", sb_models, "laplace-clean|laplace-noisy|gaussian list");
    sb->add_option("--trials", sb_trials, "bit trials per cell");
    sb->add_option("--host-scale", sb_scale, "synthetic host Laplacian scale");
    sb->add_option("--seed", sb_seed, "RNG seed");
    sb->add_option("--threads", sb_threads, "worker threads (0 = auto)");
    sb->add_option("--out", sb_out, "CSV destination");
    sb->add_option("--config", sb_config, "flat key=value config file");

    // ---- sweep-attacks ----
    auto* sa = app.add_subcommand("sweep-attacks", "embed/attack/extract grid");
    std::string sa_dataset, sa_key, sa_out = "-", sa_model = "clean";
    std::string sa_loss = "0.1,0.2,0.3,0.4,0.5,0.6,0.7";
    std::string sa_jpeg = "75,85,95", sa_brightness = "0.7,0.9,1.1,1.2";
    bool sa_auto = true;
    std::uint64_t sa_seed = 1;
    sa->add_option("--dataset", sa_dataset, "directory of PGM images")->required();
    sa->add_option("--key", sa_key, "key file")->required();
    sa->add_option("--model", sa_model, "decoder model clean|noisy|gauss");
    sa->add_option("--loss", sa_loss, "pixel-loss fractions");
    sa->add_option("--jpeg", sa_jpeg, "JPG quality factors");
    sa->add_option("--brightness", sa_brightness, "brightness ratios");
    sa->add_flag("--auto-adjust,!--no-auto-adjust", sa_auto, "include auto-adjust cell");
    sa->add_option("--seed", sa_seed, "payload/attack seed");
    sa->add_option("--out", sa_out, "CSV destination");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*embed) {
            const ssw::WatermarkKey key = ssw::read_key_file(e_key);
            const ssw::GrayImage cover = ssw::read_image(e_cover);
            const auto payload = bits_from_hex(resolve_hex_arg(e_bits));
            const ssw::EmbedResult res = ssw::embed_image(cover, payload, key);
            ssw::write_image(e_out, res.watermarked);
            if (!e_report.empty()) {
                std::ostringstream csv;
                csv << "metric,image,alpha,n,param,value\n";
                csv << "psnr," << e_cover << ',' << key.alpha << ',' << key.chips_per_bit
                    << ",," << res.achieved_psnr << "\n";
                csv << "dwr," << e_cover << ',' << key.alpha << ',' << key.chips_per_bit
                    << ",," << res.achieved_dwr << "\n";
                write_text(e_report, csv.str());
            }
        } else if (*extract) {
            const ssw::WatermarkKey key = ssw::read_key_file(x_key);
            const ssw::GrayImage img = ssw::read_image(x_image);
            const auto res = ssw::extract_image_traced(img, key, x_bits, parse_model(x_model),
                                                       x_noise_scale);
            write_text(x_out, hex_from_bits(res.bits) + "\n");
            if (!x_trace.empty()) {
                std::ostringstream csv;
                csv << "bit_index,statistic,threshold,bit,oracle_fallback\n";
                for (std::size_t i = 0; i < res.traces.size(); ++i) {
                    const auto& t = res.traces[i];
                    csv << i << ',' << t.statistic << ',' << t.threshold << ',' << t.bit << ','
                        << (t.oracle_fallback ? 1 : 0) << "\n";
                }
                write_text(x_trace, csv.str());
            }
        } else if (*attack) {
            const ssw::GrayImage in = ssw::read_image(a_in);
            const ssw::AttackKind kind = ssw::parse_attack_kind(a_kind);
            ssw::GrayImage out;
            if (kind == ssw::AttackKind::LaplaceNoise && a_domain == "dct") {
                ssw::WatermarkKey key;
                if (!a_key.empty()) key = ssw::read_key_file(a_key);
                ssw::GrayImage work = ssw::center_crop_to_block_grid(in);
                ssw::BlockDctPlane plane = ssw::forward_block_dct(work);
                const ssw::CoeffStream noisy =
                    ssw::laplace_noise_attack(ssw::gather_midband(plane, key), a_param, a_seed);
                ssw::scatter_midband(plane, noisy, key);
                out = ssw::inverse_block_dct(plane);
            } else {
                out = ssw::apply_attack(in, {kind, a_param, a_seed});
            }
            ssw::write_image(a_out, out);
        } else if (*fit) {
            ssw::WatermarkKey key;
            if (!f_key.empty()) key = ssw::read_key_file(f_key);
            const ssw::GrayImage img =
                ssw::center_crop_to_block_grid(ssw::read_image(f_image));
            const auto stream = ssw::gather_midband(ssw::forward_block_dct(img), key);
            const ssw::FitReport r = ssw::fit_report(stream.values);
            std::ostringstream csv;
            csv << "image,scale,ks_laplace,ks_gauss\n";
            csv << f_image << ',' << r.scale << ',' << r.ks_laplace << ',' << r.ks_gauss << "\n";
            write_text(f_out, csv.str());
        } else if (*st) {
            if (!st_config.empty()) {
                const auto cfg = ssw::read_config(st_config);
                if (cfg.count("dataset")) st_dataset = cfg.at("dataset");
                if (cfg.count("alphas")) st_alphas = cfg.at("alphas");
                if (cfg.count("n_values")) st_ns = cfg.at("n_values");
                if (cfg.count("seed")) st_seed = std::stoull(cfg.at("seed"));
                if (cfg.count("out")) st_out = cfg.at("out");
            }
            if (st_dataset.empty()) throw std::runtime_error("missing --dataset");
            const auto res = ssw::run_transparency_sweep(
                st_dataset, st_alphas.empty() ? std::vector<double>{}
                                              : ssw::parse_double_list(st_alphas),
                ssw::parse_int_list(st_ns), st_seed);
            write_text(st_out, res.csv);
            return res.failed_cells ? 2 : 0;
        } else if (*sb) {
            if (!sb_config.empty()) {
                const auto cfg = ssw::read_config(sb_config);
                if (cfg.count("mode")) sb_mode = cfg.at("mode");
                if (cfg.count("dataset")) sb_dataset = cfg.at("dataset");
                if (cfg.count("snrs")) sb_snrs = cfg.at("snrs");
                if (cfg.count("alphas")) sb_alphas = cfg.at("alphas");
                if (cfg.count("n_values")) sb_ns = cfg.at("n_values");
                if (cfg.count("models")) sb_models = cfg.at("models");
                if (cfg.count("trials")) sb_trials = std::stoull(cfg.at("trials"));
                if (cfg.count("host_scale")) sb_scale = std::stod(cfg.at("host_scale"));
                if (cfg.count("seed")) sb_seed = std::stoull(cfg.at("seed"));
                if (cfg.count("out")) sb_out = cfg.at("out");
            }
            ssw::BerSweepConfig cfg;
            cfg.snr_db = ssw::parse_double_list(sb_snrs);
            cfg.alphas = ssw::parse_double_list(sb_alphas);
            cfg.n_values = ssw::parse_int_list(sb_ns);
            cfg.trials = sb_trials;
            cfg.host_scale = sb_scale;
            cfg.seed = sb_seed;
            cfg.threads = sb_threads;
            cfg.models.clear();
            {
                std::istringstream is(sb_models);
                std::string m;
                while (std::getline(is, m, ',')) {
                    if (m == "laplace-clean") cfg.models.push_back(ssw::DecoderModel::LaplaceClean);
                    else if (m == "laplace-noisy")
                        cfg.models.push_back(ssw::DecoderModel::LaplaceNoisy);
                    else if (m == "gaussian") cfg.models.push_back(ssw::DecoderModel::Gaussian);
                    else throw std::runtime_error("unknown model: " + m);
                }
            }
            if (sb_mode == "synthetic") {
                const auto res = ssw::run_ber_sweep_synthetic(cfg);
                write_text(sb_out, res.csv);
            } else if (sb_mode == "image") {
                if (sb_dataset.empty()) throw std::runtime_error("missing --dataset");
                // illustrative image-mode sweep: embed, pixel-domain noise, extract
                std::ostringstream csv;
                csv << "model,snr_db,alpha,n,image,ber\n";
                for (const auto& path : std::filesystem::directory_iterator(sb_dataset)) {
                    if (path.path().extension() != ".pgm") continue;
                    const ssw::GrayImage cover = ssw::read_image(path.path().string());
                    for (double alpha : cfg.alphas)
                        for (int n : cfg.n_values) {
                            ssw::WatermarkKey key;
                            key.seed = cfg.seed;
                            key.alpha = alpha;
                            key.chips_per_bit = n;
                            const auto [x0, y0, w, h] =
                                ssw::block_grid_region(cover.width, cover.height);
                            const int cap = ssw::validate_key(key, w, h);
                            const auto payload =
                                ssw::detail::random_payload(cfg.seed ^ 0xBEB, cap);
                            const auto er = ssw::embed_image(cover, payload, key);
                            for (double snr : cfg.snr_db)
                                for (auto model : cfg.models) {
                                    const auto attacked = ssw::laplace_noise_attack(
                                        er.watermarked, snr, cfg.seed + 17);
                                    const auto bits =
                                        ssw::extract_image(attacked, key, cap, model);
                                    csv << ssw::model_name(model) << ',' << snr << ',' << alpha
                                        << ',' << n << ',' << path.path().stem().string() << ','
                                        << ssw::ber(payload, bits) << "\n";
                                }
                        }
                }
                write_text(sb_out, csv.str());
            } else {
                throw std::runtime_error("unknown mode: " + sb_mode);
            }
        } else if (*sa) {
            const ssw::WatermarkKey key = ssw::read_key_file(sa_key);
            std::vector<ssw::AttackCell> grid;
            for (double f : ssw::parse_double_list(sa_loss))
                grid.push_back({ssw::AttackKind::PixelLoss, f});
            for (int q : ssw::parse_int_list(sa_jpeg))
                grid.push_back({ssw::AttackKind::Jpeg, static_cast<double>(q)});
            for (double r : ssw::parse_double_list(sa_brightness))
                grid.push_back({ssw::AttackKind::Brightness, r});
            if (sa_auto) grid.push_back({ssw::AttackKind::AutoAdjust, 0.0});
            const auto res =
                ssw::run_attack_suite(sa_dataset, key, grid, parse_model(sa_model), sa_seed);
            write_text(sa_out, res.csv);
            return res.failed_cells ? 2 : 0;
        }
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 1;
    }
    return 0;
}
