#ifndef SSW_STATMODEL_HPP
#define SSW_STATMODEL_HPP

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

namespace ssw {

// All densities below use the SCALE parameterization: Laplace(b) has pdf
// (1/2b) exp(-|t|/b). The rate form is lambda = 1/b; the conversion is total
// and happens only at API boundaries.
//
// The Laplacian is the c=1 special case of the generalized Gaussian family
// A exp(-|beta (x-m)|^c); no other shape parameter is supported here.

/// Host/noise Laplacian parameters.
struct LaplacianModel {
    double scale_x = 1.0;
    double scale_n = 0.0;  // 0 means "absent"
};

inline double laplace_pdf(double t, double scale) {
    if (!(scale > 0.0)) throw std::invalid_argument("laplace_pdf: scale must be positive");
    return 0.5 / scale * std::exp(-std::fabs(t) / scale);
}

inline double laplace_log_pdf(double t, double scale) {
    if (!(scale > 0.0)) throw std::invalid_argument("laplace_log_pdf: scale must be positive");
    return -std::log(2.0 * scale) - std::fabs(t) / scale;
}

inline double laplace_cdf(double t, double scale) {
    if (!(scale > 0.0)) throw std::invalid_argument("laplace_cdf: scale must be positive");
    return t < 0 ? 0.5 * std::exp(t / scale) : 1.0 - 0.5 * std::exp(-t / scale);
}

/// MLE of the Laplacian scale: mean absolute value (rate form N / sum|x_i|).
inline double mle_scale(std::span<const double> samples) {
    if (samples.empty()) throw std::invalid_argument("mle_scale: empty input");
    double acc = 0.0;
    for (double v : samples) acc += std::fabs(v);
    if (acc == 0.0) throw std::invalid_argument("mle_scale: all-zero input, MLE undefined");
    return acc / static_cast<double>(samples.size());
}

/// Scales of the two independent zero-mean Laplacians being summed.
struct SumDensityParams {
    double scale_a;
    double scale_b;
};

inline constexpr double kSumDensityDegenerateTol = 1e-9;

/// Density of the sum of two independent zero-mean Laplacians. For distinct
/// scales a != b:
///   f(z) = [a e^{-|z|/a} - b e^{-|z|/b}] / (2 (a^2 - b^2)),
/// and the analytic limit at a == b:
///   f(z) = (1/4a) (1 + |z|/a) e^{-|z|/a}.
inline double sum_log_density(double z, const SumDensityParams& p) {
    const double a = p.scale_a, b = p.scale_b;
    if (!(a > 0.0) || !(b > 0.0))
        throw std::invalid_argument("sum_density: scales must be positive");
    const double az = std::fabs(z);
    if (std::fabs(a - b) < kSumDensityDegenerateTol * std::max(a, b)) {
        const double m = 0.5 * (a + b);
        return -std::log(4.0 * m) + std::log1p(az / m) - az / m;
    }
    // factor out the slower decay (the larger scale) for stability
    const double L = std::max(a, b), S = std::min(a, b);
    const double bracket = L - S * std::exp(-az * (1.0 / S - 1.0 / L));
    return -az / L + std::log(bracket) - std::log(2.0 * (L * L - S * S));
}

inline double sum_density(double z, const SumDensityParams& p) {
    return std::exp(sum_log_density(z, p));
}

// ---- goodness of fit (sup-distance between empirical and fitted CDF) ----

namespace detail {

template <typename Cdf>
inline double ks_statistic(std::vector<double> sorted_samples, Cdf cdf) {
    std::sort(sorted_samples.begin(), sorted_samples.end());
    const double n = static_cast<double>(sorted_samples.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sorted_samples.size(); ++i) {
        const double f = cdf(sorted_samples[i]);
        d = std::max(d, std::fabs(f - static_cast<double>(i + 1) / n));
        d = std::max(d, std::fabs(f - static_cast<double>(i) / n));
    }
    return d;
}

inline double gauss_cdf(double t, double sigma) {
    return 0.5 * std::erfc(-t / (sigma * std::sqrt(2.0)));
}

}  // namespace detail

struct FitReport {
    double scale;       // fitted Laplacian scale
    double ks_laplace;  // sup-distance of the Laplacian fit
    double ks_gauss;    // sup-distance of a zero-mean Gaussian fit to the same data
};

inline FitReport fit_report(std::span<const double> samples) {
    const double scale = mle_scale(samples);
    std::vector<double> v(samples.begin(), samples.end());
    double ss = 0.0;
    for (double x : v) ss += x * x;
    const double sigma = std::sqrt(ss / static_cast<double>(v.size()));
    FitReport r;
    r.scale = scale;
    r.ks_laplace = detail::ks_statistic(v, [scale](double t) { return laplace_cdf(t, scale); });
    r.ks_gauss = detail::ks_statistic(v, [sigma](double t) { return detail::gauss_cdf(t, sigma); });
    return r;
}

}  // namespace ssw

#endif
