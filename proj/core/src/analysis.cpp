#include "gelshatter/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace gelshatter::analysis {

double generalized_harmonic(double alpha, std::uint64_t a, std::uint64_t b) {
    if (a < 1 || b < a) throw std::invalid_argument("generalized_harmonic: bad window");
    constexpr std::uint64_t direct_terms = 2048;
    const std::uint64_t cut = (b - a + 1 <= direct_terms) ? b : a + direct_terms - 1;
    double sum = 0.0;
    for (std::uint64_t k = a; k <= cut; ++k)
        sum += std::pow(static_cast<double>(k), -alpha);
    if (cut == b) return sum;

    // Euler-Maclaurin for the tail over [c, b]: the last direct term is
    // recomputed as the boundary term f(c).
    const double c = static_cast<double>(cut);
    const double bb = static_cast<double>(b);
    sum -= std::pow(c, -alpha);
    const double fc = std::pow(c, -alpha);
    const double fb = std::pow(bb, -alpha);
    double tail;
    if (std::abs(alpha - 1.0) < 1e-12) {
        tail = std::log(bb / c);
    } else {
        tail = (std::pow(c, 1.0 - alpha) - std::pow(bb, 1.0 - alpha)) / (alpha - 1.0);
    }
    tail += 0.5 * (fc + fb);
    tail += (alpha / 12.0) * (fc / c - fb / bb);
    // Next correction is O(alpha^3 c^-alpha-3); negligible at c >= 2048.
    return sum + tail;
}

namespace {

struct WindowStats {
    double n = 0.0;
    double sum_log = 0.0;
    std::uint64_t lo = 0, hi = 0;  // smallest/largest size present
};

WindowStats window_stats(std::span<const std::pair<std::uint64_t, double>> weighted,
                         std::uint64_t k_min, std::uint64_t k_max_fit) {
    WindowStats w;
    for (const auto& [size, weight] : weighted) {
        if (size < k_min || size > k_max_fit || weight <= 0.0) continue;
        w.n += weight;
        w.sum_log += weight * std::log(static_cast<double>(size));
        w.lo = (w.lo == 0) ? size : std::min(w.lo, size);
        w.hi = std::max(w.hi, size);
    }
    return w;
}

}  // namespace

PowerLawFit fit_truncated_powerlaw(std::span<const std::pair<std::uint64_t, double>> weighted,
                                   std::uint64_t k_min, std::uint64_t k_max_fit,
                                   double min_samples) {
    if (k_min < 1) throw std::invalid_argument("k_min: must be >= 1");
    if (k_max_fit < k_min) throw std::invalid_argument("k_max_fit: must be >= k_min");

    const WindowStats w = window_stats(weighted, k_min, k_max_fit);
    if (w.n < min_samples)
        throw FitError("fit_truncated_powerlaw: " + std::to_string(w.n) +
                       " samples in window, need " + std::to_string(min_samples));
    if (w.lo == w.hi)
        throw FitError("fit_truncated_powerlaw: all samples at size " + std::to_string(w.lo) +
                       ", likelihood is unbounded");

    const auto loglik = [&](double alpha) {
        return -alpha * w.sum_log - w.n * std::log(generalized_harmonic(alpha, k_min, k_max_fit));
    };

    // Golden-section maximization; the log-likelihood is strictly concave in
    // alpha on a truncated window.
    constexpr double tol = 1e-6;
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double lo = 1.01, hi = 6.0;
    double x1 = hi - inv_phi * (hi - lo);
    double x2 = lo + inv_phi * (hi - lo);
    double f1 = loglik(x1), f2 = loglik(x2);
    while (hi - lo > tol) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = loglik(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = loglik(x1);
        }
    }
    PowerLawFit fit;
    fit.alpha = 0.5 * (lo + hi);
    fit.k_min = k_min;
    fit.k_max_fit = k_max_fit;
    fit.n_samples = w.n;
    fit.loglik = loglik(fit.alpha);
    return fit;
}

PowerLawFit fit_truncated_powerlaw(const SizeHistogram& hist, std::uint64_t k_min,
                                   std::uint64_t k_max_fit, double min_samples) {
    std::vector<std::pair<std::uint64_t, double>> weighted;
    weighted.reserve(hist.counts.size());
    for (const auto& [size, count] : hist.counts)
        weighted.emplace_back(size, static_cast<double>(count));
    if (k_max_fit == 0) k_max_fit = hist.largest();
    return fit_truncated_powerlaw(weighted, k_min, k_max_fit, min_samples);
}

PowerLawFit fit_truncated_powerlaw(const std::map<std::uint64_t, double>& density,
                                   std::uint64_t k_min, std::uint64_t k_max_fit,
                                   double min_samples) {
    std::vector<std::pair<std::uint64_t, double>> weighted(density.begin(), density.end());
    if (k_max_fit == 0 && !density.empty()) k_max_fit = density.rbegin()->first;
    return fit_truncated_powerlaw(weighted, k_min, k_max_fit, min_samples);
}

ExponentialFit fit_exponential(std::span<const double> samples) {
    if (samples.size() < 2) throw FitError("fit_exponential: need at least 2 samples");
    double sum = 0.0;
    for (double t : samples) {
        if (t <= 0.0) throw FitError("fit_exponential: non-positive sample");
        sum += t;
    }
    ExponentialFit fit;
    fit.rate = static_cast<double>(samples.size()) / sum;
    fit.mean = 1.0 / fit.rate;
    return fit;
}

RayleighFit fit_rayleigh(std::span<const double> samples) {
    if (samples.size() < 2) throw FitError("fit_rayleigh: need at least 2 samples");
    double sum_sq = 0.0;
    for (double t : samples) {
        if (t <= 0.0) throw FitError("fit_rayleigh: non-positive sample");
        sum_sq += t * t;
    }
    RayleighFit fit;
    fit.sigma = std::sqrt(sum_sq / (2.0 * static_cast<double>(samples.size())));
    fit.mean = fit.sigma * std::sqrt(std::numbers::pi / 2.0);
    return fit;
}

double exponential_cdf(double rate, double x) {
    return x <= 0.0 ? 0.0 : 1.0 - std::exp(-rate * x);
}

double rayleigh_cdf(double sigma, double x) {
    return x <= 0.0 ? 0.0 : 1.0 - std::exp(-x * x / (2.0 * sigma * sigma));
}

double ks_distance(std::vector<double> samples, const std::function<double(double)>& model_cdf) {
    if (samples.empty()) throw std::invalid_argument("ks_distance: no samples");
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double d = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double f = model_cdf(samples[i]);
        d = std::max(d, std::abs(f - static_cast<double>(i) / n));
        d = std::max(d, std::abs(static_cast<double>(i + 1) / n - f));
    }
    return d;
}

ScalingPoint ScalingPoint::make(double total_mass, double k_hat, double f_hat, double mean_tr,
                                double cyclicity, std::uint64_t n_cycles) {
    ScalingPoint p;
    p.total_mass = total_mass;
    p.k_hat = k_hat;
    p.f_hat = f_hat;
    p.r = f_hat * total_mass / k_hat;
    p.mean_tr = mean_tr;
    p.g = f_hat * mean_tr;
    p.cyclicity = cyclicity;
    p.n_cycles = n_cycles;
    return p;
}

CollapseSummary collapse(std::span<const ScalingPoint> points, double slope_r_lo,
                         double slope_r_hi, double plateau_r_max) {
    std::vector<std::pair<double, double>> window;
    CollapseSummary out;
    double plateau_sum = 0.0;
    for (const auto& p : points) {
        if (p.r >= slope_r_lo && p.r <= slope_r_hi && p.g > 0.0)
            window.emplace_back(p.r, p.g);
        if (p.r < plateau_r_max) {
            plateau_sum += p.g;
            ++out.n_plateau_points;
        }
    }
    if (window.size() < 3)
        throw std::invalid_argument("collapse: fewer than 3 points in the slope window");
    if (out.n_plateau_points < 3)
        throw std::invalid_argument("collapse: fewer than 3 points in the plateau window");

    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (const auto& [r, g] : window) {
        const double x = std::log(r), y = std::log(g);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double n = static_cast<double>(window.size());
    out.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    out.intercept = (sy - out.slope * sx) / n;
    double ss = 0.0;
    for (const auto& [r, g] : window) {
        const double res = std::log(g) - (out.intercept + out.slope * std::log(r));
        ss += res * res;
    }
    out.residual_rms = std::sqrt(ss / n);
    out.n_slope_points = window.size();
    out.plateau = plateau_sum / static_cast<double>(out.n_plateau_points);
    return out;
}

const char* to_string(Regime regime) {
    switch (regime) {
        case Regime::ForcedCycles: return "forced-cycles";
        case Regime::UnforcedGelShatter: return "unforced-gel-shatter";
        case Regime::FragmentationDominance: return "fragmentation-dominance";
    }
    return "unforced-gel-shatter";
}

Regime classify_regime(double r, const RegimeThresholds& thresholds) {
    if (!(r > 0.0)) throw std::invalid_argument("classify_regime: r must be > 0");
    if (r < thresholds.forced_below) return Regime::ForcedCycles;
    if (r > thresholds.dominance_above) return Regime::FragmentationDominance;
    return Regime::UnforcedGelShatter;
}

EnvelopePoint largest_cluster_scale(double total_mass, double k_hat, double f_hat,
                                    std::span<const std::uint64_t> cycle_peak_sizes) {
    if (cycle_peak_sizes.empty())
        throw std::invalid_argument("largest_cluster_scale: no cycle peaks");
    EnvelopePoint p;
    p.total_mass = total_mass;
    p.k_hat = k_hat;
    p.f_hat = f_hat;
    p.r = f_hat * total_mass / k_hat;
    std::vector<std::uint64_t> sorted(cycle_peak_sizes.begin(), cycle_peak_sizes.end());
    std::sort(sorted.begin(), sorted.end());
    const std::size_t idx =
        static_cast<std::size_t>(0.9 * static_cast<double>(sorted.size() - 1));
    p.envelope = static_cast<double>(sorted[idx]);
    p.predicted = total_mass / std::sqrt(p.r);
    p.ratio = p.envelope / p.predicted;
    p.regime = classify_regime(p.r);
    p.in_scaling_regime = (p.regime == Regime::UnforcedGelShatter);
    return p;
}

double loglog_slope(std::span<const std::pair<double, double>> xy) {
    if (xy.size() < 2) throw std::invalid_argument("loglog_slope: need >= 2 points");
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (const auto& [x, y] : xy) {
        const double lx = std::log(x), ly = std::log(y);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    const double n = static_cast<double>(xy.size());
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace gelshatter::analysis
