#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "gelshatter/histogram.hpp"

namespace gelshatter::analysis {

struct FitError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct PowerLawFit {
    double alpha = 0.0;           // exponent estimate
    std::uint64_t k_min = 1;
    std::uint64_t k_max_fit = 0;  // fitting window upper edge
    double n_samples = 0.0;       // weighted sample count inside the window
    double loglik = 0.0;
};

/// Generalized harmonic sum H(alpha; a, b) = sum_{k=a}^{b} k^-alpha.
/// Wide windows switch to an Euler-Maclaurin tail after 2048 direct terms.
double generalized_harmonic(double alpha, std::uint64_t a, std::uint64_t b);

/// Maximum-likelihood fit of the discrete truncated power law
/// p(k) = k^-alpha / H(alpha; k_min, k_max_fit) on [k_min, k_max_fit].
/// Golden-section maximization of the log-likelihood on alpha in
/// (1.01, 6], tolerance 1e-6. Weights may be fractional (time averages).
/// Throws FitError when fewer than min_samples fall inside the window or
/// when all samples sit at a single size (unbounded likelihood).
PowerLawFit fit_truncated_powerlaw(std::span<const std::pair<std::uint64_t, double>> weighted,
                                   std::uint64_t k_min, std::uint64_t k_max_fit,
                                   double min_samples = 50.0);
PowerLawFit fit_truncated_powerlaw(const SizeHistogram& hist, std::uint64_t k_min = 1,
                                   std::uint64_t k_max_fit = 0,  // 0 = largest present
                                   double min_samples = 50.0);
PowerLawFit fit_truncated_powerlaw(const std::map<std::uint64_t, double>& density,
                                   std::uint64_t k_min = 1, std::uint64_t k_max_fit = 0,
                                   double min_samples = 50.0);

struct ExponentialFit {
    double rate = 0.0;  // lambda
    double mean = 0.0;  // 1 / lambda
};

/// MLE lambda = n / sum(t).
ExponentialFit fit_exponential(std::span<const double> samples);

struct RayleighFit {
    double sigma = 0.0;
    double mean = 0.0;  // sigma * sqrt(pi/2)
};

/// MLE sigma^2 = sum(t^2) / (2n).
RayleighFit fit_rayleigh(std::span<const double> samples);

double exponential_cdf(double rate, double x);
double rayleigh_cdf(double sigma, double x);

/// Sup-norm distance between the empirical CDF of the samples and a model
/// CDF (monotone on the support).
double ks_distance(std::vector<double> samples, const std::function<double(double)>& model_cdf);

/// One parameter point of the recurrence-time scaling summary.
struct ScalingPoint {
    double total_mass = 0.0;  // M
    double k_hat = 0.0;
    double f_hat = 0.0;
    double r = 0.0;        // f_hat * M / k_hat
    double mean_tr = 0.0;  // mean recurrence time, computational steps
    double g = 0.0;        // f_hat * mean_tr
    double cyclicity = 0.0;
    std::uint64_t n_cycles = 0;

    static ScalingPoint make(double total_mass, double k_hat, double f_hat, double mean_tr,
                             double cyclicity, std::uint64_t n_cycles);
};

struct CollapseSummary {
    double slope = 0.0;      // of log g against log r inside the slope window
    double intercept = 0.0;
    double residual_rms = 0.0;
    std::size_t n_slope_points = 0;
    double plateau = 0.0;    // mean g over the small-r window
    std::size_t n_plateau_points = 0;
};

/// Slope window defaults to r in [1, 100], plateau window to r < 0.05;
/// each summarized window needs at least 3 points.
CollapseSummary collapse(std::span<const ScalingPoint> points, double slope_r_lo = 1.0,
                         double slope_r_hi = 100.0, double plateau_r_max = 0.05);

enum class Regime { ForcedCycles, UnforcedGelShatter, FragmentationDominance };

const char* to_string(Regime regime);

struct RegimeThresholds {
    double forced_below = 0.1;
    double dominance_above = 1e3;
};

/// Step classification on r; boundary values belong to the middle regime.
Regime classify_regime(double r, const RegimeThresholds& thresholds = {});

/// Upper envelope of k_max for one parameter point, against the predicted
/// scale M * r^{-1/2}. The envelope is the 90th percentile of per-cycle peak
/// sizes.
struct EnvelopePoint {
    double total_mass = 0.0;
    double k_hat = 0.0;
    double f_hat = 0.0;
    double r = 0.0;
    double envelope = 0.0;
    double predicted = 0.0;  // M * r^{-1/2}
    double ratio = 0.0;      // envelope / predicted
    Regime regime = Regime::UnforcedGelShatter;
    bool in_scaling_regime = false;
};

EnvelopePoint largest_cluster_scale(double total_mass, double k_hat, double f_hat,
                                    std::span<const std::uint64_t> cycle_peak_sizes);

/// Least-squares slope of log(y) against log(x).
double loglog_slope(std::span<const std::pair<double, double>> xy);

}  // namespace gelshatter::analysis
