#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <vector>

namespace decoupler {

/// p(l) = A alpha^l + B fit with epl = (1 - alpha) / 2.
struct RbFit {
    double A = 0.0;
    double alpha = 1.0;
    double B = 0.0;
    double epl = 0.0;
    /// Root-mean-square residual.
    double residual = 0.0;
    /// Diagonal of the parameter covariance (A, alpha, B).
    std::array<double, 3> covariance{};
    /// alpha ended on a bound or is unidentifiable (no decay amplitude).
    bool alpha_at_bound = false;
    int iterations = 0;
};

struct FitOptions {
    int max_iterations = 200;
    double tolerance = 1e-12;
    double alpha_min = 1e-6;
};

/// Bounded Levenberg-Marquardt on (A, alpha, B) with A, B in [0, 1] and
/// alpha in [alpha_min, 1]. Needs at least three distinct lengths; throws
/// FitDiverged on non-finite results.
RbFit fit_rb_decay(const std::vector<double>& lengths, const std::vector<double>& survival,
                   const FitOptions& options = {});

/// Per-circuit survivals keyed by length.
using RbRawData = std::map<int, std::vector<double>>;

struct BootstrapResult {
    double epl_mean = 0.0;
    double epl_sigma = 0.0;
    std::vector<double> samples;
};

/// Resamples `resample_size` circuits per length with replacement (all of
/// them when 0), refits, and reports mean and standard deviation of the EPL.
BootstrapResult bootstrap_epl(const RbRawData& raw, int n_resamples, int resample_size, std::uint64_t seed);

/// Fit of the per-length means of `raw`.
RbFit fit_rb_means(const RbRawData& raw);

}  // namespace decoupler
