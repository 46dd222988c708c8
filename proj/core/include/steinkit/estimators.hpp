#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace steinkit {

struct Estimate {
    double mean = 0.0;
    double se = 0.0;
};

/// Sample mean and sqrt(sample variance / n). Requires n >= 2.
Estimate mean_with_se(std::span<const double> values);

/// Sample variance (n - 1 denominator) with the standard error of that
/// estimate from the fourth central moment. Requires n >= 2.
Estimate variance_with_se(std::span<const double> values);

/// sqrt(ln(2/delta) / (2n)): with probability >= 1 - delta the ECDF of n
/// i.i.d. draws stays within this distance of the true CDF.
double dkw_epsilon(std::size_t n, double delta);

struct EcdfReport {
    std::size_t n = 0;
    double d_k = 0.0;         ///< sup_x |F_n(x) - Phi(x)|
    double dkw_eps_99 = 0.0;  ///< dkw_epsilon(n, 0.01)
};

/// Kolmogorov distance between the ECDF of `w` and N(0, 1), evaluated at
/// both one-sided limits of every jump.
EcdfReport empirical_kolmogorov(std::span<const double> w);

/// Two-sample Kolmogorov distance sup_x |F_a(x) - F_b(x)|. Ties are merged
/// before comparing, so discrete samples are handled exactly.
double two_sample_kolmogorov(std::span<const double> a, std::span<const double> b);

/// Standardizes `x` in place by its sample mean and sample standard deviation.
void standardize(std::vector<double>& x);

struct RatePoint {
    double scale = 0.0;
    double value = 0.0;
};

struct RateFit {
    std::vector<RatePoint> points;
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
};

/// Ordinary least squares of ln(value) on ln(scale). Needs >= 3 points, all
/// strictly positive.
RateFit loglog_rate_fit(std::span<const RatePoint> points);

struct Correlation {
    double r = 0.0;   ///< Pearson correlation
    double se = 0.0;  ///< delta-method standard error of r
};

/// Pearson correlation with a moment-based standard error that stays valid
/// for non-Gaussian pairs.
Correlation correlation_with_se(std::span<const double> x, std::span<const double> y);

}  // namespace steinkit
