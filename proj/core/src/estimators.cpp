#include "steinkit/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "steinkit/normal.hpp"

namespace steinkit {

Estimate mean_with_se(std::span<const double> values) {
    const std::size_t n = values.size();
    if (n < 2) throw std::invalid_argument("mean_with_se needs at least 2 values");
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    const double var = ss / static_cast<double>(n - 1);
    return {mean, std::sqrt(var / static_cast<double>(n))};
}

Estimate variance_with_se(std::span<const double> values) {
    const std::size_t n = values.size();
    if (n < 2) throw std::invalid_argument("variance_with_se needs at least 2 values");
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(n);
    double m2 = 0.0;
    double m4 = 0.0;
    for (double v : values) {
        const double d2 = (v - mean) * (v - mean);
        m2 += d2;
        m4 += d2 * d2;
    }
    const double nn = static_cast<double>(n);
    const double var = m2 / (nn - 1.0);
    const double mu2 = m2 / nn;
    const double mu4 = m4 / nn;
    return {var, std::sqrt(std::max(0.0, mu4 - mu2 * mu2) / nn)};
}

double dkw_epsilon(std::size_t n, double delta) {
    if (n == 0) throw std::invalid_argument("dkw_epsilon needs n > 0");
    if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0, 1)");
    return std::sqrt(std::log(2.0 / delta) / (2.0 * static_cast<double>(n)));
}

EcdfReport empirical_kolmogorov(std::span<const double> w) {
    if (w.empty()) throw std::invalid_argument("empirical_kolmogorov needs a nonempty sample");
    std::vector<double> sorted(w.begin(), w.end());
    std::sort(sorted.begin(), sorted.end());
    const std::size_t n = sorted.size();
    const double nn = static_cast<double>(n);
    double d = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double phi = std_normal_cdf(sorted[i]);
        const double upper = static_cast<double>(i + 1) / nn;
        const double lower = static_cast<double>(i) / nn;
        d = std::max({d, std::abs(upper - phi), std::abs(phi - lower)});
    }
    return {n, std::min(d, 1.0), dkw_epsilon(n, 0.01)};
}

double two_sample_kolmogorov(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty()) throw std::invalid_argument("two_sample_kolmogorov needs nonempty samples");
    std::vector<double> sa(a.begin(), a.end());
    std::vector<double> sb(b.begin(), b.end());
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    const double na = static_cast<double>(sa.size());
    const double nb = static_cast<double>(sb.size());
    std::size_t i = 0;
    std::size_t j = 0;
    double d = 0.0;
    while (i < sa.size() || j < sb.size()) {
        double x;
        if (j == sb.size() || (i < sa.size() && sa[i] <= sb[j])) {
            x = sa[i];
        } else {
            x = sb[j];
        }
        while (i < sa.size() && sa[i] == x) ++i;
        while (j < sb.size() && sb[j] == x) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    return d;
}

void standardize(std::vector<double>& x) {
    const Estimate m = mean_with_se(x);
    const double sd = m.se * std::sqrt(static_cast<double>(x.size()));
    if (!(sd > 0.0)) throw std::domain_error("cannot standardize a constant sample");
    for (double& v : x) v = (v - m.mean) / sd;
}

RateFit loglog_rate_fit(std::span<const RatePoint> points) {
    if (points.size() < 3) throw std::invalid_argument("rate fit needs at least 3 points");
    RateFit fit;
    fit.points.assign(points.begin(), points.end());
    const double n = static_cast<double>(points.size());
    double sx = 0.0;
    double sy = 0.0;
    for (const auto& p : points) {
        if (!(p.scale > 0.0) || !(p.value > 0.0)) {
            throw std::invalid_argument("rate fit needs strictly positive scales and values");
        }
        sx += std::log(p.scale);
        sy += std::log(p.value);
    }
    const double mx = sx / n;
    const double my = sy / n;
    double sxx = 0.0;
    double sxy = 0.0;
    double syy = 0.0;
    for (const auto& p : points) {
        const double dx = std::log(p.scale) - mx;
        const double dy = std::log(p.value) - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (!(sxx > 0.0)) throw std::invalid_argument("rate fit needs at least two distinct scales");
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    fit.r2 = syy > 0.0 ? std::clamp(sxy * sxy / (sxx * syy), 0.0, 1.0) : 1.0;
    return fit;
}

Correlation correlation_with_se(std::span<const double> x, std::span<const double> y) {
    const std::size_t n = x.size();
    if (n < 3 || y.size() != n) throw std::invalid_argument("correlation needs paired samples of size >= 3");
    const Estimate mx = mean_with_se(x);
    const Estimate my = mean_with_se(y);
    const double nn = static_cast<double>(n);
    const double sx = mx.se * std::sqrt(nn);
    const double sy = my.se * std::sqrt(nn);
    if (!(sx > 0.0) || !(sy > 0.0)) throw std::domain_error("correlation of a constant sample");
    double r = 0.0;
    double m22 = 0.0;
    double m40 = 0.0;
    double m04 = 0.0;
    double m31 = 0.0;
    double m13 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double a = (x[i] - mx.mean) / sx;
        const double b = (y[i] - my.mean) / sy;
        r += a * b;
        m22 += a * a * b * b;
        m40 += a * a * a * a;
        m04 += b * b * b * b;
        m31 += a * a * a * b;
        m13 += a * b * b * b;
    }
    r /= nn - 1.0;
    m22 /= nn;
    m40 /= nn;
    m04 /= nn;
    m31 /= nn;
    m13 /= nn;
    const double var = m22 + 0.25 * r * r * (m40 + m04 + 2.0 * m22) - r * (m31 + m13);
    return {r, std::sqrt(std::max(0.0, var) / nn)};
}

}  // namespace steinkit
