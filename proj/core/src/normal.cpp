#include "steinkit/normal.hpp"

#include <cmath>
#include <numbers>

namespace steinkit {

double std_normal_cdf(double x) noexcept {
    return 0.5 * std::erfc(-x * (0.5 * std::numbers::sqrt2));
}

double std_normal_pdf(double x) noexcept {
    return std::exp(-0.5 * x * x) * (0.5 * std::numbers::inv_sqrtpi * std::numbers::sqrt2);
}

}  // namespace steinkit
