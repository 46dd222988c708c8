#pragma once

namespace steinkit {

/// Standard normal distribution function.
///
/// Evaluated as erfc(-x/sqrt(2))/2, which keeps full relative accuracy in
/// the lower tail and makes Phi(-x) + Phi(x) = 1 hold to rounding.
double std_normal_cdf(double x) noexcept;

/// Standard normal density.
double std_normal_pdf(double x) noexcept;

}  // namespace steinkit
