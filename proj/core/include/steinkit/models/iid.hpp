#pragma once

#include <cstddef>
#include <string>
#include <string_view>

#include "steinkit/rng.hpp"

namespace steinkit::models {

/// Centered summand laws.
enum class SummandLaw {
    rademacher,   ///< +-1 with probability 1/2
    bernoulli,    ///< I - p, I ~ Bernoulli(p)
    uniform,      ///< U(-1, 1)
    exponential,  ///< E - 1, E ~ Exp(1)
};

struct SummandSpec {
    SummandLaw law = SummandLaw::rademacher;
    double p = 0.5;  ///< bernoulli only

    /// Parses "rademacher", "bernoulli", "uniform", "exponential".
    static SummandSpec parse(std::string_view id, double p = 0.5);
    std::string name() const;
};

/// Exact moments of the centered sum S = xi_1 + ... + xi_n.
struct IidMoments {
    double b = 0.0;                 ///< sqrt(sum Var xi_i)
    double fourth_trunc_sum = 0.0;  ///< sum E{xi^4 1[|xi| <= B]}
    double third_abs_sum = 0.0;     ///< sum E|xi|^3
};

struct IidDraw {
    double w = 0.0;  ///< S / B
};

/// W = (xi_1 + ... + xi_n) / B for i.i.d. centered summands.
class IidSumModel {
public:
    IidSumModel(SummandSpec spec, std::size_t n);

    IidDraw draw(Rng& rng) const;
    const IidMoments& moments() const noexcept { return moments_; }
    std::size_t n() const noexcept { return n_; }
    const SummandSpec& spec() const noexcept { return spec_; }

private:
    SummandSpec spec_;
    std::size_t n_;
    IidMoments moments_;
};

/// Per-summand variance, E|xi|^3 and E{xi^4 1[|xi| <= cut]}.
double summand_variance(const SummandSpec& s);
double summand_third_abs(const SummandSpec& s);
double summand_fourth_truncated(const SummandSpec& s, double cut);

}  // namespace steinkit::models
