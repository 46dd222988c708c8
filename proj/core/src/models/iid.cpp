#include "steinkit/models/iid.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <random>
#include <stdexcept>

namespace steinkit::models {
namespace {

// F(x) = -e^{-x} Q(x - 1) is an antiderivative of (x - 1)^4 e^{-x}.
double exp_fourth_antiderivative(double x) {
    const double u = x - 1.0;
    const double q = (((u + 4.0) * u + 12.0) * u + 24.0) * u + 24.0;
    return -std::exp(-x) * q;
}

}  // namespace

SummandSpec SummandSpec::parse(std::string_view id, double p) {
    SummandSpec s;
    s.p = p;
    if (id == "rademacher") {
        s.law = SummandLaw::rademacher;
    } else if (id == "bernoulli") {
        s.law = SummandLaw::bernoulli;
        if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("bernoulli p must lie in (0, 1)");
    } else if (id == "uniform") {
        s.law = SummandLaw::uniform;
    } else if (id == "exponential") {
        s.law = SummandLaw::exponential;
    } else {
        throw std::invalid_argument("unknown distribution id '" + std::string(id) + "'");
    }
    return s;
}

std::string SummandSpec::name() const {
    switch (law) {
    case SummandLaw::rademacher: return "rademacher";
    case SummandLaw::bernoulli: return "bernoulli";
    case SummandLaw::uniform: return "uniform";
    case SummandLaw::exponential: return "exponential";
    }
    return "?";
}

double summand_variance(const SummandSpec& s) {
    switch (s.law) {
    case SummandLaw::rademacher: return 1.0;
    case SummandLaw::bernoulli: return s.p * (1.0 - s.p);
    case SummandLaw::uniform: return 1.0 / 3.0;
    case SummandLaw::exponential: return 1.0;
    }
    return 0.0;
}

double summand_third_abs(const SummandSpec& s) {
    switch (s.law) {
    case SummandLaw::rademacher: return 1.0;
    case SummandLaw::bernoulli: {
        const double q = 1.0 - s.p;
        return s.p * q * q * q + q * s.p * s.p * s.p;
    }
    case SummandLaw::uniform: return 0.25;
    case SummandLaw::exponential: return 12.0 / std::exp(1.0) - 2.0;
    }
    return 0.0;
}

double summand_fourth_truncated(const SummandSpec& s, double cut) {
    if (cut < 0.0) return 0.0;
    switch (s.law) {
    case SummandLaw::rademacher: return cut >= 1.0 ? 1.0 : 0.0;
    case SummandLaw::bernoulli: {
        const double q = 1.0 - s.p;
        double acc = 0.0;
        if (q <= cut) acc += s.p * q * q * q * q;
        if (s.p <= cut) acc += q * s.p * s.p * s.p * s.p;
        return acc;
    }
    case SummandLaw::uniform: {
        const double c = std::min(cut, 1.0);
        return std::pow(c, 5) / 5.0;
    }
    case SummandLaw::exponential: {
        const double lo = std::max(0.0, 1.0 - cut);
        const double hi = 1.0 + cut;
        return exp_fourth_antiderivative(hi) - exp_fourth_antiderivative(lo);
    }
    }
    return 0.0;
}

IidSumModel::IidSumModel(SummandSpec spec, std::size_t n) : spec_(spec), n_(n) {
    if (n == 0) throw std::invalid_argument("iid sum needs n >= 1");
    const double nn = static_cast<double>(n);
    moments_.b = std::sqrt(nn * summand_variance(spec_));
    moments_.third_abs_sum = nn * summand_third_abs(spec_);
    moments_.fourth_trunc_sum = nn * summand_fourth_truncated(spec_, moments_.b);
}

IidDraw IidSumModel::draw(Rng& rng) const {
    double sum = 0.0;
    switch (spec_.law) {
    case SummandLaw::rademacher: {
        // One random bit per summand; S = 2 * ones - n.
        std::size_t ones = 0;
        std::size_t left = n_;
        while (left >= 64) {
            ones += static_cast<std::size_t>(std::popcount(rng()));
            left -= 64;
        }
        if (left > 0) ones += static_cast<std::size_t>(std::popcount(rng() >> (64 - left)));
        sum = 2.0 * static_cast<double>(ones) - static_cast<double>(n_);
        break;
    }
    case SummandLaw::bernoulli: {
        std::size_t ones = 0;
        for (std::size_t i = 0; i < n_; ++i) ones += rng.uniform() < spec_.p ? 1 : 0;
        sum = static_cast<double>(ones) - static_cast<double>(n_) * spec_.p;
        break;
    }
    case SummandLaw::uniform:
        for (std::size_t i = 0; i < n_; ++i) sum += 2.0 * rng.uniform() - 1.0;
        break;
    case SummandLaw::exponential:
        for (std::size_t i = 0; i < n_; ++i) sum += -std::log(rng.uniform_pos()) - 1.0;
        break;
    }
    return {sum / moments_.b};
}

}  // namespace steinkit::models
