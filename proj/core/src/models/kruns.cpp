#include "steinkit/models/kruns.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

#include "steinkit/error.hpp"

namespace steinkit::models {
namespace {

void check_params(std::size_t n, std::size_t k, double p) {
    if (k == 0) throw std::invalid_argument("k must be >= 1");
    if (n < k) throw std::invalid_argument("k-runs need n >= k");
    if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("p must lie in (0, 1]");
}

}  // namespace

KRunsMoments kruns_moments(std::size_t n, std::size_t k, double p) {
    check_params(n, k, p);
    const double runs = static_cast<double>(n - k + 1);
    const double pk = std::pow(p, static_cast<double>(k));
    const double p2k = pk * pk;
    double var = runs * (pk - p2k);
    for (std::size_t d = 1; d < k && d < n - k + 1; ++d) {
        var += 2.0 * (runs - static_cast<double>(d)) * (std::pow(p, static_cast<double>(k + d)) - p2k);
    }
    return {runs * pk, var};
}

KRunsMoments kruns_moments_enumerated(std::size_t n, std::size_t k, double p) {
    check_params(n, k, p);
    if (n > 24) throw std::invalid_argument("enumeration limited to n <= 24");
    double m1 = 0.0;
    double m2 = 0.0;
    std::vector<std::uint64_t> bits(1);
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
        const int ones = std::popcount(mask);
        const double prob = std::pow(p, ones) * std::pow(1.0 - p, static_cast<double>(n) - ones);
        bits[0] = mask;
        const double s = static_cast<double>(count_kruns(bits, n, k));
        m1 += prob * s;
        m2 += prob * s * s;
    }
    return {m1, m2 - m1 * m1};
}

void draw_indicator_bits(Rng& rng, std::size_t n, double p, std::vector<std::uint64_t>& bits) {
    const std::size_t words = (n + 63) / 64;
    bits.assign(words, 0);
    if (p == 0.5) {
        for (auto& w : bits) w = rng();
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            if (rng.uniform() < p) bits[i / 64] |= std::uint64_t{1} << (i % 64);
        }
    }
    if (n % 64 != 0) bits.back() &= (std::uint64_t{1} << (n % 64)) - 1;
}

std::size_t count_kruns(const std::vector<std::uint64_t>& bits, std::size_t n, std::size_t k) {
    if (n < k) return 0;
    // run[i] = bits[i] & bits[i+1] & ... & bits[i+k-1], built by shifting the
    // whole sequence right one position at a time.
    std::vector<std::uint64_t> run = bits;
    std::vector<std::uint64_t> shifted = bits;
    for (std::size_t s = 1; s < k; ++s) {
        for (std::size_t w = 0; w < shifted.size(); ++w) {
            const std::uint64_t carry = (w + 1 < shifted.size()) ? (shifted[w + 1] << 63) : 0;
            shifted[w] = (shifted[w] >> 1) | carry;
        }
        for (std::size_t w = 0; w < run.size(); ++w) run[w] &= shifted[w];
    }
    const std::size_t starts = n - k + 1;
    std::size_t count = 0;
    for (std::size_t w = 0; w < run.size(); ++w) {
        std::uint64_t word = run[w];
        const std::size_t base = w * 64;
        if (base >= starts) break;
        if (starts - base < 64) word &= (std::uint64_t{1} << (starts - base)) - 1;
        count += static_cast<std::size_t>(std::popcount(word));
    }
    return count;
}

KRunsModel::KRunsModel(std::size_t n, std::size_t k, double p)
    : n_(n), k_(k), p_(p), moments_(kruns_moments(n, k, p)), b_(std::sqrt(moments_.variance)) {
    if (!(moments_.variance > 0.0)) {
        throw DegenerateModelError("k-runs count is deterministic (variance 0)");
    }
}

KRunsDraw KRunsModel::draw(Rng& rng) const {
    thread_local std::vector<std::uint64_t> bits;
    draw_indicator_bits(rng, n_, p_, bits);
    const double s = static_cast<double>(count_kruns(bits, n_, k_));
    return {s, (s - moments_.mean) / b_};
}

}  // namespace steinkit::models
