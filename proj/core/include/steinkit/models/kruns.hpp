#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "steinkit/rng.hpp"

namespace steinkit::models {

struct KRunsMoments {
    double mean = 0.0;      ///< mu_n = (n - k + 1) p^k
    double variance = 0.0;  ///< Var S_n
};

/// Closed form for i.i.d. Bernoulli(p) indicators: with N = n - k + 1,
/// Var S_n = N (p^k - p^2k) + 2 sum_{d=1}^{k-1} (N - d)(p^{k+d} - p^2k).
KRunsMoments kruns_moments(std::size_t n, std::size_t k, double p);

/// Brute-force moments over all 2^n outcomes (n <= 24).
KRunsMoments kruns_moments_enumerated(std::size_t n, std::size_t k, double p);

/// Fills `bits` with n Bernoulli(p) indicators, bit i of the sequence at
/// word i / 64, position i % 64. Shared by the k-runs and excursion models
/// so one stream yields the same sequence in both.
void draw_indicator_bits(Rng& rng, std::size_t n, double p, std::vector<std::uint64_t>& bits);

/// Number of indices i in [0, n - k] with bits i..i+k-1 all set.
std::size_t count_kruns(const std::vector<std::uint64_t>& bits, std::size_t n, std::size_t k);

struct KRunsDraw {
    double s = 0.0;  ///< S_n
    double w = 0.0;  ///< (S_n - mu_n) / B_n
};

/// Number of k-runs S_n among n i.i.d. Bernoulli(p) trials.
class KRunsModel {
public:
    KRunsModel(std::size_t n, std::size_t k, double p);

    KRunsDraw draw(Rng& rng) const;

    const KRunsMoments& moments() const noexcept { return moments_; }
    double b() const noexcept { return b_; }
    std::size_t n() const noexcept { return n_; }
    std::size_t k() const noexcept { return k_; }
    double p() const noexcept { return p_; }

private:
    std::size_t n_;
    std::size_t k_;
    double p_;
    KRunsMoments moments_;
    double b_;
};

}  // namespace steinkit::models
