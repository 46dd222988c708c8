#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>

#include "steinkit/rng.hpp"

namespace steinkit::models {

enum class ExcursionSet {
    above,   ///< {(t, x) : x > level} for the Gaussian moving-window process
    always,  ///< whole horizon
    never,   ///< empty set
    kruns,   ///< [1, n - k + 2) x {1} for the k-runs embedding X_t = X_floor(t)
};

ExcursionSet parse_excursion_set(std::string_view id);

/// An l-dependent piecewise-constant process on [0, T] and an excursion set.
///
/// For `above`, `always` and `never` the process is X_t = X_floor(t) with
/// X_j = (e_j + ... + e_{j+l-1}) / sqrt(l) over i.i.d. N(0, 1) innovations,
/// which is l-dependent for integer l. For `kruns` the process is the
/// product of k consecutive Bernoulli(p) indicators, l = k and T = n - k + 2.
struct ExcursionConfig {
    double l = 1.0;
    double horizon = 1.0;
    ExcursionSet set = ExcursionSet::above;
    double level = 0.0;
    std::size_t k = 1;
    double p = 0.5;

    static ExcursionConfig kruns_embedding(std::size_t n, std::size_t k, double p);

    /// Number of trials n of the embedded k-runs sequence.
    std::size_t kruns_trials() const;

    void validate() const;
};

struct ExcursionDraw {
    double total = 0.0;  ///< |Xi| = time spent in the excursion set
    double w = 0.0;      ///< (|Xi| - mu) / B, or 0 when B = 0
};

struct ExcursionMoments {
    double mu = 0.0;
    double b = 0.0;
    bool exact = false;  ///< false when B came from a pilot run
};

class ExcursionModel {
public:
    /// Uses exact mu and B where a closed form exists; otherwise estimates B
    /// from `pilot_reps` replicates seeded from `pilot_seed`.
    explicit ExcursionModel(ExcursionConfig cfg, std::uint64_t pilot_reps = 100000,
                            std::uint64_t pilot_seed = 0);

    ExcursionDraw draw(Rng& rng) const;

    /// |Xi| only.
    double excursion_time(Rng& rng) const;

    const ExcursionConfig& config() const noexcept { return cfg_; }
    const ExcursionMoments& moments() const noexcept { return moments_; }

private:
    ExcursionConfig cfg_;
    ExcursionMoments moments_;
};

}  // namespace steinkit::models
