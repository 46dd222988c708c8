#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>

#include "steinkit/bounds.hpp"
#include "steinkit/coupling.hpp"

namespace steinkit {

/// Monte Carlo estimates of r1'..r5' for a Palm coupling on a finite carrier.
///
/// The centered terms need E{Y_a 1[|Y_a| <= B]} and K^in(t); both come from
/// a separate pilot panel and are plugged into the main-phase averages.
struct PalmTermReport {
    BoundTerms terms;           ///< family = palm
    double bound = 0.0;         ///< combine_theorem2(terms)
    double r1_bias_scale = 0.0; ///< sd of the plug-in error in r1'
    double r4_bias = 0.0;       ///< expected upward bias of r4' (about r4'/n_pilot)
    double r5_bias = 0.0;       ///< same for r5'
    std::size_t n_pilot = 0;
    std::size_t n_main = 0;
};

/// Requires every panel to have the same number of atoms and the same B.
PalmTermReport estimate_theorem2_terms(std::span<const PalmPanel> pilot, std::span<const PalmPanel> main);

/// Default pilot size max(10^4, 10 sqrt(n_reps)).
std::uint64_t default_pilot_size(std::uint64_t n_reps);

/// Symmetric dependency set D over atom indices; atoms outside D must be
/// independent.
using DependencySet = std::function<bool(std::size_t, std::size_t)>;

inline bool diagonal_dependency(std::size_t a, std::size_t b) { return a == b; }

struct Corollary1Report {
    double s1 = 0.0, s2 = 0.0, s3 = 0.0;
    double se1 = 0.0, se2 = 0.0, se3 = 0.0;
    double bound = 0.0;       ///< combine_corollary1(s1, s2, s3)
    bool pairs_exact = true;  ///< false when D was subsampled
};

/// Sums over D are exact up to `exact_limit` atoms; beyond that `pair_samples`
/// uniformly drawn pairs (seeded by `seed`) stand in for the full square.
Corollary1Report estimate_corollary1_terms(std::span<const PalmPanel> panels,
                                           const DependencySet& d = diagonal_dependency,
                                           std::size_t exact_limit = 200,
                                           std::uint64_t pair_samples = 100000, std::uint64_t seed = 0);

}  // namespace steinkit
