#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "steinkit/bounds.hpp"
#include "steinkit/coupling.hpp"
#include "steinkit/rng.hpp"

namespace steinkit::models {

/// Law of an atom mass Xi({a}) on {0, 1, ..., K}, stored as a pmf.
class AtomLaw {
public:
    /// pmf[k] = P[X = k]. Renormalized; must be nonnegative with positive mean.
    static AtomLaw from_pmf(std::vector<double> pmf);
    static AtomLaw point_mass(unsigned c);
    /// Uniform on the given (distinct, nonnegative) values.
    static AtomLaw uniform_on(std::span<const unsigned> values);
    /// Poisson(mu) conditioned on X <= cut.
    static AtomLaw truncated_poisson(double mu, unsigned cut);

    double mean() const noexcept { return mean_; }
    double moment(int order) const;
    double variance() const;

    /// Inverse-CDF draw of X and of its size-biased version q(k) ~ k p(k)
    /// from the same uniform.
    struct Pair {
        unsigned x = 0;
        unsigned biased = 0;
    };
    Pair draw_pair(double u) const;

    const std::vector<double>& pmf() const noexcept { return pmf_; }
    std::string describe() const;

private:
    explicit AtomLaw(std::vector<double> pmf);

    std::vector<double> pmf_;
    std::vector<double> cdf_;
    std::vector<double> biased_cdf_;
    double mean_ = 0.0;
};

/// Completely random measure on a finite carrier with independent atoms.
class CrmModel {
public:
    explicit CrmModel(std::vector<AtomLaw> atoms);

    /// One Palm panel: |Xi|, and per atom Lambda({a}) and Y_a from the
    /// comonotone coupling; other atoms are left unchanged.
    PalmPanel draw(Rng& rng) const;

    /// |Xi| only, standardized: (|Xi| - Lambda(Gamma)) / B.
    double draw_w(Rng& rng) const;

    const std::vector<AtomLaw>& atoms() const noexcept { return atoms_; }
    double lambda_total() const noexcept { return lambda_; }
    double b() const noexcept { return b_; }

    /// Exact inputs for bound_crm.
    CrmMoments bound_moments() const;

private:
    std::vector<AtomLaw> atoms_;
    double lambda_ = 0.0;
    double b_ = 0.0;
};

}  // namespace steinkit::models
