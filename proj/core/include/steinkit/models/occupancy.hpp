#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "steinkit/coupling.hpp"
#include "steinkit/estimators.hpp"
#include "steinkit/rng.hpp"

namespace steinkit::models {

enum class FunctionalKind {
    empty,        ///< 1[x = 0]
    trunc_exp,    ///< e^{min(x, 30)} - c
    capped_poly,  ///< min(x^degree, cap)
    linear,       ///< x; gives V = m, kept to exercise the degeneracy check
};

/// Per-urn functional phi_i of the ball count.
struct Functional {
    FunctionalKind kind = FunctionalKind::empty;
    double c = 0.0;       ///< shift for trunc_exp
    double degree = 2.0;  ///< capped_poly exponent
    double cap = 16.0;    ///< capped_poly cap

    static Functional parse(std::string_view id);
    std::string name() const;
    double operator()(unsigned x) const;
};

struct OccupancyConfig {
    std::size_t m = 0;               ///< balls
    std::size_t n = 0;               ///< urns
    std::vector<double> p;           ///< empty means p_i = 1/n
    std::vector<Functional> phi;     ///< one shared functional or one per urn
    double k2 = 4.0;                 ///< sup p_i <= k2 / m is checked, and warned about
    std::uint64_t pilot_reps = 100000;
    std::uint64_t pilot_seed = 0;

    bool uniform() const noexcept { return p.empty(); }
    void validate() const;
};

struct OccupancyDraw {
    SteinCouplingDraw coupling;
    double v = 0.0;           ///< V = sum phi_i(xi_i)
    int branch = 0;           ///< 1, 2, 3 for cases chi* = chi, chi* < chi, chi* > chi
    bool conserved = false;   ///< sum xi = sum xi* = sum eta-side = m
    bool m_disjoint = false;  ///< N*, N and {I} pairwise disjoint
    std::uint32_t m_size = 0; ///< |M|
};

inline const SteinCouplingDraw& as_coupling(const OccupancyDraw& d) { return d.coupling; }

/// Multinomial occupancy statistic W = (V - sum mu_i) / sigma with the
/// redistribution Stein coupling and its conditional and independent copies.
class OccupancyModel {
public:
    /// mu_i is exact. sigma is exact for uniform p with a shared functional
    /// and pilot-estimated otherwise. Throws DegenerateModelError if Var V = 0.
    explicit OccupancyModel(OccupancyConfig cfg);

    OccupancyDraw draw(Rng& rng) const;

    /// V only.
    double draw_v(Rng& rng) const;
    /// W only.
    double draw_w(Rng& rng) const { return (draw_v(rng) - mu_total_) / sigma_; }

    const OccupancyConfig& config() const noexcept { return cfg_; }
    double sigma() const noexcept { return sigma_; }
    double sigma_se() const noexcept { return sigma_se_; }
    bool sigma_exact() const noexcept { return sigma_exact_; }
    double mu_total() const noexcept { return mu_total_; }
    double mu(std::size_t urn) const { return mu_[urn]; }
    const std::vector<std::string>& warnings() const noexcept { return warnings_; }

private:
    struct Scratch;

    double prob(std::size_t i) const { return cfg_.uniform() ? uniform_p_ : cfg_.p[i]; }
    double phi(std::size_t i, unsigned x) const;
    std::size_t draw_urn(Rng& rng) const;
    void draw_counts(Rng& rng, std::vector<unsigned>& xi) const;
    std::size_t draw_other(Rng& rng, std::size_t excluded) const;
    double redistribution_delta(const std::vector<unsigned>& counts, std::size_t urn,
                                const std::vector<std::uint32_t>& targets, Scratch& s) const;

    OccupancyConfig cfg_;
    double uniform_p_ = 0.0;
    std::vector<std::uint32_t> phi_index_;        ///< urn -> distinct functional
    std::vector<std::vector<double>> phi_table_;  ///< functional -> phi(0..m)
    std::vector<double> mu_;
    double mu_total_ = 0.0;
    double sigma_ = 0.0;
    double sigma_se_ = 0.0;
    bool sigma_exact_ = false;
    // Walker alias table for non-uniform p.
    std::vector<double> alias_prob_;
    std::vector<std::uint32_t> alias_;
    std::vector<std::string> warnings_;
};

/// Pilot estimate of sigma = sqrt(Var V) from `n_pilot` draws of V, with a
/// delta-method standard error.
Estimate occupancy_sigma_pilot(const OccupancyModel& model, std::uint64_t n_pilot, std::uint64_t seed);

/// Exact Var V for p_i = 1/n and a shared functional, from the binomial
/// marginal and the trinomial pair law.
double occupancy_exact_variance(std::size_t m, std::size_t n, const Functional& phi);

}  // namespace steinkit::models
