#pragma once

// Closed-form Kolmogorov-distance bounds. Every constant is fixed; callers
// supply pre-computed moments (analytic or Monte Carlo) so the analytic and
// simulation pipelines share one combinator.

#include <array>
#include <cstddef>

namespace steinkit {

/// Which family of error terms a BoundTerms holds: the generic kernel terms
/// r1..r5, or the Palm-measure terms r1'..r5'.
enum class TermFamily { kernel, palm };

struct BoundTerms {
    std::array<double, 5> r{};   ///< r1..r5, dimensionless, >= 0
    std::array<double, 5> se{};  ///< Monte Carlo standard errors; 0 when analytic
    TermFamily family = TermFamily::kernel;

    /// Throws std::invalid_argument unless every term and SE is finite and >= 0.
    void validate() const;
};

/// 2 r1 + 11 r2 + 5 r3 + 10 r4 + 7 r5.
double combine_theorem1(const BoundTerms& t);

/// 2 r1' + 5.5 r2' + 5 r3' + 10 r4' + 7 r5'.
double combine_theorem2(const BoundTerms& t);

/// 7 s1 + 5.5 s2 + 10 s3, for Palm couplings with a symmetric dependency set.
double combine_corollary1(double s1, double s2, double s3);

/// 9 s1 + 11 s2 + 5 s3 + 10 s4, for Stein couplings.
double combine_theorem5(double s1, double s2, double s3, double s4);

/// Independent summands xi_1..xi_n with B^2 = sum Var(xi_i):
/// 7 sqrt(sum E{xi^4 1[|xi| <= B]}) / B^2 + 15.5 sum E|xi|^3 / B^3.
double bound_iid(double fourth_trunc_sum, double third_abs_sum, double b);

enum class CrmBound {
    full,     ///< three-term form with the 25.5 second-moment term
    compact,  ///< second and third terms merged into 31/B^3 E sum Xi({a})^3
    diffuse,  ///< only 5.5/B^3 E sum Xi({a})^3 survives
};

/// Moment inputs of the completely-random-measure bound.
struct CrmMoments {
    double third_weighted = 0.0;   ///< sum_a E{Xi({a})^3} Lambda({a})
    double third_sum = 0.0;        ///< E sum_a Xi({a})^3
    double second_weighted = 0.0;  ///< sum_a E{Xi({a})^2} Lambda({a})
};

double bound_crm(const CrmMoments& m, double b, CrmBound variant);

/// Total excursion time of an l-dependent process with mean mu and
/// standard deviation B:
/// (14 sqrt(2) + 8) l^{3/2} mu^{1/2} / B^2 + 102 l^2 mu / B^3.
double bound_excursion(double l, double mu, double b);

/// Dependency-neighbourhood parameters of a locally dependent sum.
struct LocalDepParams {
    std::size_t n = 1;
    double theta = 0.0;  ///< moment scale: E|X_i|^rho v E|Y_i|^rho <= theta^rho
    double rho = 3.0;    ///< in (2, 4]
    std::size_t lam = 1; ///< sup_i |{j : A_j meets B_i}|, at most n

    void validate() const;
};

/// (16 + 67 lam) n theta^{min(3, rho)} + 28 theta^{rho/2} sqrt(lam n).
double bound_local_dependence(const LocalDepParams& p);

/// Moment roots feeding the s1..s4 bounds of a Stein coupling. The event A
/// must contain {G' != G*} and {Delta' != Delta*}.
struct CouplingMomentLedger {
    double g0 = 0.0;  ///< (E|G|^3)^{1/3}
    double g1 = 0.0;  ///< (E{G^4 1_A})^{1/4}
    double g2 = 0.0;  ///< (E{G'^4 1_A})^{1/4}
    double g3 = 0.0;  ///< (E{G*^4 1_A})^{1/4}
    double d0 = 0.0;  ///< (E|Delta|^3)^{1/3}
    double d1 = 0.0;
    double d2 = 0.0;
    double d3 = 0.0;
    double p_a = 0.0;  ///< P[A]

    void validate() const;
};

struct CouplingTerms {
    double s1 = 0.0;
    double s2 = 0.0;
    double s3 = 0.0;
    double s4 = 0.0;
};

/// Upper bounds on s1..s4 in terms of the moment ledger.
CouplingTerms bound_from_moment_ledger(const CouplingMomentLedger& m);

/// Both sides of the three clip inequalities used to bound s1 and s4, with
/// clip(x) = (x ^ 1) v (-1). `slack` is rhs - lhs; the inequalities hold
/// exactly when every slack is >= 0.
struct ClipInequalities {
    std::array<double, 3> lhs{};
    std::array<double, 3> rhs{};
    std::array<double, 3> slack{};
    std::array<bool, 3> holds{};
};

ClipInequalities lemma5_check(double a_p, double a_s, double b, double b_p, double b_s,
                              double tolerance = 1e-12);

}  // namespace steinkit
