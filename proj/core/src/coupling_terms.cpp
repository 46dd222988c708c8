#include "steinkit/coupling_terms.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "steinkit/estimators.hpp"

namespace steinkit {

CouplingTermReport estimate_theorem5_terms(std::span<const SteinCouplingDraw> draws) {
    const std::size_t n = draws.size();
    if (n < 2) throw std::invalid_argument("need >= 2 coupling draws");
    std::vector<double> q1(n), q2(n), q3(n), q4(n);
    double g0 = 0.0, g1 = 0.0, g2 = 0.0, g3 = 0.0;
    double d0 = 0.0, d1 = 0.0, d2 = 0.0, d3 = 0.0;
    double on_a = 0.0;
    CouplingTermReport rep;
    for (std::size_t i = 0; i < n; ++i) {
        const auto& c = draws[i];
        const double ag = std::abs(c.g);
        const double ad = std::abs(c.delta);
        const double ad1 = std::min(ad, 1.0);
        const double gg = std::abs(c.g * c.g_prime);
        const double gdiff = std::abs(c.g * (c.g_prime - c.g_star));
        const double ddiff = std::abs(c.delta_prime - c.delta_star);
        q1[i] = gg * ad1 * std::min(ddiff, 2.0) + gdiff * ad1 * std::min(std::abs(c.delta_star), 1.0);
        q2[i] = ag * ad1 * ad1;
        q3[i] = ad > 1.0 ? ag * (ad - 1.0) : 0.0;
        q4[i] = gg * std::min(ddiff, 1.0) +
                gdiff * std::min({std::abs(c.delta_prime), std::abs(c.delta_star), 1.0});

        g0 += ag * ag * ag;
        d0 += ad * ad * ad;
        if (c.on_a) {
            on_a += 1.0;
            g1 += std::pow(c.g, 4);
            g2 += std::pow(c.g_prime, 4);
            g3 += std::pow(c.g_star, 4);
            d1 += std::pow(c.delta, 4);
            d2 += std::pow(c.delta_prime, 4);
            d3 += std::pow(c.delta_star, 4);
        } else if (c.g_prime != c.g_star || c.delta_prime != c.delta_star) {
            ++rep.a_violations;
        }
    }
    const Estimate e1 = mean_with_se(q1), e2 = mean_with_se(q2), e3 = mean_with_se(q3), e4 = mean_with_se(q4);
    rep.s = {std::sqrt(e1.mean), e2.mean, e3.mean, e4.mean};
    rep.se = {e1.mean > 0.0 ? e1.se / (2.0 * std::sqrt(e1.mean)) : 0.0, e2.se, e3.se, e4.se};
    rep.bound = combine_theorem5(rep.s.s1, rep.s.s2, rep.s.s3, rep.s.s4);

    const double nn = static_cast<double>(n);
    auto root = [nn](double sum, double k) { return std::pow(sum / nn, 1.0 / k); };
    rep.ledger.g0 = root(g0, 3.0);
    rep.ledger.g1 = root(g1, 4.0);
    rep.ledger.g2 = root(g2, 4.0);
    rep.ledger.g3 = root(g3, 4.0);
    rep.ledger.d0 = root(d0, 3.0);
    rep.ledger.d1 = root(d1, 4.0);
    rep.ledger.d2 = root(d2, 4.0);
    rep.ledger.d3 = root(d3, 4.0);
    rep.ledger.p_a = on_a / nn;
    rep.ledger_bound = bound_from_moment_ledger(rep.ledger);
    return rep;
}

}  // namespace steinkit
