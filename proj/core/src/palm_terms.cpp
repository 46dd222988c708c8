#include "steinkit/palm_terms.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "steinkit/estimators.hpp"
#include "steinkit/rng.hpp"

namespace steinkit {
namespace {

struct Step {
    double a = 0.0;  ///< |Delta| in (0, 1]
    double w = 0.0;  ///< weight Lambda / B (divided by the panel count for K)
};

// K(t) = sum_j w_j 1[t < a_j] on [0, 1], with the integrals the r4'/r5'
// expansion needs.
class StepKernel {
public:
    explicit StepKernel(std::vector<Step> steps) : steps_(std::move(steps)) {
        std::sort(steps_.begin(), steps_.end(), [](const Step& x, const Step& y) { return x.a < y.a; });
        const std::size_t n = steps_.size();
        a_.resize(n);
        pre_wa_.assign(n + 1, 0.0);
        pre_wa2_.assign(n + 1, 0.0);
        suf_w_.assign(n + 1, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            a_[i] = steps_[i].a;
            pre_wa_[i + 1] = pre_wa_[i] + steps_[i].w * steps_[i].a;
            pre_wa2_[i + 1] = pre_wa2_[i] + 0.5 * steps_[i].w * steps_[i].a * steps_[i].a;
        }
        for (std::size_t i = n; i-- > 0;) suf_w_[i] = suf_w_[i + 1] + steps_[i].w;
        for (std::size_t i = 0; i < n; ++i) {
            const double tail = suf_w_[i + 1];
            sq1_ += steps_[i].w * (steps_[i].w * a_[i] + 2.0 * tail * a_[i]);
            sq2_ += steps_[i].w * (steps_[i].w + 2.0 * tail) * 0.5 * a_[i] * a_[i];
        }
    }

    /// int_0^x K(t) dt
    double integral(double x) const {
        const std::size_t k = split(x);
        return pre_wa_[k] + x * suf_w_[k];
    }

    /// int_0^x t K(t) dt
    double moment(double x) const {
        const std::size_t k = split(x);
        return pre_wa2_[k] + 0.5 * x * x * suf_w_[k];
    }

    double square_integral() const noexcept { return sq1_; }
    double square_moment() const noexcept { return sq2_; }
    const std::vector<Step>& steps() const noexcept { return steps_; }

private:
    std::size_t split(double x) const {
        return static_cast<std::size_t>(std::upper_bound(a_.begin(), a_.end(), x) - a_.begin());
    }

    std::vector<Step> steps_;
    std::vector<double> a_;
    std::vector<double> pre_wa_, pre_wa2_, suf_w_;
    double sq1_ = 0.0;
    double sq2_ = 0.0;
};

void check_panels(std::span<const PalmPanel> panels, std::size_t atoms, double b) {
    for (const auto& p : panels) {
        if (p.atoms.size() != atoms) throw std::invalid_argument("panels disagree on the number of atoms");
        if (p.b != b) throw std::invalid_argument("panels disagree on B");
    }
}

// Splits the in-range Delta_a = Y_a / B of one panel into the t > 0 and
// t <= 0 halves of K^in.
void collect_steps(const PalmPanel& p, double scale, std::vector<Step>& pos, std::vector<Step>& neg) {
    for (const auto& atom : p.atoms) {
        const double d = atom.y / p.b;
        if (d == 0.0 || std::abs(d) > 1.0) continue;
        (d > 0.0 ? pos : neg).push_back({std::abs(d), atom.weight / p.b * scale});
    }
}

}  // namespace

std::uint64_t default_pilot_size(std::uint64_t n_reps) {
    const auto scaled = static_cast<std::uint64_t>(std::ceil(10.0 * std::sqrt(static_cast<double>(n_reps))));
    return std::max<std::uint64_t>(10000, scaled);
}

PalmTermReport estimate_theorem2_terms(std::span<const PalmPanel> pilot, std::span<const PalmPanel> main) {
    if (pilot.size() < 2 || main.size() < 2) throw std::invalid_argument("need >= 2 pilot and main panels");
    const std::size_t atoms = pilot.front().atoms.size();
    const double b = pilot.front().b;
    if (atoms == 0) throw std::invalid_argument("carrier is empty");
    if (!(b > 0.0)) throw std::invalid_argument("B must be positive");
    check_panels(pilot, atoms, b);
    check_panels(main, atoms, b);

    // Pilot: per-atom E{Y 1[|Y| <= B]} and K^in on both half-lines.
    const double np = static_cast<double>(pilot.size());
    std::vector<double> m_alpha(atoms, 0.0);
    std::vector<double> pilot_sums(pilot.size(), 0.0);
    std::vector<Step> pos, neg;
    for (std::size_t r = 0; r < pilot.size(); ++r) {
        const auto& p = pilot[r];
        for (std::size_t a = 0; a < atoms; ++a) {
            const double y = p.atoms[a].y;
            const double yt = std::abs(y) <= b ? y : 0.0;
            m_alpha[a] += yt / np;
            pilot_sums[r] += p.atoms[a].weight * yt;
        }
        collect_steps(p, 1.0 / np, pos, neg);
    }
    const StepKernel k_pos(std::move(pos));
    const StepKernel k_neg(std::move(neg));

    const double b2 = b * b;
    const double b3 = b2 * b;
    const std::size_t nm = main.size();
    std::vector<double> v1(nm), v2(nm), v3(nm), v4(nm), v5(nm);
    std::vector<Step> hat_pos, hat_neg;
    for (std::size_t r = 0; r < nm; ++r) {
        const auto& p = main[r];
        double centered = 0.0, second = 0.0, outer = 0.0;
        for (std::size_t a = 0; a < atoms; ++a) {
            const double y = p.atoms[a].y;
            const double lam = p.atoms[a].weight;
            if (std::abs(y) <= b) {
                centered += lam * (y - m_alpha[a]);
                second += lam * y * y;
            } else {
                centered -= lam * m_alpha[a];
                outer += lam * std::abs(y);
            }
        }
        v1[r] = std::abs(centered) / b2;
        v2[r] = second / b3;
        v3[r] = outer / b2;

        hat_pos.clear();
        hat_neg.clear();
        collect_steps(p, 1.0, hat_pos, hat_neg);
        double sq = 0.0, sqt = 0.0;
        for (auto* side : {&hat_pos, &hat_neg}) {
            const StepKernel& k = side == &hat_pos ? k_pos : k_neg;
            const StepKernel hat(*side);
            double cross = 0.0, cross_t = 0.0;
            for (const auto& s : hat.steps()) {
                cross += s.w * k.integral(s.a);
                cross_t += s.w * k.moment(s.a);
            }
            sq += hat.square_integral() - 2.0 * cross + k.square_integral();
            sqt += hat.square_moment() - 2.0 * cross_t + k.square_moment();
        }
        v4[r] = std::max(0.0, sq);
        v5[r] = std::max(0.0, sqt);
    }

    PalmTermReport rep;
    rep.terms.family = TermFamily::palm;
    const Estimate e1 = mean_with_se(v1), e2 = mean_with_se(v2), e3 = mean_with_se(v3);
    const Estimate e4 = mean_with_se(v4), e5 = mean_with_se(v5);
    rep.terms.r = {e1.mean, e2.mean, e3.mean, e4.mean, std::sqrt(e5.mean)};
    rep.terms.se = {e1.se, e2.se, e3.se, e4.se, e5.mean > 0.0 ? e5.se / (2.0 * std::sqrt(e5.mean)) : 0.0};
    rep.bound = combine_theorem2(rep.terms);
    rep.n_pilot = pilot.size();
    rep.n_main = nm;
    const Estimate ps = mean_with_se(pilot_sums);
    rep.r1_bias_scale = ps.se / b2;
    rep.r4_bias = e4.mean / np;
    rep.r5_bias = std::sqrt(e5.mean) * (std::sqrt(1.0 + 1.0 / np) - 1.0);
    return rep;
}

Corollary1Report estimate_corollary1_terms(std::span<const PalmPanel> panels, const DependencySet& d,
                                           std::size_t exact_limit, std::uint64_t pair_samples,
                                           std::uint64_t seed) {
    if (panels.size() < 2) throw std::invalid_argument("need >= 2 panels");
    const std::size_t atoms = panels.front().atoms.size();
    const double b = panels.front().b;
    if (atoms == 0) throw std::invalid_argument("carrier is empty");
    check_panels(panels, atoms, b);

    // row[a] = sum_{b : (a, b) in D} Lambda({b}).
    std::vector<double> row(atoms, 0.0);
    Corollary1Report rep;
    const auto& ref = panels.front().atoms;
    if (atoms <= exact_limit) {
        for (std::size_t a = 0; a < atoms; ++a) {
            for (std::size_t c = 0; c < atoms; ++c) {
                if (d(a, c)) row[a] += ref[c].weight;
            }
        }
    } else {
        rep.pairs_exact = false;
        Rng rng(domain_seed(seed, kAuxDomain));
        const double scale = static_cast<double>(atoms) * static_cast<double>(atoms) /
                             static_cast<double>(pair_samples);
        for (std::uint64_t s = 0; s < pair_samples; ++s) {
            const std::size_t a = rng.below(atoms);
            const std::size_t c = rng.below(atoms);
            if (d(a, c)) row[a] += ref[c].weight * scale;
        }
    }

    const double b2 = b * b;
    const double b3 = b2 * b;
    const std::size_t n = panels.size();
    std::vector<double> q1(n), q2(n), q3(n);
    for (std::size_t r = 0; r < n; ++r) {
        double a1 = 0.0, a2 = 0.0, a3 = 0.0;
        for (std::size_t a = 0; a < atoms; ++a) {
            const double y = panels[r].atoms[a].y;
            const double lam = panels[r].atoms[a].weight;
            a2 += lam * y * y;
            if (std::abs(y) <= b) {
                a1 += lam * row[a] * y * y;
                a3 += lam * row[a] * std::abs(y);
            }
        }
        q1[r] = a1;
        q2[r] = a2 / b3;
        q3[r] = a3 / b3;
    }
    const Estimate e1 = mean_with_se(q1), e2 = mean_with_se(q2), e3 = mean_with_se(q3);
    rep.s1 = std::sqrt(e1.mean) / b2;
    rep.se1 = e1.mean > 0.0 ? e1.se / (2.0 * std::sqrt(e1.mean)) / b2 : 0.0;
    rep.s2 = e2.mean;
    rep.se2 = e2.se;
    rep.s3 = e3.mean;
    rep.se3 = e3.se;
    rep.bound = combine_corollary1(rep.s1, rep.s2, rep.s3);
    return rep;
}

}  // namespace steinkit
