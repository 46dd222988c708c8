#include "steinkit/models/occupancy.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "steinkit/error.hpp"
#include "steinkit/replicate.hpp"

namespace steinkit::models {
namespace {

constexpr std::uint8_t kMarkI = 1;
constexpr std::uint8_t kMarkN = 2;
constexpr std::uint8_t kMarkBullet = 4;

std::vector<double> binomial_pmf(std::size_t m, double q) {
    std::vector<double> pmf(m + 1, 0.0);
    if (q >= 1.0) {
        pmf[m] = 1.0;
        return pmf;
    }
    const double lq = std::log(q);
    const double l1q = std::log1p(-q);
    const double lm = std::lgamma(static_cast<double>(m) + 1.0);
    for (std::size_t x = 0; x <= m; ++x) {
        const double k = static_cast<double>(x);
        pmf[x] = std::exp(lm - std::lgamma(k + 1.0) - std::lgamma(static_cast<double>(m - x) + 1.0) +
                          k * lq + static_cast<double>(m - x) * l1q);
    }
    return pmf;
}

std::vector<double> tabulate(const Functional& f, std::size_t m) {
    std::vector<double> t(m + 1);
    for (std::size_t x = 0; x <= m; ++x) t[x] = f(static_cast<unsigned>(x));
    return t;
}

bool same_functional(const Functional& a, const Functional& b) {
    return a.kind == b.kind && a.c == b.c && a.degree == b.degree && a.cap == b.cap;
}

}  // namespace

Functional Functional::parse(std::string_view id) {
    Functional f;
    if (id == "empty") {
        f.kind = FunctionalKind::empty;
    } else if (id == "trunc_exp") {
        f.kind = FunctionalKind::trunc_exp;
    } else if (id == "capped_poly") {
        f.kind = FunctionalKind::capped_poly;
    } else if (id == "linear") {
        f.kind = FunctionalKind::linear;
    } else {
        throw std::invalid_argument("unknown functional id '" + std::string(id) + "'");
    }
    return f;
}

std::string Functional::name() const {
    switch (kind) {
    case FunctionalKind::empty: return "empty";
    case FunctionalKind::trunc_exp: return "trunc_exp";
    case FunctionalKind::capped_poly: return "capped_poly";
    case FunctionalKind::linear: return "linear";
    }
    return "?";
}

double Functional::operator()(unsigned x) const {
    switch (kind) {
    case FunctionalKind::empty: return x == 0 ? 1.0 : 0.0;
    case FunctionalKind::trunc_exp: return std::exp(std::min(static_cast<double>(x), 30.0)) - c;
    case FunctionalKind::capped_poly: return std::min(std::pow(static_cast<double>(x), degree), cap);
    case FunctionalKind::linear: return static_cast<double>(x);
    }
    return 0.0;
}

void OccupancyConfig::validate() const {
    if (m == 0 || n < 2) throw std::invalid_argument("occupancy needs m >= 1 balls and n >= 2 urns");
    if (m > (std::size_t{1} << 31) || n > (std::size_t{1} << 31)) {
        throw std::invalid_argument("occupancy m and n must fit in 31 bits");
    }
    if (!p.empty()) {
        if (p.size() != n) throw std::invalid_argument("p must have n entries");
        double total = 0.0;
        for (double v : p) {
            if (!(v >= 0.0) || !std::isfinite(v)) throw std::invalid_argument("p entries must be nonnegative");
            total += v;
        }
        if (std::abs(total - 1.0) > 1e-9) throw std::invalid_argument("p must sum to 1");
        for (double v : p) {
            if (v >= 1.0) throw std::invalid_argument("every p_i must be below 1");
        }
    }
    if (phi.empty() || (phi.size() != 1 && phi.size() != n)) {
        throw std::invalid_argument("phi must hold one shared functional or n functionals");
    }
    if (pilot_reps < 2) throw std::invalid_argument("pilot_reps must be >= 2");
}

struct OccupancyModel::Scratch {
    std::vector<unsigned> xi, xi_bullet, xi_star;
    std::vector<unsigned> add;
    std::vector<std::uint8_t> mark;
    std::vector<std::uint32_t> iota, iota_prime, touched, n_set, n_bullet, outside, balls;
    std::vector<double> outside_cdf;

    void reset(std::size_t n) {
        xi.assign(n, 0);
        if (add.size() != n) add.assign(n, 0);
        if (mark.size() != n) mark.assign(n, 0);
    }
};

OccupancyModel::OccupancyModel(OccupancyConfig cfg) : cfg_(std::move(cfg)) {
    cfg_.validate();
    const std::size_t n = cfg_.n;
    const std::size_t m = cfg_.m;
    uniform_p_ = 1.0 / static_cast<double>(n);

    // Distinct functionals share one lookup table.
    phi_index_.assign(n, 0);
    std::vector<Functional> distinct;
    for (std::size_t i = 0; i < n; ++i) {
        const Functional& f = cfg_.phi.size() == 1 ? cfg_.phi[0] : cfg_.phi[i];
        auto it = std::find_if(distinct.begin(), distinct.end(),
                               [&](const Functional& g) { return same_functional(f, g); });
        if (it == distinct.end()) {
            distinct.push_back(f);
            it = distinct.end() - 1;
        }
        phi_index_[i] = static_cast<std::uint32_t>(it - distinct.begin());
    }
    for (const auto& f : distinct) phi_table_.push_back(tabulate(f, m));

    mu_.assign(n, 0.0);
    if (cfg_.uniform()) {
        const auto pmf = binomial_pmf(m, uniform_p_);
        std::vector<double> mu_by_phi(distinct.size(), 0.0);
        for (std::size_t f = 0; f < distinct.size(); ++f) {
            for (std::size_t x = 0; x <= m; ++x) mu_by_phi[f] += pmf[x] * phi_table_[f][x];
        }
        for (std::size_t i = 0; i < n; ++i) mu_[i] = mu_by_phi[phi_index_[i]];
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            const auto pmf = binomial_pmf(m, cfg_.p[i]);
            for (std::size_t x = 0; x <= m; ++x) mu_[i] += pmf[x] * phi_table_[phi_index_[i]][x];
        }
        // Walker alias table.
        alias_prob_.assign(n, 0.0);
        alias_.assign(n, 0);
        std::vector<double> scaled(n);
        std::vector<std::uint32_t> small, large;
        for (std::size_t i = 0; i < n; ++i) {
            scaled[i] = cfg_.p[i] * static_cast<double>(n);
            (scaled[i] < 1.0 ? small : large).push_back(static_cast<std::uint32_t>(i));
        }
        while (!small.empty() && !large.empty()) {
            const auto s = small.back();
            small.pop_back();
            const auto l = large.back();
            alias_prob_[s] = scaled[s];
            alias_[s] = l;
            scaled[l] -= 1.0 - scaled[s];
            if (scaled[l] < 1.0) {
                large.pop_back();
                small.push_back(l);
            }
        }
        for (auto i : large) alias_prob_[i] = 1.0;
        for (auto i : small) alias_prob_[i] = 1.0;
    }
    mu_total_ = std::accumulate(mu_.begin(), mu_.end(), 0.0);

    const double pmax = cfg_.uniform() ? uniform_p_ : *std::max_element(cfg_.p.begin(), cfg_.p.end());
    if (pmax > cfg_.k2 / static_cast<double>(m)) {
        std::ostringstream os;
        os << "sup p_i = " << pmax << " exceeds K2/m = " << cfg_.k2 / static_cast<double>(m);
        warnings_.push_back(os.str());
    }

    if (cfg_.uniform() && distinct.size() == 1) {
        const double var = occupancy_exact_variance(m, n, distinct[0]);
        if (!(var > 0.0)) throw DegenerateModelError("Var V = 0: functional is degenerate (e.g. linear)");
        sigma_ = std::sqrt(var);
        sigma_exact_ = true;
    } else {
        const auto est = occupancy_sigma_pilot(*this, cfg_.pilot_reps, cfg_.pilot_seed);
        if (!(est.mean > 0.0)) throw DegenerateModelError("pilot Var V = 0: functional is degenerate");
        sigma_ = est.mean;
        sigma_se_ = est.se;
    }
}

double OccupancyModel::phi(std::size_t i, unsigned x) const { return phi_table_[phi_index_[i]][x]; }

std::size_t OccupancyModel::draw_urn(Rng& rng) const {
    const std::uint64_t k = rng.below(cfg_.n);
    if (cfg_.uniform()) return k;
    return rng.uniform() < alias_prob_[k] ? k : alias_[k];
}

void OccupancyModel::draw_counts(Rng& rng, std::vector<unsigned>& xi) const {
    xi.assign(cfg_.n, 0);
    for (std::size_t b = 0; b < cfg_.m; ++b) ++xi[draw_urn(rng)];
}

std::size_t OccupancyModel::draw_other(Rng& rng, std::size_t excluded) const {
    if (cfg_.uniform()) {
        const std::size_t k = rng.below(cfg_.n - 1);
        return k >= excluded ? k + 1 : k;
    }
    for (;;) {
        const std::size_t k = draw_urn(rng);
        if (k != excluded) return k;
    }
}

double OccupancyModel::draw_v(Rng& rng) const {
    thread_local std::vector<unsigned> xi;
    draw_counts(rng, xi);
    double v = 0.0;
    for (std::size_t i = 0; i < cfg_.n; ++i) v += phi(i, xi[i]);
    return v;
}

// -(1/sigma) (phi_u(c_u) + sum_{i in N} (phi_i(c_i) - phi_i(c_i + a_i))), where
// a_i counts the balls of urn u sent to i by the first c_u targets. Leaves the
// distinct targets, in first-hit order, in s.touched.
double OccupancyModel::redistribution_delta(const std::vector<unsigned>& counts, std::size_t urn,
                                            const std::vector<std::uint32_t>& targets, Scratch& s) const {
    const unsigned moved = counts[urn];
    s.touched.clear();
    for (unsigned k = 0; k < moved; ++k) {
        const auto t = targets[k];
        if (s.add[t]++ == 0) s.touched.push_back(t);
    }
    double sum = phi(urn, counts[urn]);
    for (auto t : s.touched) {
        sum += phi(t, counts[t]) - phi(t, counts[t] + s.add[t]);
        s.add[t] = 0;
    }
    return -sum / sigma_;
}

OccupancyDraw OccupancyModel::draw(Rng& rng) const {
    thread_local Scratch s;
    const std::size_t n = cfg_.n;
    const std::size_t m = cfg_.m;
    s.reset(n);
    OccupancyDraw out;
    SteinCouplingDraw& c = out.coupling;

    draw_counts(rng, s.xi);
    double v = 0.0;
    for (std::size_t i = 0; i < n; ++i) v += phi(i, s.xi[i]);
    out.v = v;
    c.w = (v - mu_total_) / sigma_;

    // (W, W', G): redistribute urn I.
    const std::size_t I = rng.below(n);
    s.iota.resize(s.xi[I]);
    for (auto& t : s.iota) t = static_cast<std::uint32_t>(draw_other(rng, I));
    const double delta = redistribution_delta(s.xi, I, s.iota, s);
    s.n_set = s.touched;
    c.g = -(static_cast<double>(n) / sigma_) * (phi(I, s.xi[I]) - mu_[I]);
    c.w_prime = c.w + delta;
    c.delta = c.w_prime - c.w;

    // xi*: fresh counts on N u {I}, the outside adjusted to conserve m.
    draw_counts(rng, s.xi_bullet);
    s.xi_star = s.xi;
    s.mark[I] |= kMarkI;
    for (auto i : s.n_set) s.mark[i] |= kMarkN;
    std::size_t chi = s.xi[I];
    std::size_t chi_bullet = s.xi_bullet[I];
    s.xi_star[I] = s.xi_bullet[I];
    double inside_mass = prob(I);
    for (auto i : s.n_set) {
        chi += s.xi[i];
        chi_bullet += s.xi_bullet[i];
        s.xi_star[i] = s.xi_bullet[i];
        inside_mass += prob(i);
    }
    s.n_bullet.clear();
    auto inside = [&](std::size_t k) { return (s.mark[k] & (kMarkI | kMarkN)) != 0; };
    if (chi_bullet == chi) {
        out.branch = 1;
    } else if (chi_bullet < chi) {
        out.branch = 2;
        const std::size_t extra = chi - chi_bullet;
        const bool sparse_outside = 1.0 - inside_mass < 0.25;
        if (sparse_outside) {
            s.outside.clear();
            s.outside_cdf.clear();
            double acc = 0.0;
            for (std::size_t k = 0; k < n; ++k) {
                if (inside(k)) continue;
                acc += prob(k);
                s.outside.push_back(static_cast<std::uint32_t>(k));
                s.outside_cdf.push_back(acc);
            }
            for (std::size_t j = 0; j < extra; ++j) {
                const double u = rng.uniform() * acc;
                auto pos = static_cast<std::size_t>(
                    std::upper_bound(s.outside_cdf.begin(), s.outside_cdf.end(), u) - s.outside_cdf.begin());
                pos = std::min(pos, s.outside.size() - 1);
                ++s.xi_star[s.outside[pos]];
            }
        } else {
            for (std::size_t j = 0; j < extra; ++j) {
                std::size_t k;
                do {
                    k = draw_urn(rng);
                } while (inside(k));
                ++s.xi_star[k];
            }
        }
    } else {
        out.branch = 3;
        // Sequential removal proportional to remaining counts is uniform
        // sampling of balls without replacement.
        const std::size_t remove = chi_bullet - chi;
        s.balls.clear();
        for (std::size_t k = 0; k < n; ++k) {
            if (inside(k)) continue;
            s.balls.insert(s.balls.end(), s.xi[k], static_cast<std::uint32_t>(k));
        }
        for (std::size_t j = 0; j < remove; ++j) {
            const std::size_t r = j + rng.below(s.balls.size() - j);
            std::swap(s.balls[j], s.balls[r]);
            --s.xi_star[s.balls[j]];
        }
    }
    if (out.branch != 1) {
        for (std::size_t k = 0; k < n; ++k) {
            if (!inside(k) && s.xi_star[k] != s.xi[k]) s.n_bullet.push_back(static_cast<std::uint32_t>(k));
        }
    }

    bool disjoint = true;
    for (auto k : s.n_bullet) {
        if (s.mark[k] != 0) disjoint = false;
        s.mark[k] |= kMarkBullet;
    }
    for (auto k : s.n_set) {
        if (k == I) disjoint = false;
    }
    out.m_disjoint = disjoint;
    out.m_size = static_cast<std::uint32_t>(1 + s.n_set.size() + s.n_bullet.size());

    // (G', Delta') and (G*, Delta*) share J and the sequence iota'.
    const std::size_t J = rng.below(n);
    s.iota_prime.resize(std::max(s.xi[J], s.xi_star[J]));
    for (auto& t : s.iota_prime) t = static_cast<std::uint32_t>(draw_other(rng, J));
    c.g_prime = -(static_cast<double>(n) / sigma_) * (phi(J, s.xi[J]) - mu_[J]);
    // Rounded through W like Delta so the three share one law.
    c.delta_prime = (c.w + redistribution_delta(s.xi, J, s.iota_prime, s)) - c.w;
    bool on_a = s.mark[J] != 0;
    for (auto t : s.touched) on_a = on_a || s.mark[t] != 0;
    c.g_star = -(static_cast<double>(n) / sigma_) * (phi(J, s.xi_star[J]) - mu_[J]);
    c.delta_star = (c.w + redistribution_delta(s.xi_star, J, s.iota_prime, s)) - c.w;
    c.on_a = on_a;

    const std::size_t sum_xi = std::accumulate(s.xi.begin(), s.xi.end(), std::size_t{0});
    const std::size_t sum_star = std::accumulate(s.xi_star.begin(), s.xi_star.end(), std::size_t{0});
    out.conserved = sum_xi == m && sum_star == m && s.iota.size() == s.xi[I];

    s.mark[I] = 0;
    for (auto k : s.n_set) s.mark[k] = 0;
    for (auto k : s.n_bullet) s.mark[k] = 0;
    return out;
}

Estimate occupancy_sigma_pilot(const OccupancyModel& model, std::uint64_t n_pilot, std::uint64_t seed) {
    struct Pilot {
        const OccupancyModel& m;
        double draw(Rng& rng) const { return m.draw_v(rng); }
    };
    const auto vs = run_replicates(Pilot{model}, ReplicateSpec{n_pilot, domain_seed(seed, kPilotDomain), 1});
    const auto var = variance_with_se(vs);
    if (!(var.mean > 0.0)) return {0.0, 0.0};
    const double sigma = std::sqrt(var.mean);
    return {sigma, var.se / (2.0 * sigma)};
}

double occupancy_exact_variance(std::size_t m, std::size_t n, const Functional& phi) {
    if (n < 2) throw std::invalid_argument("exact occupancy variance needs n >= 2");
    const double q = 1.0 / static_cast<double>(n);
    const auto pmf = binomial_pmf(m, q);
    const auto t = tabulate(phi, m);
    double mean = 0.0;
    for (std::size_t x = 0; x <= m; ++x) mean += pmf[x] * t[x];
    std::vector<double> centered(m + 1);
    double var1 = 0.0;
    for (std::size_t x = 0; x <= m; ++x) {
        centered[x] = t[x] - mean;
        var1 += pmf[x] * centered[x] * centered[x];
    }

    // Counts beyond `top` carry negligible marginal mass.
    std::size_t top = m;
    while (top > 0 && pmf[top] < 1e-40 && static_cast<double>(top) > static_cast<double>(m) * q) --top;

    // Cov(phi(xi_1), phi(xi_2)) under the trinomial (a, b, m - a - b).
    double cov = 0.0;
    const double lm = std::lgamma(static_cast<double>(m) + 1.0);
    const double lq = std::log(q);
    const double rest = 1.0 - 2.0 * q;
    for (std::size_t a = 0; a <= top; ++a) {
        for (std::size_t b = 0; b <= top && a + b <= m; ++b) {
            const std::size_t r = m - a - b;
            double pr;
            if (rest <= 0.0) {
                if (r != 0) continue;
                pr = std::exp(lm - std::lgamma(a + 1.0) - std::lgamma(b + 1.0) + static_cast<double>(m) * lq);
            } else {
                pr = std::exp(lm - std::lgamma(a + 1.0) - std::lgamma(b + 1.0) -
                              std::lgamma(static_cast<double>(r) + 1.0) + static_cast<double>(a + b) * lq +
                              static_cast<double>(r) * std::log(rest));
            }
            cov += pr * centered[a] * centered[b];
        }
    }
    const double nn = static_cast<double>(n);
    const double var = nn * var1 + nn * (nn - 1.0) * cov;
    // Linear functionals cancel to rounding level; treat that as zero.
    if (var <= 1e-9 * nn * var1) return 0.0;
    return var;
}

}  // namespace steinkit::models
