#include "steinkit/models/excursion.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "steinkit/estimators.hpp"
#include "steinkit/models/kruns.hpp"
#include "steinkit/normal.hpp"
#include "steinkit/replicate.hpp"

namespace steinkit::models {

ExcursionSet parse_excursion_set(std::string_view id) {
    if (id == "above") return ExcursionSet::above;
    if (id == "always") return ExcursionSet::always;
    if (id == "never") return ExcursionSet::never;
    if (id == "kruns") return ExcursionSet::kruns;
    throw std::invalid_argument("unknown excursion set id '" + std::string(id) + "'");
}

ExcursionConfig ExcursionConfig::kruns_embedding(std::size_t n, std::size_t k, double p) {
    if (k == 0 || n < k) throw std::invalid_argument("k-runs need 1 <= k <= n");
    ExcursionConfig c;
    c.set = ExcursionSet::kruns;
    c.k = k;
    c.p = p;
    c.l = static_cast<double>(k);
    c.horizon = static_cast<double>(n - k + 2);
    return c;
}

std::size_t ExcursionConfig::kruns_trials() const {
    return static_cast<std::size_t>(std::llround(horizon)) + k - 2;
}

void ExcursionConfig::validate() const {
    if (!(l > 0.0) || !(horizon > 0.0)) throw std::invalid_argument("l and horizon must be positive");
    if (horizon < l) throw std::invalid_argument("horizon must be at least the dependence range l");
    if (set == ExcursionSet::kruns) {
        if (k == 0) throw std::invalid_argument("k must be >= 1");
        if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("p must lie in (0, 1)");
        if (horizon != std::floor(horizon) || horizon < 2.0) {
            throw std::invalid_argument("k-runs embedding needs integer horizon n - k + 2");
        }
    } else if (l != std::floor(l)) {
        throw std::invalid_argument("moving-window process needs an integer window l");
    }
}

ExcursionModel::ExcursionModel(ExcursionConfig cfg, std::uint64_t pilot_reps, std::uint64_t pilot_seed)
    : cfg_(cfg) {
    cfg_.validate();
    switch (cfg_.set) {
    case ExcursionSet::never:
        moments_ = {0.0, 0.0, true};
        break;
    case ExcursionSet::always:
        moments_ = {cfg_.horizon, 0.0, true};
        break;
    case ExcursionSet::kruns: {
        const auto m = kruns_moments(cfg_.kruns_trials(), cfg_.k, cfg_.p);
        moments_ = {m.mean, std::sqrt(m.variance), true};
        break;
    }
    case ExcursionSet::above: {
        moments_.mu = cfg_.horizon * (1.0 - std_normal_cdf(cfg_.level));
        struct Pilot {
            const ExcursionModel& m;
            double draw(Rng& rng) const { return m.excursion_time(rng); }
        };
        const auto totals = run_replicates(
            Pilot{*this}, ReplicateSpec{pilot_reps, domain_seed(pilot_seed, kPilotDomain), 1});
        moments_.b = std::sqrt(variance_with_se(totals).mean);
        moments_.exact = false;
        break;
    }
    }
}

double ExcursionModel::excursion_time(Rng& rng) const {
    switch (cfg_.set) {
    case ExcursionSet::never:
        return 0.0;
    case ExcursionSet::always:
        return cfg_.horizon;
    case ExcursionSet::kruns: {
        // X_t on [j, j+1) is the run indicator starting at trial j, j = 1..n-k+1;
        // each unit interval in E contributes its full length.
        thread_local std::vector<std::uint64_t> bits;
        const std::size_t n = cfg_.kruns_trials();
        draw_indicator_bits(rng, n, cfg_.p, bits);
        return static_cast<double>(count_kruns(bits, n, cfg_.k));
    }
    case ExcursionSet::above: {
        const auto window = static_cast<std::size_t>(cfg_.l);
        const auto pieces = static_cast<std::size_t>(std::ceil(cfg_.horizon));
        thread_local std::vector<double> eps;
        eps.resize(pieces + window);
        std::normal_distribution<double> normal(0.0, 1.0);
        for (double& e : eps) e = normal(rng);
        const double scale = 1.0 / std::sqrt(static_cast<double>(window));
        double running = 0.0;
        for (std::size_t i = 0; i < window; ++i) running += eps[i];
        double total = 0.0;
        for (std::size_t j = 0; j < pieces; ++j) {
            if (j > 0) running += eps[j + window - 1] - eps[j - 1];
            const double length = std::min(1.0, cfg_.horizon - static_cast<double>(j));
            if (running * scale > cfg_.level) total += length;
        }
        return total;
    }
    }
    return 0.0;
}

ExcursionDraw ExcursionModel::draw(Rng& rng) const {
    const double total = excursion_time(rng);
    const double w = moments_.b > 0.0 ? (total - moments_.mu) / moments_.b : 0.0;
    return {total, w};
}

}  // namespace steinkit::models
