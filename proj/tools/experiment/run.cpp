#include "experiment/run.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <type_traits>
#include <variant>

#include "experiment/models.hpp"
#include "steinkit/bounds.hpp"
#include "steinkit/coupling_terms.hpp"
#include "steinkit/error.hpp"
#include "steinkit/estimators.hpp"
#include "steinkit/geometry/tessellation.hpp"
#include "steinkit/geometry/sampling.hpp"
#include "steinkit/identity.hpp"
#include "steinkit/palm_terms.hpp"
#include "steinkit/replicate.hpp"

namespace steinkit::experiment {
namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

constexpr std::uint64_t kScaleDomain = 0x7363616c65000000ULL;

json to_json(const Estimate& e) { return {{"mean", e.mean}, {"se", e.se}}; }

json to_json(const CouplingTerms& s) { return {{"s1", s.s1}, {"s2", s.s2}, {"s3", s.s3}, {"s4", s.s4}}; }

json to_json(const EcdfReport& r) { return {{"n", r.n}, {"d_k", r.d_k}, {"dkw_eps_99", r.dkw_eps_99}}; }

/// Per-replicate W plus the unstandardized statistic behind it.
struct ScalarDraw {
    double raw = 0.0;
    double w = 0.0;
};

struct ScalarPanel {
    std::vector<double> w;
    std::vector<double> raw;
    std::string raw_name;
    bool sample_standardized = false;  ///< W standardized by the panel's own mean and sd
};

template <class M, class F>
ScalarPanel collect(const M& model, const ReplicateSpec& spec, F f, std::string raw_name) {
    struct Adapter {
        const M& m;
        F f;
        ScalarDraw draw(Rng& rng) const { return f(m, rng); }
    };
    const auto draws = run_replicates(Adapter{model, f}, spec);
    ScalarPanel p;
    p.raw_name = std::move(raw_name);
    p.w.reserve(draws.size());
    p.raw.reserve(draws.size());
    for (const auto& d : draws) {
        p.w.push_back(d.w);
        p.raw.push_back(d.raw);
    }
    return p;
}

ScalarPanel scalar_panel(const AnyModel& any, const ReplicateSpec& spec) {
    return std::visit(
        overloaded{
            [&](const models::IidSumModel& m) {
                return collect(m, spec, [](const auto& mm, Rng& r) {
                    const double w = mm.draw(r).w;
                    return ScalarDraw{w * mm.moments().b, w};
                }, "s");
            },
            [&](const models::KRunsModel& m) {
                return collect(m, spec, [](const auto& mm, Rng& r) {
                    const auto d = mm.draw(r);
                    return ScalarDraw{d.s, d.w};
                }, "s");
            },
            [&](const models::ExcursionModel& m) {
                if (!(m.moments().b > 0.0)) throw DegenerateModelError("excursion time has variance 0");
                return collect(m, spec, [](const auto& mm, Rng& r) {
                    const auto d = mm.draw(r);
                    return ScalarDraw{d.total, d.w};
                }, "total");
            },
            [&](const models::CrmModel& m) {
                return collect(m, spec, [](const auto& mm, Rng& r) {
                    const double w = mm.draw_w(r);
                    return ScalarDraw{w * mm.b() + mm.lambda_total(), w};
                }, "total");
            },
            [&](const models::OccupancyModel& m) {
                return collect(m, spec, [](const auto& mm, Rng& r) {
                    const double v = mm.draw_v(r);
                    return ScalarDraw{v, (v - mm.mu_total()) / mm.sigma()};
                }, "v");
            },
            [&](const PoissonVoronoiModel& m) {
                auto p = collect(m, spec, [](const auto& mm, Rng& r) {
                    const double t = mm.draw(r).total;
                    return ScalarDraw{t, t};
                }, "total");
                standardize(p.w);
                p.sample_standardized = true;
                return p;
            },
            [&](const GinibreModel&) -> ScalarPanel {
                throw ConfigError("ginibre has no scalar statistic; use the simulate check");
            },
        },
        any);
}

void fill_scalar_table(Table& t, const ScalarPanel& p) {
    t.header = {"replicate", p.raw_name, "w"};
    t.rows.reserve(p.w.size());
    for (std::size_t i = 0; i < p.w.size(); ++i) t.rows.push_back({static_cast<double>(i), p.raw[i], p.w[i]});
}

json model_info(const AnyModel& any) {
    return std::visit(
        overloaded{
            [](const models::IidSumModel& m) -> json {
                return {{"law", m.spec().name()}, {"n", m.n()}, {"b", m.moments().b},
                        {"fourth_trunc_sum", m.moments().fourth_trunc_sum},
                        {"third_abs_sum", m.moments().third_abs_sum}};
            },
            [](const models::KRunsModel& m) -> json {
                return {{"n", m.n()}, {"k", m.k()}, {"p", m.p()}, {"mu", m.moments().mean},
                        {"variance", m.moments().variance}, {"b", m.b()}};
            },
            [](const models::ExcursionModel& m) -> json {
                return {{"l", m.config().l}, {"horizon", m.config().horizon}, {"mu", m.moments().mu},
                        {"b", m.moments().b}, {"b_exact", m.moments().exact}};
            },
            [](const models::CrmModel& m) -> json {
                json atoms = json::array();
                for (const auto& a : m.atoms()) atoms.push_back(a.describe());
                return {{"atoms", atoms}, {"lambda", m.lambda_total()}, {"b", m.b()}};
            },
            [](const models::OccupancyModel& m) -> json {
                return {{"m", m.config().m}, {"n", m.config().n}, {"sigma", m.sigma()},
                        {"sigma_se", m.sigma_se()}, {"sigma_exact", m.sigma_exact()},
                        {"mu_total", m.mu_total()}, {"warnings", m.warnings()}};
            },
            [](const PoissonVoronoiModel& m) -> json {
                return {{"lambda", m.window().lambda}, {"padding", m.window().padding},
                        {"intensity", m.intensity()},
                        {"cell_convention", "cells of the full padded sample; sum over centers in Q_lambda"}};
            },
            [](const GinibreModel& m) -> json { return {{"n_matrix", m.n_matrix()}, {"areas", m.areas()}}; },
        },
        any);
}

AnyModel make_model(const ExperimentConfig& cfg, std::optional<double> scale = std::nullopt) {
    return build_model(cfg.model, cfg.params, scale, domain_seed(cfg.reps.master_seed, kPilotDomain));
}

std::vector<TestFunction> test_functions(const ExperimentConfig& cfg, std::vector<std::string> fallback) {
    const auto& ids = cfg.test_functions.empty() ? fallback : cfg.test_functions;
    std::vector<TestFunction> out;
    for (const auto& id : ids) {
        try {
            out.push_back(parse_test_function(id));
        } catch (const std::invalid_argument& e) {
            throw ConfigError(e.what());
        }
    }
    return out;
}

double clip(double x) { return std::clamp(x, -1.0, 1.0); }

double sample_skewness(const std::vector<double>& x) {
    const double n = static_cast<double>(x.size());
    double m = 0.0;
    for (double v : x) m += v;
    m /= n;
    double m2 = 0.0, m3 = 0.0;
    for (double v : x) {
        const double d = v - m;
        m2 += d * d;
        m3 += d * d * d;
    }
    m2 /= n;
    m3 /= n;
    return m2 > 0.0 ? m3 / std::pow(m2, 1.5) : 0.0;
}

// ---------------------------------------------------------------- simulate

void run_ginibre(const GinibreModel& m, const ExperimentConfig& cfg, Report& rep) {
    const auto draws = run_replicates(m, cfg.reps);
    const double n = static_cast<double>(draws.size());
    auto& t = rep.replicates;
    t.header = {"replicate", "bulk_count"};
    for (std::size_t i = 1; i < m.areas().size(); ++i) t.header.push_back("count_area_" + format_number(m.areas()[i]));
    if (cfg.write_replicates) {
        for (std::size_t r = 0; r < draws.size(); ++r) {
            std::vector<double> row{static_cast<double>(r)};
            row.insert(row.end(), draws[r].counts.begin(), draws[r].counts.end());
            t.rows.push_back(std::move(row));
        }
    }

    std::vector<double> bulk;
    for (const auto& d : draws) bulk.push_back(d.counts[0]);
    const Estimate count = mean_with_se(bulk);
    const double area = m.areas()[0];
    const Estimate intensity{count.mean / area, count.se / area};
    const double target = 1.0 / std::numbers::pi;
    rep.summary["intensity"] = {{"bulk_area", area}, {"estimate", to_json(intensity)}, {"target", target}};
    rep.check_le("intensity_within_band", std::abs(intensity.mean - target), cfg.thresholds.se_band * intensity.se);

    json voids = json::array();
    for (std::size_t i = 1; i < m.areas().size(); ++i) {
        double empty = 0.0;
        for (const auto& d : draws) empty += d.counts[i] == 0.0 ? 1.0 : 0.0;
        const double p = empty / n;
        const double se = std::sqrt(p * (1.0 - p) / n);
        const double a = m.areas()[i];
        const double bound = std::exp(-a / std::numbers::pi);
        voids.push_back({{"area", a}, {"p_void", p}, {"se", se}, {"bound", bound}});
        rep.check_le("void_area_" + format_number(a), p, bound + cfg.thresholds.void_se_band * se);
    }
    rep.summary["void"] = voids;
}

void run_simulate(const ExperimentConfig& cfg, Report& rep) {
    const AnyModel model = make_model(cfg);
    rep.summary["model_info"] = model_info(model);
    if (const auto* g = std::get_if<GinibreModel>(&model)) {
        run_ginibre(*g, cfg, rep);
        return;
    }
    const auto panel = scalar_panel(model, cfg.reps);
    rep.summary["w"] = to_json(mean_with_se(panel.w));
    rep.summary["w_variance"] = to_json(variance_with_se(panel.w));
    rep.summary[panel.raw_name] = to_json(mean_with_se(panel.raw));
    rep.summary["sample_standardized"] = panel.sample_standardized;
    if (const auto* pv = std::get_if<PoissonVoronoiModel>(&model)) {
        const Estimate e = mean_with_se(panel.raw);
        rep.summary["total_over_lambda"] = to_json(Estimate{e.mean / pv->window().lambda, e.se / pv->window().lambda});
    }
    if (cfg.write_replicates) fill_scalar_table(rep.replicates, panel);
    else rep.replicates.header = {"replicate", panel.raw_name, "w"};
}

// ---------------------------------------------------------------- kdist

void check_moments(const ScalarPanel& panel, const ExperimentConfig& cfg, Report& rep) {
    const Estimate mean = mean_with_se(panel.w);
    const Estimate var = variance_with_se(panel.w);
    rep.summary["w"] = to_json(mean);
    rep.summary["w_variance"] = to_json(var);
    if (!panel.sample_standardized) {
        rep.check_le("w_mean_zero", std::abs(mean.mean), cfg.thresholds.se_band * mean.se);
        rep.check_le("w_variance_one", std::abs(var.mean - 1.0), cfg.thresholds.se_band * var.se);
    }
}

void run_kdist(const ExperimentConfig& cfg, Report& rep) {
    const AnyModel model = make_model(cfg);
    rep.summary["model_info"] = model_info(model);
    const auto panel = scalar_panel(model, cfg.reps);
    const auto ecdf = empirical_kolmogorov(panel.w);
    rep.summary["ecdf"] = to_json(ecdf);
    rep.summary["dkw_eps"] = dkw_epsilon(panel.w.size(), cfg.thresholds.dkw_delta);
    rep.summary["sample_standardized"] = panel.sample_standardized;
    check_moments(panel, cfg, rep);

    if (const auto* kr = std::get_if<models::KRunsModel>(&model); kr && kr->n() <= 20) {
        const auto exact = models::kruns_moments_enumerated(kr->n(), kr->k(), kr->p());
        const Estimate mean = mean_with_se(panel.raw);
        const Estimate var = variance_with_se(panel.raw);
        rep.summary["enumeration"] = {{"mu", exact.mean}, {"variance", exact.variance},
                                      {"mc_mean", to_json(mean)}, {"mc_variance", to_json(var)}};
        rep.check_le("enumerated_mean", std::abs(mean.mean - exact.mean), cfg.thresholds.se_band * mean.se);
        rep.check_le("enumerated_variance", std::abs(var.mean - exact.variance), cfg.thresholds.se_band * var.se);
        rep.check_le("closed_form_variance", std::abs(kr->moments().variance - exact.variance), cfg.thresholds.exact_tol);
    }
    if (cfg.write_replicates) fill_scalar_table(rep.replicates, panel);
    else rep.replicates.header = {"replicate", panel.raw_name, "w"};
}

// ---------------------------------------------------------------- bound

std::vector<SteinCouplingDraw> coupling_draws(const models::OccupancyModel& m, const ReplicateSpec& spec) {
    return run_projected(m, spec, [](const models::OccupancyDraw& d) { return d.coupling; });
}

void run_bound(const ExperimentConfig& cfg, Report& rep) {
    const AnyModel model = make_model(cfg);
    rep.summary["model_info"] = model_info(model);
    if (std::holds_alternative<PoissonVoronoiModel>(model) || std::holds_alternative<GinibreModel>(model)) {
        throw ConfigError("no closed-form bound for " + cfg.model + "; use a rate check");
    }
    const auto panel = scalar_panel(model, cfg.reps);
    const auto ecdf = empirical_kolmogorov(panel.w);
    const double eps = dkw_epsilon(panel.w.size(), cfg.thresholds.dkw_delta);
    rep.summary["ecdf"] = to_json(ecdf);
    rep.summary["dkw_eps"] = eps;

    double bound = 0.0;
    std::visit(
        overloaded{
            [&](const models::IidSumModel& m) {
                const auto& mo = m.moments();
                bound = bound_iid(mo.fourth_trunc_sum, mo.third_abs_sum, mo.b);
                rep.summary["bound_form"] = "iid";
            },
            [&](const models::KRunsModel& m) {
                bound = bound_excursion(static_cast<double>(m.k()), m.moments().mean, m.b());
                rep.summary["bound_form"] = "excursion";
            },
            [&](const models::ExcursionModel& m) {
                bound = bound_excursion(m.config().l, m.moments().mu, m.moments().b);
                rep.summary["bound_form"] = "excursion";
            },
            [&](const models::CrmModel& m) {
                const auto variant_id = cfg.params.value("bound", std::string("full"));
                CrmBound variant = CrmBound::full;
                if (variant_id == "compact") variant = CrmBound::compact;
                else if (variant_id == "diffuse") variant = CrmBound::diffuse;
                else if (variant_id != "full") throw ConfigError("unknown crm bound variant '" + variant_id + "'");
                const auto mo = m.bound_moments();
                bound = bound_crm(mo, m.b(), variant);
                rep.summary["bound_form"] = "crm_" + variant_id;

                const ReplicateSpec pilot{default_pilot_size(cfg.reps.n_reps),
                                          domain_seed(cfg.reps.master_seed, kAuxDomain), cfg.reps.workers};
                const auto pilot_panels = run_replicates(m, pilot);
                const auto main_panels = run_replicates(m, cfg.reps);
                const auto t2 = estimate_theorem2_terms(pilot_panels, main_panels);
                json r = json::array();
                json se = json::array();
                for (int i = 0; i < 5; ++i) {
                    r.push_back(t2.terms.r[i]);
                    se.push_back(t2.terms.se[i]);
                }
                rep.summary["theorem2"] = {{"r", r}, {"se", se}, {"bound", t2.bound},
                                           {"r1_bias_scale", t2.r1_bias_scale}, {"r4_bias", t2.r4_bias},
                                           {"r5_bias", t2.r5_bias}, {"n_pilot", t2.n_pilot}, {"n_main", t2.n_main}};
                const auto c1 = estimate_corollary1_terms(main_panels);
                rep.summary["corollary1"] = {{"s1", c1.s1}, {"s2", c1.s2}, {"s3", c1.s3}, {"se1", c1.se1},
                                             {"se2", c1.se2}, {"se3", c1.se3}, {"bound", c1.bound},
                                             {"pairs_exact", c1.pairs_exact}};
            },
            [&](const models::OccupancyModel& m) {
                const auto draws = coupling_draws(m, cfg.reps);
                const auto t5 = estimate_theorem5_terms(draws);
                bound = t5.bound;
                rep.summary["bound_form"] = "theorem5";
                const auto& l = t5.ledger;
                rep.summary["theorem5"] = {
                    {"s", to_json(t5.s)},
                    {"se", to_json(t5.se)},
                    {"bound", t5.bound},
                    {"ledger", {{"g0", l.g0}, {"g1", l.g1}, {"g2", l.g2}, {"g3", l.g3}, {"d0", l.d0},
                                {"d1", l.d1}, {"d2", l.d2}, {"d3", l.d3}, {"p_a", l.p_a}}},
                    {"ledger_bound", to_json(t5.ledger_bound)},
                    {"ledger_combined", combine_theorem5(t5.ledger_bound.s1, t5.ledger_bound.s2,
                                                         t5.ledger_bound.s3, t5.ledger_bound.s4)},
                    {"a_violations", t5.a_violations},
                };
                rep.check_le("a_violations", static_cast<double>(t5.a_violations), 0.0);
            },
            [&](const auto&) {},
        },
        model);

    rep.summary["bound"] = bound;
    rep.check_le("bound_dominates_dk", ecdf.d_k + eps, bound);
    if (cfg.write_replicates) fill_scalar_table(rep.replicates, panel);
    else rep.replicates.header = {"replicate", panel.raw_name, "w"};
}

// ---------------------------------------------------------------- identity

void run_occupancy_identity(const models::OccupancyModel& m, const ExperimentConfig& cfg, Report& rep) {
    const auto draws = run_replicates(m, cfg.reps);
    std::vector<SteinCouplingDraw> c;
    c.reserve(draws.size());
    std::size_t not_conserved = 0, not_disjoint = 0;
    std::size_t branches[4] = {0, 0, 0, 0};
    for (const auto& d : draws) {
        c.push_back(d.coupling);
        not_conserved += d.conserved ? 0 : 1;
        not_disjoint += d.m_disjoint ? 0 : 1;
        ++branches[d.branch];
    }

    json residuals = json::array();
    for (auto f : test_functions(cfg, {"1", "w", "w2", "cos"})) {
        const Estimate e = stein_identity_residual(c, f);
        residuals.push_back({{"f", to_string(f)}, {"residual", e.mean}, {"se", e.se}});
        rep.check_le("residual_" + to_string(f), std::abs(e.mean), cfg.thresholds.se_band * e.se);
    }
    rep.summary["residuals"] = residuals;

    rep.summary["structure"] = {{"not_conserved", not_conserved},
                                {"not_disjoint", not_disjoint},
                                {"branch_counts", {branches[1], branches[2], branches[3]}}};
    rep.check_le("conservation_failures", static_cast<double>(not_conserved), 0.0);
    rep.check_le("disjointness_failures", static_cast<double>(not_disjoint), 0.0);

    std::vector<double> g, gs, dl, ds;
    for (const auto& d : c) {
        g.push_back(d.g);
        gs.push_back(d.g_star);
        dl.push_back(d.delta);
        ds.push_back(d.delta_star);
    }
    const double eps = dkw_epsilon(c.size(), cfg.thresholds.dkw_delta);
    const double dk_g = two_sample_kolmogorov(g, gs);
    const double dk_d = two_sample_kolmogorov(dl, ds);
    rep.summary["marginals"] = {{"d_k_g", dk_g}, {"d_k_delta", dk_d}, {"dkw_eps", eps}};
    rep.check_le("marginal_g", dk_g, eps);
    rep.check_le("marginal_delta", dk_d, eps);

    json corr = json::array();
    auto proxy = [&](const std::string& name, auto h) {
        std::vector<double> a, b;
        a.reserve(c.size());
        b.reserve(c.size());
        for (const auto& d : c) {
            a.push_back(h(d.g, d.delta));
            b.push_back(h(d.g_star, d.delta_star));
        }
        const auto r = correlation_with_se(a, b);
        corr.push_back({{"h", name}, {"r", r.r}, {"se", r.se}});
        rep.check_le("independence_" + name, std::abs(r.r), cfg.thresholds.se_band * r.se);
    };
    proxy("tanh_g", [](double x, double) { return std::tanh(x); });
    proxy("tanh_delta", [](double, double y) { return std::tanh(y); });
    proxy("clip_product", [](double x, double y) { return clip(x) * clip(y); });
    rep.summary["independence"] = corr;

    const auto t5 = estimate_theorem5_terms(c);
    rep.summary["a_violations"] = t5.a_violations;
    rep.summary["p_a"] = t5.ledger.p_a;
    rep.check_le("a_violations", static_cast<double>(t5.a_violations), 0.0);

    auto& t = rep.replicates;
    t.header = {"replicate", "w", "w_prime", "g", "delta", "g_prime", "delta_prime", "g_star", "delta_star",
                "on_a", "branch"};
    if (cfg.write_replicates) {
        t.rows.reserve(draws.size());
        for (std::size_t i = 0; i < draws.size(); ++i) {
            const auto& d = draws[i].coupling;
            t.rows.push_back({static_cast<double>(i), d.w, d.w_prime, d.g, d.delta, d.g_prime, d.delta_prime,
                              d.g_star, d.delta_star, d.on_a ? 1.0 : 0.0, static_cast<double>(draws[i].branch)});
        }
    }
}

void run_crm_identity(const models::CrmModel& m, const ExperimentConfig& cfg, Report& rep) {
    const auto panels = run_replicates(m, cfg.reps);
    json residuals = json::array();
    for (auto f : test_functions(cfg, {"1", "x", "x2"})) {
        const Estimate e = palm_identity_residual(panels, f);
        const std::string name = f == TestFunction::identity ? "x" : f == TestFunction::square ? "x2" : to_string(f);
        residuals.push_back({{"f", name}, {"residual", e.mean}, {"se", e.se}});
        rep.check_le("residual_" + name, std::abs(e.mean), cfg.thresholds.se_band * e.se);
    }
    rep.summary["residuals"] = residuals;

    std::vector<double> totals;
    for (const auto& p : panels) totals.push_back(p.total);
    const Estimate total = mean_with_se(totals);
    rep.summary["total"] = to_json(total);
    rep.check_le("mean_measure", std::abs(total.mean - m.lambda_total()), cfg.thresholds.se_band * total.se);

    // Complete randomness: Y of distinct atoms are uncorrelated.
    const std::size_t atoms = m.atoms().size();
    json cov = json::array();
    for (std::size_t a = 0; a + 1 < atoms; ++a) {
        std::vector<double> ya, yb;
        for (const auto& p : panels) {
            ya.push_back(p.atoms[a].y);
            yb.push_back(p.atoms[a + 1].y);
        }
        const double ma = mean_with_se(ya).mean;
        const double mb = mean_with_se(yb).mean;
        std::vector<double> prod(ya.size());
        for (std::size_t i = 0; i < ya.size(); ++i) prod[i] = (ya[i] - ma) * (yb[i] - mb);
        const Estimate e = mean_with_se(prod);
        cov.push_back({{"atoms", {a, a + 1}}, {"cov", e.mean}, {"se", e.se}});
        rep.check_le("atom_covariance_" + std::to_string(a), std::abs(e.mean), cfg.thresholds.se_band * e.se);
    }
    rep.summary["atom_covariance"] = cov;

    auto& t = rep.replicates;
    t.header = {"replicate", "total"};
    for (std::size_t a = 0; a < atoms; ++a) t.header.push_back("y" + std::to_string(a));
    if (cfg.write_replicates) {
        for (std::size_t i = 0; i < panels.size(); ++i) {
            std::vector<double> row{static_cast<double>(i), panels[i].total};
            for (const auto& at : panels[i].atoms) row.push_back(at.y);
            t.rows.push_back(std::move(row));
        }
    }
}

void run_identity(const ExperimentConfig& cfg, Report& rep) {
    const AnyModel model = make_model(cfg);
    rep.summary["model_info"] = model_info(model);
    if (const auto* o = std::get_if<models::OccupancyModel>(&model)) {
        run_occupancy_identity(*o, cfg, rep);
    } else if (const auto* c = std::get_if<models::CrmModel>(&model)) {
        run_crm_identity(*c, cfg, rep);
    } else {
        throw ConfigError("identity checks need a coupling model (occupancy or crm), got " + cfg.model);
    }
}

// ---------------------------------------------------------------- rate

void run_rate(const ExperimentConfig& cfg, Report& rep) {
    auto& t = rep.rate;
    t.header = {"scale", "n_reps", "d_k", "dkw_eps", "w_mean", "w_variance", "extra", "extra_se"};
    rep.replicates.header = {"replicate", "w"};

    std::vector<RatePoint> points;
    std::vector<double> extra, extra_se;
    json scales = json::array();
    std::string extra_name;
    for (std::size_t i = 0; i < cfg.scales.size(); ++i) {
        const double scale = cfg.scales[i];
        ReplicateSpec spec = cfg.reps;
        if (!cfg.scale_reps.empty()) spec.n_reps = cfg.scale_reps[i];
        spec.master_seed = domain_seed(cfg.reps.master_seed, kScaleDomain + i);
        const AnyModel model = make_model(cfg, scale);
        const auto panel = scalar_panel(model, spec);
        const auto ecdf = empirical_kolmogorov(panel.w);
        const double eps = dkw_epsilon(panel.w.size(), cfg.thresholds.dkw_delta);
        const Estimate mean = mean_with_se(panel.w);
        const Estimate var = variance_with_se(panel.w);
        points.push_back({scale, ecdf.d_k});

        double x = 0.0, xse = 0.0;
        json row = {{"scale", scale}, {"n_reps", spec.n_reps}, {"ecdf", to_json(ecdf)}, {"dkw_eps", eps},
                    {"model_info", model_info(model)}};
        std::visit(
            overloaded{
                [&](const models::IidSumModel& m) {
                    const auto& mo = m.moments();
                    x = bound_iid(mo.fourth_trunc_sum, mo.third_abs_sum, mo.b);
                    extra_name = "bound";
                    rep.check_le("bound_dominates_dk_" + format_number(scale), ecdf.d_k + eps, x);
                },
                [&](const models::KRunsModel& m) {
                    x = bound_excursion(static_cast<double>(m.k()), m.moments().mean, m.b());
                    extra_name = "bound";
                    rep.check_le("bound_dominates_dk_" + format_number(scale), ecdf.d_k + eps, x);
                },
                [&](const models::ExcursionModel& m) {
                    x = bound_excursion(m.config().l, m.moments().mu, m.moments().b);
                    extra_name = "bound";
                    rep.check_le("bound_dominates_dk_" + format_number(scale), ecdf.d_k + eps, x);
                },
                [&](const models::OccupancyModel& m) {
                    const double n = static_cast<double>(m.config().n);
                    x = m.sigma() * m.sigma() / n;
                    xse = 2.0 * m.sigma() * m.sigma_se() / n;
                    extra_name = "sigma2_over_n";
                },
                [&](const PoissonVoronoiModel& m) {
                    const Estimate e = mean_with_se(panel.raw);
                    x = e.mean / m.window().lambda;
                    xse = e.se / m.window().lambda;
                    extra_name = "total_over_lambda";
                    row["skewness"] = sample_skewness(panel.raw);
                },
                [&](const auto&) { throw ConfigError("rate checks are not available for " + cfg.model); },
            },
            model);
        row[extra_name] = {{"value", x}, {"se", xse}};
        scales.push_back(row);
        extra.push_back(x);
        extra_se.push_back(xse);
        t.rows.push_back({scale, static_cast<double>(spec.n_reps), ecdf.d_k, eps, mean.mean, var.mean, x, xse});
    }
    t.header[6] = extra_name;
    t.header[7] = extra_name + "_se";
    rep.summary["scales"] = scales;

    const auto fit = loglog_rate_fit(points);
    rep.summary["fit"] = {{"slope", fit.slope}, {"intercept", fit.intercept}, {"r2", fit.r2}};
    if (cfg.thresholds.slope_min) rep.check("slope_min", fit.slope, *cfg.thresholds.slope_min, fit.slope >= *cfg.thresholds.slope_min);
    if (cfg.thresholds.slope_max) rep.check_le("slope_max", fit.slope, *cfg.thresholds.slope_max);

    if (extra_name == "sigma2_over_n" || extra_name == "total_over_lambda") {
        const std::size_t k = extra.size();
        const double change = std::abs(extra[k - 1] - extra[k - 2]) / std::abs(extra[k - 2]);
        rep.summary["ratio_change"] = change;
        rep.check_le("ratio_change_largest_scales", change, cfg.thresholds.ratio_tol);
    }
    if (extra_name == "total_over_lambda") {
        // Weighted least squares of the ratio on lambda^{-1/2}; the intercept
        // is the lambda -> infinity limit.
        double sw = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (std::size_t i = 0; i < extra.size(); ++i) {
            const double w = extra_se[i] > 0.0 ? 1.0 / (extra_se[i] * extra_se[i]) : 1.0;
            const double xi = 1.0 / std::sqrt(cfg.scales[i]);
            sw += w;
            sx += w * xi;
            sy += w * extra[i];
            sxx += w * xi * xi;
            sxy += w * xi * extra[i];
        }
        const double det = sw * sxx - sx * sx;
        const double intercept = (sxx * sy - sx * sxy) / det;
        const double intercept_se = std::sqrt(sxx / det);
        rep.summary["extrapolated_ratio"] = {{"value", intercept}, {"se", intercept_se}};
        if (cfg.thresholds.reference) {
            const double ref = *cfg.thresholds.reference;
            rep.check_le("extrapolated_vs_reference", std::abs(intercept - ref) / ref, cfg.thresholds.reference_tol);
            rep.check_le("largest_scale_vs_reference", std::abs(extra.back() - ref) / ref, cfg.thresholds.reference_tol);
        }
    }
}

// ---------------------------------------------------------------- fixture

void run_fixture(const ExperimentConfig& cfg, Report& rep) {
    if (cfg.model != "geometry") throw ConfigError("fixture checks need model id 'geometry'");
    using geometry::Point;
    const auto& p = cfg.params;
    const auto fixtures = p.value("fixtures", std::vector<std::string>{"square5", "pair", "triangle", "palm_far",
                                                                       "double_count"});
    const double tol = cfg.thresholds.exact_tol;
    const std::vector<Point> square5{{0, 0}, {2, 0}, {-2, 0}, {0, 2}, {0, -2}};
    json out = json::object();
    rep.replicates.header = {"instance", "sum_half_length", "total_finite_length"};

    for (const auto& name : fixtures) {
        if (name == "square5") {
            const auto t = geometry::build_tessellation(square5, 3.0);
            const geometry::WindowConfig window{36.0, 0.0};
            const double total = geometry::total_edge_statistic(t, window);
            out[name] = {{"total", total}, {"finite_length", t.total_finite_length()},
                         {"half_length", t.half_length}};
            rep.check_le("square5_total", std::abs(total - 8.0), tol);
            rep.check_le("square5_center", std::abs(t.half_length[0] - 4.0), tol);
            double outer = 0.0;
            for (std::size_t i = 1; i < 5; ++i) outer = std::max(outer, std::abs(t.half_length[i] - 1.0));
            rep.check_le("square5_outer", outer, tol);
        } else if (name == "pair" || name == "triangle") {
            std::vector<Point> pts{{0, 0}, {1, 0}};
            if (name == "triangle") pts.push_back({0.3, 1.1});
            const auto t = geometry::build_tessellation(pts);
            double sum = 0.0;
            for (double l : t.half_length) sum += l;
            out[name] = {{"finite_length", t.total_finite_length()}, {"sum_half_length", sum}};
            rep.check(name + "_zero", t.total_finite_length() + sum, 0.0, t.total_finite_length() == 0.0 && sum == 0.0);
        } else if (name == "palm_far") {
            // The bare fixture has unbounded outer cells, so a far point still
            // closes their rays; a ring at radius 6 shields the window.
            const geometry::WindowConfig window{36.0, 8.0};
            std::vector<Point> shielded = square5;
            for (int i = 0; i < 24; ++i) {
                const double a = 2.0 * std::numbers::pi * i / 24.0;
                shielded.push_back({6.0 * std::cos(a), 6.0 * std::sin(a)});
            }
            const double bare = geometry::palm_edge_delta(square5, Point{10.0, 10.0}, window);
            const double y = geometry::palm_edge_delta(shielded, Point{10.0, 10.0}, window);
            out[name] = {{"y_shielded", y}, {"y_bare", bare}};
            rep.check_le("palm_far_unchanged", std::abs(y), tol);
        } else if (name == "double_count") {
            const geometry::WindowConfig window{p.value("lambda", 64.0), p.value("padding", 6.0)};
            const ReplicateSpec spec{p.value("instances", std::uint64_t{1000}), cfg.reps.master_seed, cfg.reps.workers};
            struct Instance {
                double sum = 0.0;
                double total = 0.0;
                double unmatched = 0.0;
            };
            struct Model {
                geometry::WindowConfig w;
                Instance draw(Rng& rng) const {
                    const auto pts = geometry::sample_poisson(w, 1.0, rng);
                    Instance r;
                    if (pts.size() < 2) return r;
                    const auto t = geometry::build_tessellation(pts, w.region_half_side());
                    // Each finite edge must be credited to exactly its two generators.
                    std::vector<double> tally(pts.size(), 0.0);
                    for (const auto& e : t.edges) {
                        if (!e.finite) continue;
                        if (e.a == e.b) r.unmatched += 1.0;
                        tally[e.a] += 0.5 * e.length();
                        tally[e.b] += 0.5 * e.length();
                    }
                    for (std::size_t i = 0; i < pts.size(); ++i) {
                        if (std::abs(tally[i] - t.half_length[i]) > 1e-9 * (1.0 + t.half_length[i])) r.unmatched += 1.0;
                        r.sum += t.half_length[i];
                    }
                    r.total = t.total_finite_length();
                    return r;
                }
            };
            const auto inst = run_replicates(Model{window}, spec);
            double worst = 0.0, unmatched = 0.0;
            for (std::size_t i = 0; i < inst.size(); ++i) {
                worst = std::max(worst, std::abs(inst[i].sum - inst[i].total) / std::max(1.0, inst[i].total));
                unmatched += inst[i].unmatched;
                if (cfg.write_replicates) rep.replicates.rows.push_back({static_cast<double>(i), inst[i].sum, inst[i].total});
            }
            out[name] = {{"instances", inst.size()}, {"max_relative_gap", worst}, {"unmatched", unmatched}};
            rep.check_le("double_count_gap", worst, 1e-12);
            rep.check_le("double_count_unmatched", unmatched, 0.0);
        } else {
            throw ConfigError("unknown fixture '" + name + "'");
        }
    }
    rep.summary["fixtures"] = out;
}

}  // namespace

json report_header(const ExperimentConfig& cfg) {
    return {{"config_hash", config_hash(cfg)},
            {"seed", cfg.reps.master_seed},
            {"kind", to_string(cfg.kind)},
            {"model", cfg.model},
            {"config", canonical_config(cfg)},
            {"n_reps", cfg.reps.n_reps}};
}

Report run_experiment(const ExperimentConfig& cfg) {
    Report rep;
    const auto start = std::chrono::steady_clock::now();
    try {
        switch (cfg.kind) {
        case CheckKind::simulate: run_simulate(cfg, rep); break;
        case CheckKind::identity: run_identity(cfg, rep); break;
        case CheckKind::kdist: run_kdist(cfg, rep); break;
        case CheckKind::bound: run_bound(cfg, rep); break;
        case CheckKind::rate: run_rate(cfg, rep); break;
        case CheckKind::fixture: run_fixture(cfg, rep); break;
        }
    } catch (const DegenerateModelError& e) {
        throw ConfigError(std::string("degenerate model: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    } catch (const json::exception& e) {
        throw ConfigError(e.what());
    }
    rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return rep;
}

int exit_status(const Report& report) { return report.pass() ? 0 : 1; }

}  // namespace steinkit::experiment
