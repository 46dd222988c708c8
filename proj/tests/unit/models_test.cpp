#include <cmath>
#include <map>
#include <numeric>
#include <vector>

#include <gtest/gtest.h>

#include "steinkit/coupling_terms.hpp"
#include "steinkit/error.hpp"
#include "steinkit/estimators.hpp"
#include "steinkit/identity.hpp"
#include "steinkit/models/crm.hpp"
#include "steinkit/models/excursion.hpp"
#include "steinkit/models/iid.hpp"
#include "steinkit/models/kruns.hpp"
#include "steinkit/models/occupancy.hpp"
#include "steinkit/replicate.hpp"

using namespace steinkit;
using namespace steinkit::models;

namespace {

template <class M, class F>
std::vector<double> column(const M& model, const ReplicateSpec& spec, F f) {
    return run_projected(model, spec, f);
}

}  // namespace

// ---------------------------------------------------------------- iid

TEST(Iid, RademacherFourTermsEnumeration) {
    const IidSumModel m(SummandSpec::parse("rademacher"), 4);
    EXPECT_DOUBLE_EQ(m.moments().b, 2.0);
    const auto w = column(m, {80000, 1, 1}, [](const IidDraw& d) { return d.w; });
    std::map<double, double> freq;
    for (double x : w) freq[x] += 1.0 / static_cast<double>(w.size());
    const std::map<double, double> exact{{-2, 1.0 / 16}, {-1, 4.0 / 16}, {0, 6.0 / 16}, {1, 4.0 / 16}, {2, 1.0 / 16}};
    ASSERT_EQ(freq.size(), exact.size());
    for (const auto& [x, p] : exact) {
        const double se = std::sqrt(p * (1 - p) / static_cast<double>(w.size()));
        EXPECT_NEAR(freq[x], p, 4 * se) << "W = " << x;
    }
}

TEST(Iid, SingleRademacher) {
    const IidSumModel m(SummandSpec::parse("rademacher"), 1);
    const auto w = column(m, {1000, 2, 1}, [](const IidDraw& d) { return d.w; });
    for (double x : w) EXPECT_TRUE(x == 1.0 || x == -1.0);
}

TEST(Iid, StandardizedForEveryLaw) {
    for (const char* law : {"rademacher", "bernoulli", "uniform", "exponential"}) {
        const IidSumModel m(SummandSpec::parse(law, 0.3), 100);
        const auto w = column(m, {100000, 3, 1}, [](const IidDraw& d) { return d.w; });
        const auto mean = mean_with_se(w);
        const auto var = variance_with_se(w);
        EXPECT_LE(std::abs(mean.mean), 4 * mean.se) << law;
        EXPECT_LE(std::abs(var.mean - 1.0), 4 * var.se) << law;
    }
}

TEST(Iid, AnalyticMoments) {
    const IidSumModel r(SummandSpec::parse("rademacher"), 64);
    EXPECT_DOUBLE_EQ(r.moments().fourth_trunc_sum, 64.0);
    EXPECT_DOUBLE_EQ(r.moments().third_abs_sum, 64.0);
    // U(-1, 1): Var 1/3, E|U|^3 = 1/4, E U^4 = 1/5 (B = 4/sqrt(3) > 1).
    const IidSumModel u(SummandSpec::parse("uniform"), 16);
    EXPECT_NEAR(u.moments().b, std::sqrt(16.0 / 3.0), 1e-14);
    EXPECT_NEAR(u.moments().third_abs_sum, 4.0, 1e-14);
    EXPECT_NEAR(u.moments().fourth_trunc_sum, 3.2, 1e-14);
    EXPECT_THROW(SummandSpec::parse("cauchy"), std::invalid_argument);
}

// ---------------------------------------------------------------- k-runs

TEST(KRuns, EnumerationSmallCase) {
    const auto e = kruns_moments_enumerated(3, 2, 0.5);
    EXPECT_DOUBLE_EQ(e.mean, 0.5);
    EXPECT_DOUBLE_EQ(e.variance, 0.5);
    const auto c = kruns_moments(3, 2, 0.5);
    EXPECT_DOUBLE_EQ(c.mean, 0.5);
    EXPECT_DOUBLE_EQ(c.variance, 0.5);
}

TEST(KRuns, ClosedFormMatchesEnumeration) {
    for (std::size_t n = 1; n <= 14; ++n) {
        for (std::size_t k = 1; k <= n; ++k) {
            for (double p : {0.2, 0.5, 0.9}) {
                const auto e = kruns_moments_enumerated(n, k, p);
                const auto c = kruns_moments(n, k, p);
                EXPECT_NEAR(c.mean, e.mean, 1e-10 * (1 + e.mean));
                EXPECT_NEAR(c.variance, e.variance, 1e-10 * (1 + e.variance)) << n << " " << k << " " << p;
            }
        }
    }
}

TEST(KRuns, BinomialWhenKIsOne) {
    const auto c = kruns_moments(50, 1, 0.3);
    EXPECT_NEAR(c.mean, 15.0, 1e-12);
    EXPECT_NEAR(c.variance, 10.5, 1e-12);
}

TEST(KRuns, MonteCarloMatchesEnumeration) {
    for (std::size_t n : {3, 10, 20}) {
        const KRunsModel m(n, 2, 0.5);
        const auto s = column(m, {100000, 4, 1}, [](const KRunsDraw& d) { return d.s; });
        const auto e = kruns_moments_enumerated(n, 2, 0.5);
        const auto mean = mean_with_se(s);
        const auto var = variance_with_se(s);
        EXPECT_LE(std::abs(mean.mean - e.mean), 4 * mean.se) << n;
        EXPECT_LE(std::abs(var.mean - e.variance), 4 * var.se) << n;
    }
}

TEST(KRuns, CountsAcrossWordBoundaries) {
    std::vector<std::uint64_t> bits(3, ~std::uint64_t{0});
    EXPECT_EQ(count_kruns(bits, 150, 3), 148u);
    bits[1] = 0;
    EXPECT_EQ(count_kruns(bits, 150, 3), 62u + 20u);
    EXPECT_EQ(count_kruns(bits, 2, 3), 0u);
}

TEST(KRuns, Errors) {
    EXPECT_THROW(KRunsModel(3, 4, 0.5), std::invalid_argument);
    EXPECT_THROW(KRunsModel(10, 2, 1.0), DegenerateModelError);
    EXPECT_THROW(KRunsModel(10, 0, 0.5), std::invalid_argument);
}

// ---------------------------------------------------------------- crm

TEST(Crm, PointMassHasZeroPalmDifference) {
    const auto law = AtomLaw::point_mass(3);
    for (double u : {0.0, 0.3, 0.999}) {
        const auto pr = law.draw_pair(u);
        EXPECT_EQ(pr.x, 3u);
        EXPECT_EQ(pr.biased, 3u);
    }
}

TEST(Crm, TwoPointAtomSizeBias) {
    const unsigned values[] = {0, 2};
    const auto law = AtomLaw::uniform_on(values);
    EXPECT_DOUBLE_EQ(law.mean(), 1.0);
    const auto low = law.draw_pair(0.25);
    const auto high = law.draw_pair(0.75);
    EXPECT_EQ(low.x, 0u);
    EXPECT_EQ(low.biased, 2u);
    EXPECT_EQ(high.x, 2u);
    EXPECT_EQ(high.biased, 2u);
}

TEST(Crm, PoissonSizeBiasIsShiftByOne) {
    const auto law = AtomLaw::truncated_poisson(2.5, 50);
    int shifted = 0;
    const int grid = 20000;
    for (int i = 0; i < grid; ++i) {
        const auto pr = law.draw_pair((i + 0.5) / grid);
        shifted += pr.biased == pr.x + 1 ? 1 : 0;
    }
    // The comonotone coupling shifts by one except on a set of u of
    // measure at most the truncation error.
    EXPECT_GE(shifted, grid - 2);
}

TEST(Crm, PanelInvariants) {
    const unsigned values[] = {0, 2};
    const CrmModel m({AtomLaw::uniform_on(values), AtomLaw::truncated_poisson(1.0, 40), AtomLaw::point_mass(2)});
    EXPECT_NEAR(m.lambda_total(), 4.0, 1e-12);
    EXPECT_NEAR(m.b(), std::sqrt(2.0), 1e-9);
    const auto panels = run_replicates(m, {1000, 5, 1});
    for (const auto& p : panels) {
        ASSERT_EQ(p.atoms.size(), 3u);
        EXPECT_DOUBLE_EQ(p.atoms[0].weight, 1.0);
        EXPECT_DOUBLE_EQ(p.atoms[2].y, 0.0);
        EXPECT_GE(p.atoms[0].y, 0.0);
    }
}

TEST(Crm, DistinctAtomsUncorrelated) {
    const unsigned values[] = {1, 4};
    const CrmModel m({AtomLaw::from_pmf({0.2, 0.5, 0.3}), AtomLaw::from_pmf({0.3, 0.3, 0.4}),
                      AtomLaw::uniform_on(values)});
    const auto panels = run_replicates(m, {50000, 6, 1});
    for (std::size_t a = 0; a < 3; ++a) {
        for (std::size_t b = a + 1; b < 3; ++b) {
            std::vector<double> ya, yb;
            for (const auto& p : panels) {
                ya.push_back(p.atoms[a].y);
                yb.push_back(p.atoms[b].y);
            }
            const auto r = correlation_with_se(ya, yb);
            EXPECT_LE(std::abs(r.r), 4 * r.se) << a << "," << b;
        }
    }
}

TEST(Crm, Errors) {
    EXPECT_THROW(AtomLaw::point_mass(0), std::invalid_argument);
    EXPECT_THROW(AtomLaw::from_pmf({1.0}), std::invalid_argument);
    EXPECT_THROW(CrmModel({}), std::invalid_argument);
    EXPECT_THROW(CrmModel({AtomLaw::point_mass(2)}), DegenerateModelError);
}

TEST(Crm, BoundMoments) {
    const unsigned values[] = {0, 2};
    const CrmModel m({AtomLaw::uniform_on(values)});
    const auto mo = m.bound_moments();
    EXPECT_DOUBLE_EQ(mo.third_weighted, 4.0);
    EXPECT_DOUBLE_EQ(mo.third_sum, 4.0);
    EXPECT_DOUBLE_EQ(mo.second_weighted, 2.0);
}

// ---------------------------------------------------------------- excursion

TEST(Excursion, NeverAndAlways) {
    ExcursionConfig c;
    c.l = 2;
    c.horizon = 10.5;
    c.set = ExcursionSet::never;
    const ExcursionModel never(c);
    c.set = ExcursionSet::always;
    const ExcursionModel always(c);
    Rng rng(1);
    for (int i = 0; i < 10; ++i) {
        EXPECT_EQ(never.excursion_time(rng), 0.0);
        EXPECT_EQ(always.excursion_time(rng), 10.5);
    }
}

TEST(Excursion, KRunsEmbeddingMatchesKRuns) {
    const auto cfg = ExcursionConfig::kruns_embedding(3, 2, 0.5);
    const ExcursionModel ex(cfg);
    const KRunsModel kr(3, 2, 0.5);
    EXPECT_DOUBLE_EQ(ex.moments().mu, 0.5);
    EXPECT_DOUBLE_EQ(ex.moments().b, std::sqrt(0.5));
    for (std::uint64_t s = 0; s < 2000; ++s) {
        Rng a(s), b(s);
        EXPECT_EQ(ex.draw(a).total, kr.draw(b).s);
    }
}

TEST(Excursion, AboveLevelMean) {
    ExcursionConfig c;
    c.l = 3;
    c.horizon = 200;
    c.level = 0.5;
    const ExcursionModel m(c, 20000, 1);
    const auto t = column(m, {20000, 2, 1}, [](const ExcursionDraw& d) { return d.total; });
    const auto e = mean_with_se(t);
    EXPECT_LE(std::abs(e.mean - m.moments().mu), 4 * e.se);
    EXPECT_FALSE(m.moments().exact);
}

TEST(Excursion, Errors) {
    ExcursionConfig c;
    c.l = 5;
    c.horizon = 4;
    EXPECT_THROW(ExcursionModel{c}, std::invalid_argument);
    c.horizon = 10;
    c.l = 2.5;
    EXPECT_THROW(ExcursionModel{c}, std::invalid_argument);
    EXPECT_THROW(parse_excursion_set("sometimes"), std::invalid_argument);
}

// ---------------------------------------------------------------- occupancy

namespace {

OccupancyConfig uniform_config(std::size_t m, std::size_t n, const char* phi = "empty") {
    OccupancyConfig c;
    c.m = m;
    c.n = n;
    c.phi = {Functional::parse(phi)};
    return c;
}

}  // namespace

TEST(Occupancy, TwoBallsTwoUrns) {
    const OccupancyModel m(uniform_config(2, 2));
    EXPECT_TRUE(m.sigma_exact());
    EXPECT_DOUBLE_EQ(m.sigma() * m.sigma(), 0.25);
    EXPECT_DOUBLE_EQ(occupancy_exact_variance(2, 2, Functional::parse("empty")), 0.25);
    const auto draws = run_replicates(m, {20000, 1, 1});
    double ones = 0;
    for (const auto& d : draws) {
        EXPECT_TRUE(d.v == 0.0 || d.v == 1.0);
        EXPECT_TRUE(d.coupling.w == 1.0 || d.coupling.w == -1.0);
        ones += d.v;
    }
    const double p = ones / static_cast<double>(draws.size());
    EXPECT_NEAR(p, 0.5, 4 * std::sqrt(0.25 / static_cast<double>(draws.size())));
}

TEST(Occupancy, PilotSigmaTwoByTwo) {
    const OccupancyModel m(uniform_config(2, 2));
    const auto s = occupancy_sigma_pilot(m, 100000, 3);
    EXPECT_LE(std::abs(s.mean * s.mean - 0.25), 4 * 2 * s.mean * s.se);
}

TEST(Occupancy, LinearFunctionalIsDegenerate) {
    EXPECT_THROW(OccupancyModel(uniform_config(10, 5, "linear")), DegenerateModelError);
    EXPECT_EQ(occupancy_exact_variance(10, 5, Functional::parse("linear")), 0.0);
}

TEST(Occupancy, ExactVarianceMatchesPilot) {
    auto c = uniform_config(30, 20, "capped_poly");
    const OccupancyModel exact(c);
    ASSERT_TRUE(exact.sigma_exact());
    const auto s = occupancy_sigma_pilot(exact, 200000, 8);
    EXPECT_LE(std::abs(s.mean - exact.sigma()), 4 * s.se);
}

TEST(Occupancy, SigmaSquaredOverNStabilizes) {
    const double r64 = std::pow(OccupancyModel(uniform_config(64, 64)).sigma(), 2) / 64.0;
    const double r256 = std::pow(OccupancyModel(uniform_config(256, 256)).sigma(), 2) / 256.0;
    EXPECT_LT(std::abs(r256 - r64) / r64, 0.15);
}

TEST(Occupancy, StructureInEveryBranch) {
    OccupancyConfig c;
    c.m = 40;
    c.n = 25;
    c.p.resize(25);
    for (std::size_t i = 0; i < 25; ++i) c.p[i] = (1.0 + static_cast<double>(i % 5)) / 75.0;
    c.phi = {Functional::parse("empty")};
    c.pilot_reps = 20000;
    const OccupancyModel m(c);
    EXPECT_FALSE(m.sigma_exact());
    const auto draws = run_replicates(m, {30000, 2, 1});
    int branches[4] = {0, 0, 0, 0};
    std::vector<SteinCouplingDraw> cd;
    for (const auto& d : draws) {
        EXPECT_TRUE(d.conserved);
        EXPECT_TRUE(d.m_disjoint);
        EXPECT_EQ(d.coupling.delta, d.coupling.w_prime - d.coupling.w);
        if (!d.coupling.on_a) {
            EXPECT_EQ(d.coupling.g_prime, d.coupling.g_star);
            EXPECT_EQ(d.coupling.delta_prime, d.coupling.delta_star);
        }
        ++branches[d.branch];
        cd.push_back(d.coupling);
    }
    EXPECT_GT(branches[1], 0);
    EXPECT_GT(branches[2], 0);
    EXPECT_GT(branches[3], 0);
    for (auto f : {TestFunction::one, TestFunction::identity, TestFunction::square, TestFunction::cosine}) {
        const auto e = stein_identity_residual(cd, f);
        EXPECT_LE(std::abs(e.mean), 4 * e.se) << to_string(f);
    }
    EXPECT_EQ(estimate_theorem5_terms(cd).a_violations, 0u);
}

TEST(Occupancy, StarCopyHasTheSameMarginal) {
    const OccupancyModel m(uniform_config(30, 30, "trunc_exp"));
    const auto draws = run_replicates(m, {100000, 4, 1});
    std::vector<double> g, gs, d, ds;
    for (const auto& x : draws) {
        g.push_back(x.coupling.g);
        gs.push_back(x.coupling.g_star);
        d.push_back(x.coupling.delta);
        ds.push_back(x.coupling.delta_star);
    }
    const double eps = std::sqrt(2.0) * dkw_epsilon(draws.size(), 0.01);
    EXPECT_LE(two_sample_kolmogorov(g, gs), eps);
    EXPECT_LE(two_sample_kolmogorov(d, ds), eps);
}

TEST(Occupancy, ConfigErrors) {
    EXPECT_THROW(OccupancyModel(uniform_config(0, 5)), std::invalid_argument);
    EXPECT_THROW(OccupancyModel(uniform_config(5, 1)), std::invalid_argument);
    auto c = uniform_config(5, 3);
    c.p = {0.5, 0.5, 0.5};
    EXPECT_THROW(OccupancyModel{c}, std::invalid_argument);
    EXPECT_THROW(Functional::parse("cubic"), std::invalid_argument);
}

TEST(Occupancy, WarnsWhenProbabilitiesAreLarge) {
    OccupancyConfig c;
    c.m = 10;
    c.n = 4;
    c.p = {0.7, 0.1, 0.1, 0.1};
    c.phi = {Functional::parse("empty")};
    c.pilot_reps = 1000;
    c.k2 = 4.0;
    const OccupancyModel m(c);
    EXPECT_FALSE(m.warnings().empty());
}
