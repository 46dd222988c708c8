#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "steinkit/estimators.hpp"
#include "steinkit/identity.hpp"
#include "steinkit/models/crm.hpp"
#include "steinkit/models/iid.hpp"
#include "steinkit/normal.hpp"
#include "steinkit/replicate.hpp"

using namespace steinkit;

namespace {

struct ConstantModel {
    double draw(Rng&) const { return 3.5; }
};

struct NormalModel {
    double draw(Rng& rng) const { return std::normal_distribution<double>(0.0, 1.0)(rng); }
};

struct FailingModel {
    double draw(Rng& rng) const {
        if (rng() % 97 == 0) throw std::runtime_error("boom");
        return 0.0;
    }
};

}  // namespace

TEST(Replicates, ConstantModel) {
    const auto out = run_replicates(ConstantModel{}, {10, 1, 1});
    ASSERT_EQ(out.size(), 10u);
    for (double x : out) EXPECT_EQ(x, 3.5);
}

TEST(Replicates, DeterministicAcrossRunsAndWorkers) {
    const auto a = run_replicates(NormalModel{}, {10000, 42, 1});
    const auto b = run_replicates(NormalModel{}, {10000, 42, 1});
    const auto c = run_replicates(NormalModel{}, {10000, 42, 8});
    EXPECT_EQ(a, b);
    EXPECT_EQ(a, c);
    const auto d = run_replicates(NormalModel{}, {10000, 43, 1});
    EXPECT_NE(a, d);
}

TEST(Replicates, ErrorCarriesSmallestIndex) {
    std::uint64_t first = 0;
    for (std::uint64_t i = 0;; ++i) {
        Rng rng(stream_seed(9, i));
        if (rng() % 97 == 0) {
            first = i;
            break;
        }
    }
    for (unsigned workers : {1u, 4u}) {
        try {
            run_replicates(FailingModel{}, {5000, 9, workers});
            FAIL() << "expected a ReplicateError";
        } catch (const ReplicateError& e) {
            EXPECT_EQ(e.index(), first);
        }
    }
}

TEST(Replicates, RejectsEmptySpec) {
    EXPECT_THROW(run_replicates(ConstantModel{}, {0, 1, 1}), std::invalid_argument);
    EXPECT_THROW(run_replicates(ConstantModel{}, {5, 1, 0}), std::invalid_argument);
}

TEST(MeanWithSe, Examples) {
    const std::vector<double> ones{1, 1, 1, 1};
    EXPECT_EQ(mean_with_se(ones).mean, 1.0);
    EXPECT_EQ(mean_with_se(ones).se, 0.0);
    const std::vector<double> two{0, 2};
    EXPECT_DOUBLE_EQ(mean_with_se(two).mean, 1.0);
    EXPECT_NEAR(mean_with_se(two).se, 1.0, 1e-15);
    EXPECT_THROW(mean_with_se(std::vector<double>{}), std::invalid_argument);
    EXPECT_THROW(mean_with_se(std::vector<double>{1.0}), std::invalid_argument);
}

TEST(MeanWithSe, OrderInvariant) {
    std::vector<double> x(1000);
    std::mt19937_64 gen(1);
    for (auto& v : x) v = std::uniform_real_distribution<double>(-1, 1)(gen);
    const auto a = mean_with_se(x);
    std::reverse(x.begin(), x.end());
    const auto b = mean_with_se(x);
    EXPECT_NEAR(a.mean, b.mean, 1e-15);
    EXPECT_NEAR(a.se, b.se, 1e-15);
}

TEST(Dkw, Examples) {
    EXPECT_NEAR(dkw_epsilon(200, 0.01), 0.11509037065006825, 1e-15);
    EXPECT_NEAR(dkw_epsilon(800, 0.01), dkw_epsilon(200, 0.01) / 2.0, 1e-15);
    EXPECT_NEAR(dkw_epsilon(100000, 0.01), 0.005146997846, 1e-11);
    EXPECT_THROW(dkw_epsilon(0, 0.01), std::invalid_argument);
}

TEST(EmpiricalKolmogorov, Examples) {
    EXPECT_DOUBLE_EQ(empirical_kolmogorov(std::vector<double>{0.0}).d_k, 0.5);
    const double q = 1.2816;
    const auto r = empirical_kolmogorov(std::vector<double>{-q, 0.0, q});
    // Phi(+-1.2816) is 0.1 to within 1e-5, so the sup is 1/3 - 0.1.
    EXPECT_NEAR(r.d_k, 7.0 / 30.0, 2e-5);
    EXPECT_NEAR(r.d_k, 1.0 / 3.0 - std_normal_cdf(-q), 1e-15);
    EXPECT_THROW(empirical_kolmogorov(std::vector<double>{}), std::invalid_argument);
}

TEST(EmpiricalKolmogorov, PermutationInvariantAndBounded) {
    std::vector<double> x(500);
    std::mt19937_64 gen(2);
    for (auto& v : x) v = std::normal_distribution<double>(0.3, 2.0)(gen);
    const auto a = empirical_kolmogorov(x);
    std::shuffle(x.begin(), x.end(), gen);
    const auto b = empirical_kolmogorov(x);
    EXPECT_EQ(a.d_k, b.d_k);
    EXPECT_GE(a.d_k, 0.0);
    EXPECT_LE(a.d_k, 1.0);
    EXPECT_EQ(a.n, 500u);
    EXPECT_DOUBLE_EQ(a.dkw_eps_99, dkw_epsilon(500, 0.01));
}

TEST(EmpiricalKolmogorov, ExactNormalWithinDkw) {
    const auto w = run_replicates(NormalModel{}, {100000, 1, 1});
    EXPECT_LE(empirical_kolmogorov(w).d_k, 0.00515);
}

TEST(TwoSample, TiesAndShifts) {
    const std::vector<double> a{0, 0, 1, 1};
    const std::vector<double> b{0, 1, 1, 1};
    EXPECT_DOUBLE_EQ(two_sample_kolmogorov(a, b), 0.25);
    EXPECT_DOUBLE_EQ(two_sample_kolmogorov(a, a), 0.0);
    const std::vector<double> c{5, 6};
    EXPECT_DOUBLE_EQ(two_sample_kolmogorov(a, c), 1.0);
}

TEST(RateFit, Examples) {
    std::vector<RatePoint> exact;
    for (double s : {4.0, 16.0, 64.0}) exact.push_back({s, 1.0 / std::sqrt(s)});
    const auto f = loglog_rate_fit(exact);
    EXPECT_NEAR(f.slope, -0.5, 1e-14);
    EXPECT_NEAR(f.r2, 1.0, 1e-14);

    const std::vector<RatePoint> flat{{1, 2}, {2, 2}, {3, 2}};
    EXPECT_NEAR(loglog_rate_fit(flat).slope, 0.0, 1e-14);

    std::mt19937_64 gen(4);
    std::normal_distribution<double> noise(0.0, 0.01);
    std::vector<RatePoint> noisy;
    for (double s : {16.0, 64.0, 256.0, 1024.0}) noisy.push_back({s, 3.0 / std::sqrt(s) * (1.0 + noise(gen))});
    const auto g = loglog_rate_fit(noisy);
    EXPECT_GE(g.slope, -0.55);
    EXPECT_LE(g.slope, -0.45);

    EXPECT_THROW(loglog_rate_fit(std::vector<RatePoint>{{1, 1}, {2, 1}}), std::invalid_argument);
    EXPECT_THROW(loglog_rate_fit(std::vector<RatePoint>{{1, 1}, {2, 0}, {3, 1}}), std::invalid_argument);
}

TEST(Correlation, IndependentAndLinear) {
    std::mt19937_64 gen(6);
    std::normal_distribution<double> n01;
    std::vector<double> x(20000), y(20000), z(20000);
    for (std::size_t i = 0; i < x.size(); ++i) {
        x[i] = n01(gen);
        y[i] = n01(gen);
        z[i] = 2.0 * x[i] + 1.0;
    }
    const auto r = correlation_with_se(x, y);
    EXPECT_LE(std::abs(r.r), 4.0 * r.se);
    EXPECT_NEAR(correlation_with_se(x, z).r, 1.0, 1e-12);
}

TEST(SteinIdentity, ConstantFunctionIsMinusMeanW) {
    std::vector<SteinCouplingDraw> draws(1000);
    std::mt19937_64 gen(7);
    std::vector<double> w;
    for (auto& d : draws) {
        d.w = std::normal_distribution<double>(0.1, 1.0)(gen);
        d.g = std::normal_distribution<double>()(gen);
        d.w_prime = d.w + 0.3;
        d.delta = d.w_prime - d.w;
        w.push_back(d.w);
    }
    const auto e = stein_identity_residual(draws, TestFunction::one);
    EXPECT_EQ(e.mean, -mean_with_se(w).mean);
}

TEST(SteinIdentity, ParsesTestFunctions) {
    EXPECT_EQ(parse_test_function("1"), TestFunction::one);
    EXPECT_EQ(parse_test_function("w"), TestFunction::identity);
    EXPECT_EQ(parse_test_function("x2"), TestFunction::square);
    EXPECT_EQ(parse_test_function("cos"), TestFunction::cosine);
    EXPECT_THROW(parse_test_function("sin"), std::invalid_argument);
}

TEST(PalmIdentity, TwoPointAtomIsExact) {
    // Xi({a}) uniform on {0, 2}: E Xi^2 = 2 and E Xi_a Lambda = 2 * 1.
    const unsigned values[] = {0, 2};
    const models::CrmModel m({models::AtomLaw::uniform_on(values)});
    const auto e = palm_identity_residual(m, TestFunction::identity, {20000, 3, 1});
    EXPECT_LE(std::abs(e.mean), 4.0 * e.se + 1e-15);
    const auto one = palm_identity_residual(m, TestFunction::one, {20000, 3, 1});
    EXPECT_LE(std::abs(one.mean), 4.0 * one.se);
}

TEST(PalmIdentity, PoissonAtom) {
    const models::CrmModel m({models::AtomLaw::truncated_poisson(2.0, 50)});
    for (auto f : {TestFunction::one, TestFunction::identity, TestFunction::square}) {
        const auto e = palm_identity_residual(m, f, {100000, 4, 1});
        EXPECT_LE(std::abs(e.mean), 4.0 * e.se) << to_string(f);
    }
}

TEST(PalmIdentity, EmptyCarrierThrows) {
    std::vector<PalmPanel> panels(3);
    EXPECT_THROW(palm_identity_residual(panels, TestFunction::one), std::invalid_argument);
}
