#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>
#include <gtest/gtest.h>

#include "steinkit/estimators.hpp"
#include "steinkit/geometry/delaunay.hpp"
#include "steinkit/geometry/io.hpp"
#include "steinkit/geometry/predicates.hpp"
#include "steinkit/geometry/sampling.hpp"
#include "steinkit/geometry/tessellation.hpp"
#include "steinkit/rng.hpp"

using namespace steinkit;
using namespace steinkit::geometry;

namespace {

std::vector<Point> uniform_points(std::size_t n, std::uint64_t seed, double side = 10.0) {
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> u(0.0, side);
    std::vector<Point> pts(n);
    for (auto& p : pts) p = {u(gen), u(gen)};
    return pts;
}

std::vector<Point> lattice(int k) {
    std::vector<Point> pts;
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) pts.push_back({static_cast<double>(i), static_cast<double>(j)});
    return pts;
}

void expect_empty_circumcircles(const Tessellation& t) {
    const auto& g = t.generators;
    for (const auto& tri : t.triangles) {
        ASSERT_EQ(orient2d(g[tri[0]], g[tri[1]], g[tri[2]]), 1);
        for (std::size_t i = 0; i < g.size(); ++i) {
            if (i == tri[0] || i == tri[1] || i == tri[2]) continue;
            ASSERT_LE(incircle(g[tri[0]], g[tri[1]], g[tri[2]], g[i]), 0) << "point " << i;
        }
    }
}

std::size_t hull_edges(const Tessellation& t) {
    std::size_t h = 0;
    for (const auto& adj : t.adjacency)
        for (auto a : adj) h += a < 0 ? 1 : 0;
    return h;
}

// Expected number of |z|^2 <= x among the eigenvalues of an n x n Ginibre
// matrix: the moduli squared are independent Gamma(k, 1), k = 1..n.
double kostlan_expected_count(std::size_t n, double x) {
    double s = 0.0;
    for (std::size_t k = 1; k <= n; ++k) s += boost::math::gamma_p(static_cast<double>(k), x);
    return s;
}

template <class Sampler>
void check_kostlan(std::size_t n, std::size_t reps, std::uint64_t seed, Sampler sample) {
    const double xs[] = {0.5, 0.5 * static_cast<double>(n), static_cast<double>(n), 1.5 * static_cast<double>(n)};
    std::vector<std::vector<double>> counts(std::size(xs));
    for (std::size_t r = 0; r < reps; ++r) {
        Rng rng(stream_seed(seed, r));
        const auto ev = sample(n, rng);
        ASSERT_EQ(ev.size(), n);
        for (std::size_t j = 0; j < std::size(xs); ++j) {
            double c = 0.0;
            for (const auto& z : ev) c += z.x * z.x + z.y * z.y <= xs[j] ? 1.0 : 0.0;
            counts[j].push_back(c);
        }
    }
    for (std::size_t j = 0; j < std::size(xs); ++j) {
        const auto e = mean_with_se(counts[j]);
        EXPECT_LE(std::abs(e.mean - kostlan_expected_count(n, xs[j])), 4 * e.se + 1e-12)
            << "n = " << n << ", x = " << xs[j];
    }
}

}  // namespace

// ---------------------------------------------------------------- predicates

TEST(Predicates, OrientationExamples) {
    EXPECT_EQ(orient2d({0, 0}, {1, 0}, {0, 1}), 1);
    EXPECT_EQ(orient2d({0, 0}, {0, 1}, {1, 0}), -1);
    EXPECT_EQ(orient2d({0, 0}, {1, 1}, {3, 3}), 0);
}

TEST(Predicates, OrientationNearDegenerate) {
    // orient((12, 12), (24, 24), c) = 12 (c.y - c.x) exactly.
    const double ulp = std::ldexp(1.0, -53);
    for (int i = 0; i < 64; ++i) {
        for (int j = 0; j < 64; ++j) {
            const Point c{0.5 + i * ulp, 0.5 + j * ulp};
            const int expected = (j > i) - (j < i);
            ASSERT_EQ(orient2d({12, 12}, {24, 24}, c), expected) << i << "," << j;
            ASSERT_EQ(orient2d({24, 24}, {12, 12}, c), -expected);
        }
    }
}

TEST(Predicates, IncircleExamples) {
    const Point a{1, 0}, b{0, 1}, c{-1, 0};
    EXPECT_EQ(incircle(a, b, c, {0, 0}), 1);
    EXPECT_EQ(incircle(a, b, c, {2, 2}), -1);
    EXPECT_EQ(incircle(a, b, c, {0, -1}), 0);
    EXPECT_NE(incircle_perturbed(a, 0, b, 1, c, 2, {0, -1}, 3), 0);
    EXPECT_EQ(incircle_perturbed(a, 0, b, 1, c, 2, {0, 0}, 3), 1);
}

TEST(Predicates, Circumcenter) {
    const auto o = circumcenter({1, 0}, {0, 1}, {-1, 0});
    EXPECT_NEAR(o.x, 0.0, 1e-15);
    EXPECT_NEAR(o.y, 0.0, 1e-15);
}

// ---------------------------------------------------------------- delaunay

TEST(Delaunay, RandomPointsHaveEmptyCircumcircles) {
    for (std::uint64_t seed : {1, 2, 3}) {
        const auto pts = uniform_points(300, seed);
        const auto t = build_tessellation(pts);
        expect_empty_circumcircles(t);
        EXPECT_EQ(t.triangles.size(), 2 * pts.size() - 2 - hull_edges(t));
    }
}

TEST(Delaunay, CocircularLattice) {
    const auto pts = lattice(8);
    const auto t = build_tessellation(pts);
    expect_empty_circumcircles(t);
    // Every unit square splits into two triangles.
    EXPECT_EQ(t.triangles.size(), 2u * 7u * 7u);
}

TEST(Delaunay, AdjacencyIsSymmetric) {
    const auto t = build_tessellation(uniform_points(200, 4));
    for (std::size_t i = 0; i < t.triangles.size(); ++i) {
        for (int k = 0; k < 3; ++k) {
            const auto n = t.adjacency[i][k];
            if (n < 0) continue;
            bool back = false;
            for (int m = 0; m < 3; ++m) back |= t.adjacency[n][m] == static_cast<std::int32_t>(i);
            EXPECT_TRUE(back);
        }
    }
}

TEST(Delaunay, Errors) {
    const std::vector<Point> dup{{0, 0}, {1, 0}, {0, 0}};
    EXPECT_THROW(build_tessellation(dup), std::invalid_argument);
    EXPECT_THROW(build_tessellation(std::vector<Point>{}), std::invalid_argument);
    const std::vector<Point> bad{{0, 0}, {std::nan(""), 1}};
    EXPECT_THROW(build_tessellation(bad), std::invalid_argument);
}

TEST(Delaunay, HilbertOrderIsAPermutation) {
    const auto pts = uniform_points(1000, 5);
    auto order = hilbert_order(pts);
    std::sort(order.begin(), order.end());
    for (std::uint32_t i = 0; i < order.size(); ++i) ASSERT_EQ(order[i], i);
}

// ---------------------------------------------------------------- tessellation

TEST(Tessellation, FivePointSquare) {
    const std::vector<Point> pts{{0, 0}, {2, 0}, {-2, 0}, {0, 2}, {0, -2}};
    const auto t = build_tessellation(pts, 3.0);
    EXPECT_NEAR(t.half_length[0], 4.0, 1e-12);
    for (std::size_t i = 1; i < 5; ++i) EXPECT_NEAR(t.half_length[i], 1.0, 1e-12);
    EXPECT_NEAR(t.total_finite_length(), 8.0, 1e-12);
    EXPECT_NEAR(total_edge_statistic(t, {36.0, 0.0}), 8.0, 1e-12);
}

TEST(Tessellation, NoFiniteEdges) {
    const std::vector<Point> pair{{0, 0}, {1, 0}};
    const auto t = build_tessellation(pair);
    EXPECT_EQ(t.total_finite_length(), 0.0);
    ASSERT_EQ(t.edges.size(), 1u);
    EXPECT_FALSE(t.edges[0].finite);
    const std::vector<Point> tri{{0, 0}, {1, 0}, {0.3, 1.1}};
    const auto u = build_tessellation(tri);
    EXPECT_EQ(u.total_finite_length(), 0.0);
    for (double l : u.half_length) EXPECT_EQ(l, 0.0);
}

TEST(Tessellation, HalfLengthsSumToFiniteLength) {
    const auto t = build_tessellation(uniform_points(500, 6));
    double sum = 0.0;
    for (double l : t.half_length) sum += l;
    EXPECT_NEAR(sum, t.total_finite_length(), 1e-9 * sum);
}

TEST(Tessellation, WindowMustFitTheRegion) {
    const std::vector<Point> pts{{0, 0}, {2, 0}, {-2, 0}, {0, 2}, {0, -2}};
    const auto t = build_tessellation(pts, 3.0);
    EXPECT_THROW(total_edge_statistic(t, {64.0, 0.0}), std::invalid_argument);
}

TEST(SectorRadius, Sectors) {
    EXPECT_EQ(sector_of(1, 0), 0);
    EXPECT_EQ(sector_of(0, 1), 3);
    EXPECT_EQ(sector_of(-1, 0), 6);
    EXPECT_EQ(sector_of(0, -1), 9);
    const double d = std::numbers::pi / 180.0;
    EXPECT_EQ(sector_of(std::cos(-14.9 * d), std::sin(-14.9 * d)), 0);
    EXPECT_EQ(sector_of(std::cos(15.1 * d), std::sin(15.1 * d)), 1);
    EXPECT_EQ(sector_of(std::cos(-15.1 * d), std::sin(-15.1 * d)), 11);
}

TEST(SectorRadius, RingOfIncreasingRadii) {
    std::vector<Point> pts;
    for (int i = 0; i < 12; ++i) {
        const double a = i * std::numbers::pi / 6.0;
        pts.push_back({(i + 1) * std::cos(a), (i + 1) * std::sin(a)});
    }
    pts.push_back({0, 0});
    EXPECT_NEAR(sector_radius({0, 0}, pts).t, 12.0, 1e-12);
    pts.pop_back();
    pts.pop_back();
    EXPECT_TRUE(std::isinf(sector_radius({0, 0}, pts).t));
}

TEST(SectorRadius, CellInsideBall) {
    Rng rng(7);
    const WindowConfig w{64.0, 6.0};
    const auto pts = sample_poisson(w, 1.0, rng);
    const auto t = build_tessellation(pts, w.region_half_side());
    std::vector<std::vector<Point>> vertices(pts.size());
    for (const auto& e : t.edges) {
        if (!e.finite) continue;
        for (auto g : {e.a, e.b}) {
            vertices[g].push_back(e.p0);
            vertices[g].push_back(e.p1);
        }
    }
    int checked = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (!w.in_window(pts[i])) continue;
        const auto s = sector_radius(pts[i], pts);
        ASSERT_TRUE(std::isfinite(s.t));
        for (const auto& v : vertices[i]) EXPECT_LE(distance(v, pts[i]), s.t * (1 + 1e-12));
        ++checked;
    }
    EXPECT_GT(checked, 30);
}

TEST(SectorRadius, LawUnderUnitIntensity) {
    // P(T <= s) = (1 - exp(-pi s^2 / 12))^12 at the origin of a Poisson process.
    const std::size_t n = 20000;
    std::vector<double> u;
    for (std::size_t r = 0; r < n; ++r) {
        Rng rng(stream_seed(8, r));
        const auto pts = sample_poisson_rect(-12, 12, -12, 12, 1.0, rng);
        const double t = sector_radius({0, 0}, pts).t;
        u.push_back(std::pow(-std::expm1(-std::numbers::pi * t * t / 12.0), 12));
    }
    std::sort(u.begin(), u.end());
    double d = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        d = std::max({d, std::abs(u[i] - static_cast<double>(i) / n), std::abs(u[i] - static_cast<double>(i + 1) / n)});
    EXPECT_LE(d, dkw_epsilon(n, 0.01));
}

TEST(PalmDelta, LocalRebuildMatchesOutsideThreeT) {
    Rng rng(9);
    const WindowConfig w{64.0, 6.0};
    const auto pts = sample_poisson(w, 1.0, rng);
    const Point alpha{0.25, -0.5};
    const auto t0 = build_tessellation(pts, w.region_half_side());
    auto with = pts;
    with.push_back(alpha);
    const auto t1 = build_tessellation(with, w.region_half_side());
    const double ta = sector_radius(alpha, pts).t;
    ASSERT_TRUE(std::isfinite(ta));
    double y = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (distance(pts[i], alpha) > 3 * ta) {
            EXPECT_NEAR(t1.half_length[i], t0.half_length[i], 1e-12) << "generator " << i;
        } else if (w.in_window(pts[i])) {
            y += t1.half_length[i] - t0.half_length[i];
        }
    }
    y += t1.half_length.back();
    EXPECT_NEAR(palm_edge_delta(pts, alpha, w), y, 1e-10);
    EXPECT_THROW(palm_edge_delta(pts, pts[0], w), std::invalid_argument);
}

// ---------------------------------------------------------------- sampling

TEST(Sampling, PoissonCounts) {
    const WindowConfig w{16.0, 2.0};
    std::vector<double> counts;
    for (std::uint64_t r = 0; r < 5000; ++r) {
        Rng rng(stream_seed(10, r));
        const auto pts = sample_poisson(w, 2.0, rng);
        for (const auto& p : pts) {
            ASSERT_LE(std::abs(p.x), w.region_half_side());
            ASSERT_LE(std::abs(p.y), w.region_half_side());
        }
        counts.push_back(static_cast<double>(pts.size()));
    }
    const double expected = 2.0 * 64.0;
    const auto m = mean_with_se(counts);
    const auto v = variance_with_se(counts);
    EXPECT_LE(std::abs(m.mean - expected), 4 * m.se);
    EXPECT_LE(std::abs(v.mean - expected), 4 * v.se);
}

TEST(Sampling, GinibreSingleEntry) {
    std::vector<double> r2;
    for (std::uint64_t r = 0; r < 50000; ++r) {
        Rng rng(stream_seed(11, r));
        const auto ev = sample_ginibre(1, rng);
        ASSERT_EQ(ev.size(), 1u);
        r2.push_back(ev[0].x * ev[0].x + ev[0].y * ev[0].y);
    }
    const auto m = mean_with_se(r2);
    EXPECT_LE(std::abs(m.mean - 1.0), 4 * m.se);
}

TEST(Sampling, GinibreKostlan) {
    check_kostlan(6, 20000, 12, [](std::size_t n, Rng& rng) { return sample_ginibre(n, rng); });
    check_kostlan(40, 2000, 13, [](std::size_t n, Rng& rng) { return sample_ginibre(n, rng); });
}

TEST(Sampling, GinibreDenseKostlan) {
    check_kostlan(6, 20000, 14, [](std::size_t n, Rng& rng) { return sample_ginibre_dense(n, rng); });
}

// ---------------------------------------------------------------- io

TEST(Io, PointRoundTrip) {
    const auto pts = uniform_points(100, 15);
    std::stringstream ss;
    write_points_csv(ss, pts);
    EXPECT_EQ(read_points_csv(ss), pts);
}

TEST(Io, EdgeListHasOneLinePerEdge) {
    const std::vector<Point> pts{{0, 0}, {2, 0}, {-2, 0}, {0, 2}, {0, -2}};
    const auto t = build_tessellation(pts, 3.0);
    std::stringstream ss;
    write_edge_list(ss, t);
    std::size_t lines = 0;
    for (std::string line; std::getline(ss, line);) ++lines;
    EXPECT_EQ(lines, t.edges.size());
}

TEST(Io, RejectsMalformedInput) {
    std::stringstream bad("x,y\n1,2\n3\n");
    EXPECT_THROW(read_points_csv(bad), std::invalid_argument);
}
