#include "steinkit/geometry/tessellation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "steinkit/geometry/delaunay.hpp"
#include "steinkit/geometry/predicates.hpp"

namespace steinkit::geometry {

double Tessellation::total_finite_length() const {
    double total = 0.0;
    for (const auto& e : edges) {
        if (e.finite) total += e.length();
    }
    return total;
}

Tessellation build_tessellation(std::span<const Point> points, double region_half_side) {
    const Delaunay dt(points);
    const auto n = static_cast<std::uint32_t>(points.size());
    const auto& tris = dt.triangles();

    Tessellation out;
    out.generators.assign(points.begin(), points.end());
    out.half_length.assign(points.size(), 0.0);
    if (region_half_side > 0.0) {
        out.region_half_side = region_half_side;
    } else {
        for (const auto& p : points) {
            out.region_half_side = std::max({out.region_half_side, std::abs(p.x), std::abs(p.y)});
        }
    }

    std::vector<std::int32_t> real_id(tris.size(), -1);
    std::vector<Point> centers(tris.size());
    for (std::size_t t = 0; t < tris.size(); ++t) {
        if (!tris[t].alive || !dt.is_real(tris[t])) continue;
        real_id[t] = static_cast<std::int32_t>(out.triangles.size());
        out.triangles.push_back(tris[t].v);
        const auto& v = tris[t].v;
        centers[t] = circumcenter(points[v[0]], points[v[1]], points[v[2]]);
    }
    out.adjacency.resize(out.triangles.size());
    for (std::size_t t = 0; t < tris.size(); ++t) {
        if (real_id[t] < 0) continue;
        for (int i = 0; i < 3; ++i) {
            const std::int32_t nb = tris[t].nbr[i];
            out.adjacency[real_id[t]][i] = nb >= 0 ? real_id[nb] : -1;
        }
    }

    for (std::size_t t = 0; t < tris.size(); ++t) {
        const auto& tri = tris[t];
        if (!tri.alive) continue;
        for (int i = 0; i < 3; ++i) {
            const std::uint32_t u = tri.v[(i + 1) % 3];
            const std::uint32_t w = tri.v[(i + 2) % 3];
            if (u >= n || w >= n) continue;
            const std::int32_t nb = tri.nbr[i];
            if (nb < 0) throw std::logic_error("Delaunay edge without a second triangle");
            if (static_cast<std::size_t>(nb) < t) continue;  // each edge once

            VoronoiEdge e;
            e.a = std::min(u, w);
            e.b = std::max(u, w);
            const bool here = real_id[t] >= 0;
            const bool there = real_id[nb] >= 0;
            if (here && there) {
                e.finite = true;
                e.p0 = centers[t];
                e.p1 = centers[nb];
                const double half = 0.5 * e.length();
                out.half_length[u] += half;
                out.half_length[w] += half;
            } else {
                // Ray away from the real side, or a full bisector.
                Point from = points[u], to = points[w];
                Point anchor{0.5 * (from.x + to.x), 0.5 * (from.y + to.y)};
                if (here) {
                    anchor = centers[t];
                } else if (there) {
                    anchor = centers[nb];
                    std::swap(from, to);
                }
                const double dx = to.x - from.x, dy = to.y - from.y;
                const double len = std::hypot(dx, dy);
                e.p0 = anchor;
                e.p1 = {anchor.x + dy / len, anchor.y - dx / len};
            }
            out.edges.push_back(e);
        }
    }
    return out;
}

double total_edge_statistic(const Tessellation& t, const WindowConfig& window) {
    window.validate();
    if (window.half_side() > t.region_half_side * (1.0 + 1e-12)) {
        throw std::invalid_argument("window Q_lambda exceeds the simulated region");
    }
    double total = 0.0;
    for (std::size_t i = 0; i < t.generators.size(); ++i) {
        if (window.in_window(t.generators[i])) total += t.half_length[i];
    }
    return total;
}

int sector_of(double dx, double dy) {
    double deg = std::atan2(dy, dx) * (180.0 / std::numbers::pi) + 15.0;
    if (deg < 0.0) deg += 360.0;
    const int k = static_cast<int>(std::floor(deg / 30.0));
    return k % 12;
}

SectorRadius sector_radius(const Point& center, std::span<const Point> points) {
    std::array<double, 12> nearest;
    nearest.fill(std::numeric_limits<double>::infinity());
    for (const auto& p : points) {
        if (p == center) continue;
        const double dx = p.x - center.x, dy = p.y - center.y;
        const int s = sector_of(dx, dy);
        nearest[s] = std::min(nearest[s], std::hypot(dx, dy));
    }
    return {center, *std::max_element(nearest.begin(), nearest.end())};
}

double palm_edge_delta(std::span<const Point> points, const Point& alpha, const WindowConfig& window) {
    window.validate();
    const double h = window.region_half_side();
    if (std::abs(alpha.x) > h || std::abs(alpha.y) > h) {
        throw std::invalid_argument("alpha lies outside the simulated region");
    }
    for (const auto& p : points) {
        if (p == alpha) throw std::invalid_argument("alpha coincides with an existing point");
    }
    double before = 0.0;
    if (!points.empty()) before = total_edge_statistic(build_tessellation(points, h), window);
    std::vector<Point> with(points.begin(), points.end());
    with.push_back(alpha);
    const double after = total_edge_statistic(build_tessellation(with, h), window);
    return after - before;
}

}  // namespace steinkit::geometry
