#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "steinkit/geometry/point.hpp"

namespace steinkit::geometry {

/// One Voronoi edge, dual to the Delaunay edge (a, b). Finite edges run
/// from p0 to p1. For infinite edges p0 is a finite anchor (a Voronoi
/// vertex, or the midpoint of ab for a full bisector line) and p1 - p0 is
/// the unit direction of the ray.
struct VoronoiEdge {
    Point p0;
    Point p1;
    std::uint32_t a = 0;
    std::uint32_t b = 0;
    bool finite = false;

    double length() const { return finite ? distance(p0, p1) : std::numeric_limits<double>::infinity(); }
};

struct Tessellation {
    std::vector<Point> generators;
    std::vector<std::array<std::uint32_t, 3>> triangles;      ///< Delaunay triangles, counter-clockwise
    std::vector<std::array<std::int32_t, 3>> adjacency;       ///< neighbor opposite each vertex, -1 on the hull
    std::vector<VoronoiEdge> edges;
    std::vector<double> half_length;  ///< L(x, X) per generator
    double region_half_side = 0.0;    ///< points were simulated on [-h, h]^2

    /// Sum of finite edge lengths, each edge counted once.
    double total_finite_length() const;
};

/// Throws std::invalid_argument on empty or duplicate input. When
/// `region_half_side` is 0 the bounding box of the points is used.
Tessellation build_tessellation(std::span<const Point> points, double region_half_side = 0.0);

/// Sum of L(x, X) over generators in Q_lambda. Throws if the window is not
/// inside the simulated region.
double total_edge_statistic(const Tessellation& t, const WindowConfig& window);

struct SectorRadius {
    Point center;
    double t = std::numeric_limits<double>::infinity();
};

/// Smallest r such that each of the twelve 30-degree sectors around
/// `center` (the first bisected by the positive x-axis) holds a point of
/// `points` within distance r. Points equal to the center are ignored.
SectorRadius sector_radius(const Point& center, std::span<const Point> points);

/// Sector index in [0, 12) of direction (dx, dy); sector i covers angles
/// [-15 + 30 i, 15 + 30 i) degrees.
int sector_of(double dx, double dy);

/// L(lambda; points + {alpha}) - L(lambda; points), both by full rebuild.
/// Throws if alpha coincides with a point.
double palm_edge_delta(std::span<const Point> points, const Point& alpha, const WindowConfig& window);

}  // namespace steinkit::geometry
