#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "steinkit/geometry/point.hpp"
#include "steinkit/geometry/tessellation.hpp"

namespace steinkit::geometry {

/// CSV with header "x,y", one point per row, 17 significant digits.
void write_points_csv(std::ostream& os, std::span<const Point> points);
std::vector<Point> read_points_csv(std::istream& is);

/// One line per Voronoi edge: "x0 y0 x1 y1 gen_a gen_b finite". For rays
/// (finite = 0), (x1, y1) is the anchor plus the unit direction.
void write_edge_list(std::ostream& os, const Tessellation& t);

}  // namespace steinkit::geometry
