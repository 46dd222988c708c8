#pragma once

#include <cstdint>

#include "steinkit/geometry/point.hpp"

namespace steinkit::geometry {

/// Sign of the orientation of (a, b, c): +1 counter-clockwise, -1 clockwise,
/// 0 collinear. Floating-point filter with an exact rational fallback.
int orient2d(const Point& a, const Point& b, const Point& c);

/// Sign of the in-circle determinant: +1 when d is strictly inside the
/// circle through the counter-clockwise triangle (a, b, c), 0 on it.
int incircle(const Point& a, const Point& b, const Point& c, const Point& d);

/// In-circle test under a symbolic perturbation of the lifted coordinate
/// |p|^2 + eps_i, where lower indices carry larger perturbations. Never
/// returns 0 unless all four points are collinear.
int incircle_perturbed(const Point& a, std::uint32_t ia, const Point& b, std::uint32_t ib, const Point& c,
                       std::uint32_t ic, const Point& d, std::uint32_t id);

/// Center of the circle through a, b, c (non-collinear).
Point circumcenter(const Point& a, const Point& b, const Point& c);

}  // namespace steinkit::geometry
