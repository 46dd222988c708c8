#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "steinkit/geometry/point.hpp"

namespace steinkit::geometry {

/// Delaunay triangulation by incremental Bowyer-Watson insertion inside a
/// large bounding triangle. Vertices n, n+1, n+2 are the bounding vertices.
class Delaunay {
public:
    static constexpr std::int32_t kNone = -1;

    struct Triangle {
        std::array<std::uint32_t, 3> v{};  ///< counter-clockwise
        std::array<std::int32_t, 3> nbr{kNone, kNone, kNone};  ///< nbr[i] is opposite v[i]
        bool alive = false;
    };

    /// Throws std::invalid_argument on duplicate points or non-finite input.
    explicit Delaunay(std::span<const Point> points);

    std::size_t point_count() const noexcept { return n_; }
    const std::vector<Point>& vertices() const noexcept { return verts_; }
    const std::vector<Triangle>& triangles() const noexcept { return tris_; }

    /// True when every vertex of the triangle is an input point.
    bool is_real(const Triangle& t) const noexcept {
        return t.v[0] < n_ && t.v[1] < n_ && t.v[2] < n_;
    }

private:
    void insert(std::uint32_t p);
    std::int32_t locate(const Point& p) const;
    bool in_conflict(const Triangle& t, std::uint32_t p) const;
    std::int32_t new_triangle();

    std::size_t n_;
    std::vector<Point> verts_;
    std::vector<Triangle> tris_;
    std::vector<std::int32_t> free_;
    std::int32_t last_ = 0;

    // Insertion scratch.
    std::vector<std::int32_t> cavity_;
    std::vector<std::int32_t> stack_;
    std::vector<std::uint8_t> in_cavity_;
    std::vector<std::int32_t> fan_start_;
};

/// Order of `points` along a Hilbert curve over their bounding box.
std::vector<std::uint32_t> hilbert_order(std::span<const Point> points);

}  // namespace steinkit::geometry
