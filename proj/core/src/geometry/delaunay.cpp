#include "steinkit/geometry/delaunay.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "steinkit/geometry/predicates.hpp"

namespace steinkit::geometry {
namespace {

std::uint64_t hilbert_index(std::uint32_t x, std::uint32_t y, int bits) {
    std::uint64_t d = 0;
    for (std::uint32_t s = std::uint32_t{1} << (bits - 1); s > 0; s >>= 1) {
        const std::uint32_t rx = (x & s) ? 1 : 0;
        const std::uint32_t ry = (y & s) ? 1 : 0;
        d += static_cast<std::uint64_t>(s) * s * ((3 * rx) ^ ry);
        if (ry == 0) {
            if (rx == 1) {
                x = s - 1 - x;
                y = s - 1 - y;
            }
            std::swap(x, y);
        }
        x &= s - 1;
        y &= s - 1;
    }
    return d;
}

}  // namespace

std::vector<std::uint32_t> hilbert_order(std::span<const Point> points) {
    std::vector<std::uint32_t> order(points.size());
    std::iota(order.begin(), order.end(), 0u);
    if (points.size() < 3) return order;
    double xmin = points[0].x, xmax = xmin, ymin = points[0].y, ymax = ymin;
    for (const auto& p : points) {
        xmin = std::min(xmin, p.x);
        xmax = std::max(xmax, p.x);
        ymin = std::min(ymin, p.y);
        ymax = std::max(ymax, p.y);
    }
    constexpr int kBits = 16;
    const double span = std::max({xmax - xmin, ymax - ymin, 1e-300});
    const double scale = ((1u << kBits) - 1) / span;
    std::vector<std::uint64_t> key(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        const auto hx = static_cast<std::uint32_t>((points[i].x - xmin) * scale);
        const auto hy = static_cast<std::uint32_t>((points[i].y - ymin) * scale);
        key[i] = hilbert_index(hx, hy, kBits);
    }
    std::stable_sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) { return key[a] < key[b]; });
    return order;
}

Delaunay::Delaunay(std::span<const Point> points) : n_(points.size()) {
    if (points.empty()) throw std::invalid_argument("triangulation needs at least one point");
    verts_.assign(points.begin(), points.end());
    double xmin = verts_[0].x, xmax = xmin, ymin = verts_[0].y, ymax = ymin;
    for (const auto& p : verts_) {
        if (!std::isfinite(p.x) || !std::isfinite(p.y)) throw std::invalid_argument("non-finite point");
        xmin = std::min(xmin, p.x);
        xmax = std::max(xmax, p.x);
        ymin = std::min(ymin, p.y);
        ymax = std::max(ymax, p.y);
    }
    const double cx = 0.5 * (xmin + xmax);
    const double cy = 0.5 * (ymin + ymax);
    const double r = std::max({xmax - xmin, ymax - ymin, 1.0}) * 1e7;
    verts_.push_back({cx - 2.0 * r, cy - r});
    verts_.push_back({cx + 2.0 * r, cy - r});
    verts_.push_back({cx, cy + 2.0 * r});

    const auto n = static_cast<std::uint32_t>(n_);
    tris_.reserve(2 * n_ + 8);
    Triangle root;
    root.v = {n, n + 1, n + 2};
    root.alive = true;
    tris_.push_back(root);
    in_cavity_.assign(tris_.capacity(), 0);
    fan_start_.assign(n_ + 3, kNone);

    for (std::uint32_t p : hilbert_order(points)) insert(p);
}

std::int32_t Delaunay::new_triangle() {
    if (!free_.empty()) {
        const std::int32_t t = free_.back();
        free_.pop_back();
        return t;
    }
    tris_.emplace_back();
    if (in_cavity_.size() < tris_.size()) in_cavity_.resize(2 * tris_.size(), 0);
    return static_cast<std::int32_t>(tris_.size() - 1);
}

std::int32_t Delaunay::locate(const Point& p) const {
    std::int32_t t = last_;
    // Visibility walk; the rotating start edge prevents cycling.
    for (unsigned step = 0;; ++step) {
        const Triangle& tri = tris_[t];
        bool moved = false;
        for (unsigned k = 0; k < 3; ++k) {
            const unsigned i = (k + step) % 3;
            const Point& a = verts_[tri.v[(i + 1) % 3]];
            const Point& b = verts_[tri.v[(i + 2) % 3]];
            if (orient2d(a, b, p) < 0) {
                t = tri.nbr[i];
                moved = true;
                break;
            }
        }
        if (!moved) return t;
        if (t == kNone) throw std::logic_error("point location left the bounding triangle");
    }
}

bool Delaunay::in_conflict(const Triangle& t, std::uint32_t p) const {
    return incircle_perturbed(verts_[t.v[0]], t.v[0], verts_[t.v[1]], t.v[1], verts_[t.v[2]], t.v[2], verts_[p],
                              p) > 0;
}

void Delaunay::insert(std::uint32_t p) {
    const Point& pt = verts_[p];
    const std::int32_t t0 = locate(pt);
    for (std::uint32_t v : tris_[t0].v) {
        if (verts_[v] == pt) throw std::invalid_argument("duplicate point in triangulation input");
    }

    // Grow the cavity of triangles whose circumcircle contains p.
    cavity_.clear();
    stack_.clear();
    stack_.push_back(t0);
    in_cavity_[t0] = 1;
    while (!stack_.empty()) {
        const std::int32_t t = stack_.back();
        stack_.pop_back();
        cavity_.push_back(t);
        for (std::int32_t nb : tris_[t].nbr) {
            if (nb == kNone || in_cavity_[nb]) continue;
            if (in_conflict(tris_[nb], p)) {
                in_cavity_[nb] = 1;
                stack_.push_back(nb);
            }
        }
    }

    // Fan p over the cavity boundary. Boundary edge (u, w) of a cavity
    // triangle becomes triangle (u, w, p).
    struct Boundary {
        std::uint32_t u, w;
        std::int32_t outer, old;
    };
    std::vector<Boundary> boundary;
    boundary.reserve(cavity_.size() + 2);
    for (std::int32_t t : cavity_) {
        const Triangle& tri = tris_[t];
        for (unsigned i = 0; i < 3; ++i) {
            const std::int32_t nb = tri.nbr[i];
            if (nb != kNone && in_cavity_[nb]) continue;
            boundary.push_back({tri.v[(i + 1) % 3], tri.v[(i + 2) % 3], nb, t});
        }
    }
    std::vector<std::int32_t> created(boundary.size());
    for (std::size_t k = 0; k < boundary.size(); ++k) {
        const auto& e = boundary[k];
        const std::int32_t t = new_triangle();
        Triangle& tri = tris_[t];
        tri.v = {e.u, e.w, p};
        tri.nbr = {kNone, kNone, e.outer};
        tri.alive = true;
        created[k] = t;
        fan_start_[e.u] = t;
        if (e.outer != kNone) {
            Triangle& o = tris_[e.outer];
            for (auto& x : o.nbr) {
                if (x == e.old) {
                    x = t;
                    break;
                }
            }
        }
    }
    // Triangle (u, w, p): across (w, p) lies the fan triangle starting at w;
    // across (p, u) lies the one ending at u.
    for (std::size_t k = 0; k < boundary.size(); ++k) {
        const std::int32_t t = created[k];
        const std::int32_t next = fan_start_[boundary[k].w];
        tris_[t].nbr[0] = next;
        tris_[next].nbr[1] = t;
    }
    for (const auto& e : boundary) fan_start_[e.u] = kNone;
    // Cavity slots are recycled only now, so no live triangle still refers
    // to an id handed out above.
    for (std::int32_t t : cavity_) {
        in_cavity_[t] = 0;
        tris_[t].alive = false;
        free_.push_back(t);
    }
    last_ = created.front();
}

}  // namespace steinkit::geometry
