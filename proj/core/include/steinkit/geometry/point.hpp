#pragma once

#include <cmath>
#include <stdexcept>

namespace steinkit::geometry {

struct Point {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Point&, const Point&) = default;
};

inline double distance(const Point& a, const Point& b) { return std::hypot(a.x - b.x, a.y - b.y); }

/// Q_lambda is the centered closed square of side sqrt(lambda); points are
/// simulated on the square enlarged by `padding` on every side.
struct WindowConfig {
    double lambda = 1.0;
    double padding = 6.0;

    void validate() const {
        if (!(lambda > 0.0) || !std::isfinite(lambda)) throw std::invalid_argument("window lambda must be positive");
        if (!(padding >= 0.0) || !std::isfinite(padding)) throw std::invalid_argument("padding must be >= 0");
    }

    double half_side() const { return 0.5 * std::sqrt(lambda); }
    double region_half_side() const { return half_side() + padding; }

    bool in_window(const Point& p) const {
        const double h = half_side();
        return std::abs(p.x) <= h && std::abs(p.y) <= h;
    }
};

}  // namespace steinkit::geometry
