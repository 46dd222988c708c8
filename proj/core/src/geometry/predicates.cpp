#include "steinkit/geometry/predicates.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include <boost/multiprecision/cpp_int.hpp>

namespace steinkit::geometry {
namespace {

using Rational = boost::multiprecision::cpp_rational;

// Shewchuk's first-stage error bounds.
constexpr double kEps = 0x1.0p-53;
constexpr double kOrientBound = (3.0 + 16.0 * kEps) * kEps;
constexpr double kIncircleBound = (10.0 + 96.0 * kEps) * kEps;

int sign_of(const Rational& v) { return v > 0 ? 1 : (v < 0 ? -1 : 0); }

int orient_exact(const Point& a, const Point& b, const Point& c) {
    const Rational acx = Rational(a.x) - Rational(c.x);
    const Rational bcx = Rational(b.x) - Rational(c.x);
    const Rational acy = Rational(a.y) - Rational(c.y);
    const Rational bcy = Rational(b.y) - Rational(c.y);
    return sign_of(acx * bcy - acy * bcx);
}

int incircle_exact(const Point& a, const Point& b, const Point& c, const Point& d) {
    const Rational dx(d.x), dy(d.y);
    const Rational adx = Rational(a.x) - dx, ady = Rational(a.y) - dy;
    const Rational bdx = Rational(b.x) - dx, bdy = Rational(b.y) - dy;
    const Rational cdx = Rational(c.x) - dx, cdy = Rational(c.y) - dy;
    const Rational alift = adx * adx + ady * ady;
    const Rational blift = bdx * bdx + bdy * bdy;
    const Rational clift = cdx * cdx + cdy * cdy;
    const Rational det = alift * (bdx * cdy - cdx * bdy) + blift * (cdx * ady - adx * cdy) +
                         clift * (adx * bdy - bdx * ady);
    return sign_of(det);
}

}  // namespace

int orient2d(const Point& a, const Point& b, const Point& c) {
    const double left = (a.x - c.x) * (b.y - c.y);
    const double right = (a.y - c.y) * (b.x - c.x);
    const double det = left - right;
    const double bound = kOrientBound * (std::abs(left) + std::abs(right));
    if (det > bound) return 1;
    if (-det > bound) return -1;
    return orient_exact(a, b, c);
}

int incircle(const Point& a, const Point& b, const Point& c, const Point& d) {
    const double adx = a.x - d.x, ady = a.y - d.y;
    const double bdx = b.x - d.x, bdy = b.y - d.y;
    const double cdx = c.x - d.x, cdy = c.y - d.y;
    const double bdxcdy = bdx * cdy, cdxbdy = cdx * bdy;
    const double cdxady = cdx * ady, adxcdy = adx * cdy;
    const double adxbdy = adx * bdy, bdxady = bdx * ady;
    const double alift = adx * adx + ady * ady;
    const double blift = bdx * bdx + bdy * bdy;
    const double clift = cdx * cdx + cdy * cdy;
    const double det = alift * (bdxcdy - cdxbdy) + blift * (cdxady - adxcdy) + clift * (adxbdy - bdxady);
    const double permanent = (std::abs(bdxcdy) + std::abs(cdxbdy)) * alift +
                             (std::abs(cdxady) + std::abs(adxcdy)) * blift +
                             (std::abs(adxbdy) + std::abs(bdxady)) * clift;
    const double bound = kIncircleBound * permanent;
    if (det > bound) return 1;
    if (-det > bound) return -1;
    return incircle_exact(a, b, c, d);
}

int incircle_perturbed(const Point& a, std::uint32_t ia, const Point& b, std::uint32_t ib, const Point& c,
                       std::uint32_t ic, const Point& d, std::uint32_t id) {
    const int s = incircle(a, b, c, d);
    if (s != 0) return s;
    // Coefficient of eps_i in the expansion along the lifted column.
    struct Term {
        std::uint32_t index;
        int slot;
    };
    std::array<Term, 4> order{{{ia, 0}, {ib, 1}, {ic, 2}, {id, 3}}};
    std::sort(order.begin(), order.end(), [](const Term& x, const Term& y) { return x.index < y.index; });
    for (const auto& t : order) {
        int coef = 0;
        switch (t.slot) {
        case 0: coef = orient2d(b, c, d); break;
        case 1: coef = -orient2d(a, c, d); break;
        case 2: coef = orient2d(a, b, d); break;
        case 3: coef = -orient2d(a, b, c); break;
        }
        if (coef != 0) return coef;
    }
    return 0;
}

Point circumcenter(const Point& a, const Point& b, const Point& c) {
    const double bx = b.x - a.x, by = b.y - a.y;
    const double cx = c.x - a.x, cy = c.y - a.y;
    const double d = 2.0 * (bx * cy - by * cx);
    const double b2 = bx * bx + by * by;
    const double c2 = cx * cx + cy * cy;
    return {a.x + (cy * b2 - by * c2) / d, a.y + (bx * c2 - cx * b2) / d};
}

}  // namespace steinkit::geometry
