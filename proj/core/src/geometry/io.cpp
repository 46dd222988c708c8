#include "steinkit/geometry/io.hpp"

#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace steinkit::geometry {

void write_points_csv(std::ostream& os, std::span<const Point> points) {
    const auto old = os.precision(17);
    os << "x,y\n";
    for (const auto& p : points) os << p.x << ',' << p.y << '\n';
    os.precision(old);
}

std::vector<Point> read_points_csv(std::istream& is) {
    std::vector<Point> pts;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        if (line.empty()) continue;
        if (line_no == 1 && line.rfind("x", 0) == 0) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw std::invalid_argument("points CSV line " + std::to_string(line_no));
        try {
            pts.push_back({std::stod(line.substr(0, comma)), std::stod(line.substr(comma + 1))});
        } catch (const std::exception&) {
            throw std::invalid_argument("points CSV line " + std::to_string(line_no));
        }
    }
    return pts;
}

void write_edge_list(std::ostream& os, const Tessellation& t) {
    const auto old = os.precision(17);
    for (const auto& e : t.edges) {
        os << e.p0.x << ' ' << e.p0.y << ' ' << e.p1.x << ' ' << e.p1.y << ' ' << e.a << ' ' << e.b << ' '
           << (e.finite ? 1 : 0) << '\n';
    }
    os.precision(old);
}

}  // namespace steinkit::geometry
