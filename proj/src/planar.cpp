#include "rotlab/planar.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace rotlab {

namespace {

double cross(const Point2& o, const Point2& a, const Point2& b) {
    return (a.x() - o.x()) * (b.y() - o.y()) - (a.y() - o.y()) * (b.x() - o.x());
}

double segment_distance(const Point2& a, const Point2& b, const Point2& p) {
    const Point2 d = b - a;
    const double len2 = d.squaredNorm();
    if (len2 == 0.0) return (p - a).norm();
    const double t = std::clamp((p - a).dot(d) / len2, 0.0, 1.0);
    return (p - (a + t * d)).norm();
}

double boundary_distance(const std::vector<Point2>& poly, const Point2& p) {
    if (poly.size() == 1) return (p - poly.front()).norm();
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < poly.size(); ++i)
        best = std::min(best, segment_distance(poly[i], poly[(i + 1) % poly.size()], p));
    return best;
}

}  // namespace

std::vector<Point2> convex_hull(std::vector<Point2> pts, double dedupe) {
    if (pts.empty()) throw std::invalid_argument("convex hull of an empty set");
    std::sort(pts.begin(), pts.end(), [](const Point2& a, const Point2& b) {
        return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
    });
    std::vector<Point2> unique;
    for (const auto& p : pts) {
        bool dup = false;
        for (auto it = unique.rbegin(); it != unique.rend() && p.x() - it->x() <= dedupe; ++it)
            if ((p - *it).cwiseAbs().maxCoeff() <= dedupe) {
                dup = true;
                break;
            }
        if (!dup) unique.push_back(p);
    }
    if (unique.size() < 3) return unique;

    // A turn counts only when it is clear of rounding: cross products below
    // dedupe times the edge scale are treated as collinear.
    auto strictly_left = [&](const Point2& o, const Point2& a, const Point2& b) {
        const double scale = std::max((a - o).norm(), (b - o).norm());
        return cross(o, a, b) > dedupe * scale;
    };
    std::vector<Point2> hull(2 * unique.size());
    std::size_t k = 0;
    for (const auto& p : unique) {
        while (k >= 2 && !strictly_left(hull[k - 2], hull[k - 1], p)) --k;
        hull[k++] = p;
    }
    for (std::size_t i = unique.size() - 1, lower = k + 1; i-- > 0;) {
        while (k >= lower && !strictly_left(hull[k - 2], hull[k - 1], unique[i])) --k;
        hull[k++] = unique[i];
    }
    hull.resize(k - 1);
    if (hull.size() == 2 && (hull[0] - hull[1]).cwiseAbs().maxCoeff() <= dedupe) hull.resize(1);
    return hull;
}

double polygon_area(const std::vector<Point2>& poly) {
    if (poly.size() < 3) return 0.0;
    double a = 0.0;
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const Point2& p = poly[i];
        const Point2& q = poly[(i + 1) % poly.size()];
        a += p.x() * q.y() - p.y() * q.x();
    }
    return 0.5 * a;
}

double signed_distance(const std::vector<Point2>& poly, const Point2& p) {
    if (poly.empty()) throw std::invalid_argument("signed distance to an empty polygon");
    if (poly.size() < 3) return -boundary_distance(poly, p);
    bool inside = true;
    for (std::size_t i = 0; i < poly.size(); ++i)
        if (cross(poly[i], poly[(i + 1) % poly.size()], p) < 0.0) inside = false;
    const double d = boundary_distance(poly, p);
    return inside ? d : -d;
}

double distance_to_polygon(const std::vector<Point2>& poly, const Point2& p) {
    return std::max(0.0, -signed_distance(poly, p));
}

double hausdorff_distance(const std::vector<Point2>& a, const std::vector<Point2>& b) {
    double h = 0.0;
    for (const auto& p : a) h = std::max(h, distance_to_polygon(b, p));
    for (const auto& p : b) h = std::max(h, distance_to_polygon(a, p));
    return h;
}

}  // namespace rotlab
