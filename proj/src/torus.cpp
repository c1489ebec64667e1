#include "rotlab/torus.hpp"

#include <cmath>
#include <string>

namespace rotlab {

double wrap_unit(double x) {
    double r = x - std::floor(x);
    // floor can leave r == 1.0 for tiny negative x
    return r >= 1.0 ? 0.0 : r;
}

double minimal_difference(double a, double b) {
    double d = a - b;
    return d - std::floor(d + 0.5);
}

TorusPoint::TorusPoint(const Vec& coords) : coords_(coords.size()) {
    for (Eigen::Index i = 0; i < coords.size(); ++i) coords_[i] = wrap_unit(coords[i]);
}

std::vector<LiftedPoint> lift_unwrap(std::span<const TorusPoint> points) {
    std::vector<LiftedPoint> out;
    out.reserve(points.size());
    if (points.empty()) return out;
    out.push_back(LiftedPoint{points.front().coords()});
    for (std::size_t s = 1; s < points.size(); ++s) {
        const Vec& cur = points[s].coords();
        const Vec& prev = points[s - 1].coords();
        if (cur.size() != prev.size()) throw std::invalid_argument("lift_unwrap: dimension changes");
        Vec next = out.back().coords;
        for (Eigen::Index i = 0; i < cur.size(); ++i) {
            double d = minimal_difference(cur[i], prev[i]);
            if (std::abs(d) >= 0.5 - 1e-12)
                throw StepTooLarge("lift_unwrap: step " + std::to_string(s) + " moves half a period in coordinate " +
                                   std::to_string(i));
            next[i] += d;
        }
        out.push_back(LiftedPoint{std::move(next)});
    }
    return out;
}

}  // namespace rotlab
