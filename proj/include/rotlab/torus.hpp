#pragma once

#include <span>
#include <vector>

#include "rotlab/types.hpp"

namespace rotlab {

/// Point of T^n = R^n / Z^n, every coordinate in [0, 1).
class TorusPoint {
public:
    TorusPoint() = default;
    /// Reduces arbitrary real coordinates mod 1.
    explicit TorusPoint(const Vec& coords);

    const Vec& coords() const { return coords_; }
    Eigen::Index dim() const { return coords_.size(); }

private:
    Vec coords_;
};

/// Point of the universal cover R^n.
struct LiftedPoint {
    Vec coords;

    TorusPoint project() const { return TorusPoint(coords); }
};

/// Coordinate-wise x mod 1 in [0, 1).
double wrap_unit(double x);

/// Minimal representative of a - b mod 1 in [-1/2, 1/2).
double minimal_difference(double a, double b);

/// Continuous lift of a time-ordered torus sequence. The first lift equals the
/// first point; each step is the minimal-representative difference. Throws
/// StepTooLarge when a step is within 1e-12 of half a period (undersampled).
std::vector<LiftedPoint> lift_unwrap(std::span<const TorusPoint> points);

}  // namespace rotlab
