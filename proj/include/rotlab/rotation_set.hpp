#pragma once

// Lifts of torus maps homotopic to the identity, their Misiurewicz-Ziemian
// rotation sets, rational interior points and periodic-point search.

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "json.hpp"
#include "rotlab/planar.hpp"
#include "rotlab/torus.hpp"

namespace rotlab {

using IntPoint2 = Eigen::Matrix<long long, 2, 1>;
using IntMat2 = Eigen::Matrix<long long, 2, 2>;

/// Lift F: R^2 -> R^2 of a torus map.
class TorusMapLift {
public:
    enum class Kind { translation, two_param_shear, coupled_sine, linear, custom };

    /// x + alpha.
    static TorusMapLift translation(const Point2& alpha);
    /// Composition of two shears: x' = x + a sin 2 pi y, then y' = y + b sin 2 pi x'.
    /// A homeomorphism for every (a, b) with a fixed point at the origin.
    static TorusMapLift two_param_shear(double a, double b);
    /// Simultaneous update (x + t1 + a sin 2 pi y, y + t2 + b sin 2 pi x).
    static TorusMapLift coupled_sine(double t1, double t2, double a, double b);
    /// Linear map x -> A x (equivariant only for A = I).
    static TorusMapLift linear(const Eigen::Matrix2d& A);
    static TorusMapLift custom(std::string name, std::function<Point2(const Point2&)> f);
    /// A o F o A^{-1} for A in GL(2, Z).
    static TorusMapLift conjugate(const TorusMapLift& F, const IntMat2& A);

    Point2 operator()(const Point2& x) const;
    Point2 iterate(Point2 x, int n) const;

    Kind kind() const { return kind_; }
    const std::string& name() const { return name_; }
    const std::vector<double>& parameters() const { return params_; }

private:
    Kind kind_ = Kind::custom;
    std::string name_;
    std::vector<double> params_;
    std::function<Point2(const Point2&)> custom_;
};

struct EquivarianceReport {
    bool equivariant = false;
    double max_defect = 0.0;  // max |F(x + e_i) - F(x) - e_i|
};

/// Spot check of F(x + k) = F(x) + k for k = e_1, e_2 on the samples.
EquivarianceReport check_equivariance(const TorusMapLift& F, const std::vector<Point2>& samples, double tol = 1e-9);
/// Uniform 8 x 8 sample grid used when no samples are given.
std::vector<Point2> default_equivariance_samples();

struct RotationSet {
    std::vector<Point2> vertices;  // counterclockwise
    std::size_t sample_count = 0;
    int iterate_depth = 0;
};

/// Hull of (F^n(x) - x)/n over the grid x = (i/g, j/g). Throws
/// PreconditionViolation if F fails the equivariance check.
RotationSet mz_rotation_set(const TorusMapLift& F, int grid, int n_iter, int threads = 1);

struct RationalPoint {
    IntPoint2 p;
    long long q = 1;
    double depth = 0.0;  // signed distance to the hull boundary
    Point2 value() const { return p.cast<double>() / static_cast<double>(q); }
};

struct InteriorPoints {
    std::vector<RationalPoint> points;
    bool degenerate = false;  // hull area <= 1e-9
};

/// Reduced fractions p/q, q <= Q, at depth > margin inside the hull.
InteriorPoints rational_interior_points(const RotationSet& rs, int denominator_bound, double margin = 0.02);

struct PeriodicOrbitResult {
    bool found = false;
    TorusPoint point;
    Point2 lifted;  // representative used for the residual
    int q = 1;
    IntPoint2 p = IntPoint2::Zero();
    double residual = 0.0;  // |F^q(x) - x - p|, the best over all seeds on failure
    int seed_index = -1;
};

/// Default seeds: 8 x 4 grid of cell centres.
std::vector<Point2> default_newton_seeds();

/// Multi-start damped Newton on G(x) = F^q(x) - x - p with a central-difference
/// Jacobian. Failure means no root was found from these seeds.
PeriodicOrbitResult find_periodic_point(const TorusMapLift& F, const IntPoint2& p, int q,
                                        const std::vector<Point2>& seeds = default_newton_seeds(), double tol = 1e-10,
                                        int threads = 1);

nlohmann::json to_json(const RotationSet& rs);
nlohmann::json to_json(const PeriodicOrbitResult& r);

}  // namespace rotlab
