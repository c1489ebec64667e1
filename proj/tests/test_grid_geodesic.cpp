#include <cmath>
#include <numbers>

#include "doctest.h"
#include "rotlab/grid_geodesic.hpp"

using namespace rotlab;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kEps = 0.1;

double index_of_refraction(double x1) { return std::exp(kEps * std::cos(2 * kPi * x1)); }

MetricField conformal(int R) {
    return MetricField::sample(2, R, [](const Vec& x) {
        return Mat(Mat::Identity(2, 2) * std::exp(2 * kEps * std::cos(2 * kPi * x[0])));
    });
}

// Shortest path from (0, 0) to (1, rise) for the line element n(x1)|dx|. The
// Snell invariant c = n sin(angle) fixes the slope dy/dx1 = c / sqrt(n^2 - c^2);
// c is shot by bisection until the rise matches.
double shooting_length(double rise) {
    const int N = 20000;
    auto integrate = [&](double c, double& length) {
        double y = 0.0;
        length = 0.0;
        for (int i = 0; i < N; ++i) {
            const double n = index_of_refraction((i + 0.5) / N);
            const double s = std::sqrt(n * n - c * c);
            y += c / s / N;
            length += n * n / s / N;
        }
        return y;
    };
    double lo = 0.0, hi = index_of_refraction(0.5) * (1 - 1e-15), len = 0.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (integrate(mid, len) < rise ? lo : hi) = mid;
    }
    integrate(0.5 * (lo + hi), len);
    return len;
}

LiftedPoint at(double a, double b) { return LiftedPoint{(Vec(2) << a, b).finished()}; }

}  // namespace

TEST_CASE("flat distances are Euclidean") {
    const GridGeodesic geo(MetricField::flat(2, 32));
    CHECK(geo.distance(at(0, 0), at(1, 0)) == doctest::Approx(1.0).epsilon(0.02));
    CHECK(geo.distance(at(0, 0), at(1, 1)) == doctest::Approx(std::sqrt(2.0)).epsilon(0.02));
    CHECK(geo.distance(at(0.25, 0.5), at(0.25, 0.5)) == 0.0);
    CHECK(geo.stable_norm_integer(IntHomologyClass{1, 0}) == doctest::Approx(1.0).epsilon(0.02));
    CHECK(geo.stable_norm_integer(IntHomologyClass{2, 1}) == doctest::Approx(std::sqrt(5.0)).epsilon(0.02));
    CHECK(geo.stable_norm_real((Vec(2) << 0.5, 0).finished(), 8) == doctest::Approx(0.5).epsilon(0.02));
    const double s = 1 / std::sqrt(2.0);
    CHECK(geo.stable_norm_real((Vec(2) << s, s).finished(), 8) == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("flat 3-torus") {
    const GridGeodesic geo(MetricField::flat(3, 12));
    CHECK(geo.stable_norm_integer(IntHomologyClass{1, 1, 0}) == doctest::Approx(std::sqrt(2.0)).epsilon(0.02));
    CHECK(geo.stable_norm_integer(IntHomologyClass{1, 2, 2}) == doctest::Approx(3.0).epsilon(0.02));
}

TEST_CASE("conformal metric against the shooting oracle") {
    const GridGeodesic geo(conformal(64));
    // Along the axis the straight path is optimal: length = integral of n.
    const double along = shooting_length(0.0);
    CHECK(geo.distance(at(0, 0), at(1, 0)) == doctest::Approx(along).epsilon(2e-3));
    const double diag = shooting_length(1.0);
    const double grid = geo.distance(at(0, 0), at(1, 1));
    CHECK(grid == doctest::Approx(diag).epsilon(0.01));
    // Grid paths are admissible curves, so they cannot beat the true minimum
    // by more than the quadrature error.
    CHECK(grid >= diag * (1 - 2e-3));
}

TEST_CASE("conformal vertical loop runs through the valley") {
    const GridGeodesic geo(conformal(64));
    const double expect = std::exp(-kEps);
    CHECK(geo.stable_norm_integer(IntHomologyClass{0, 1}) == doctest::Approx(expect).epsilon(2e-3));
    CHECK(geo.stable_norm_real((Vec(2) << 0, 0.5).finished(), 4) == doctest::Approx(0.5 * expect).epsilon(2e-3));
    // No class multiple does better per unit than the single loop.
    CHECK(geo.stable_norm_integer(IntHomologyClass{0, 2}) >= 2 * expect * (1 - 2e-3));
}

TEST_CASE("deck invariance and the triangle inequality") {
    const GridGeodesic geo(conformal(16));
    const LiftedPoint a = at(0.125, 0.25), b = at(1.5, -0.75), c = at(0.75, 0.5);
    const double d = geo.distance(a, b);
    CHECK(geo.distance(at(1.125, 0.25), at(2.5, -0.75)) == d);
    CHECK(geo.distance(at(0.125, -2.75), at(1.5, -3.75)) == d);
    CHECK(geo.distance(b, a) == doctest::Approx(d).epsilon(1e-12));
    CHECK(d <= geo.distance(a, c) + geo.distance(c, b) + 1e-12);
}

TEST_CASE("closing picks the nearest lift") {
    const GridGeodesic geo(MetricField::flat(2, 16));
    const auto cl = geo.closing((Vec(2) << 3.0625, -1.9375).finished(), (Vec(2) << 0.0, 0.0).finished());
    CHECK(cl.shift == IntHomologyClass{3, -2});
    CHECK(cl.length == doctest::Approx(std::sqrt(2.0) * 0.0625).epsilon(1e-9));
    CHECK_FALSE(cl.ambiguous);
    // Exactly halfway between two lifts.
    const auto amb = geo.closing((Vec(2) << 0.5, 0.0).finished(), (Vec(2) << 0.0, 0.0).finished());
    CHECK(amb.ambiguous);
}

TEST_CASE("diameter of the flat torus") {
    const GridGeodesic geo(MetricField::flat(2, 16));
    // The default estimate samples few sources and adds the sampling gap, so it
    // is an upper bound. With every node a source the gap is one cell.
    CHECK(geo.diameter() >= std::sqrt(0.5));
    const double D = geo.diameter(1);
    CHECK(D >= std::sqrt(0.5));
    CHECK(D <= std::sqrt(0.5) + std::sqrt(2.0) / 32 + 1e-12);
}

TEST_CASE("search window is bounded") {
    const GridGeodesic geo(MetricField::flat(2, 8));
    CHECK_THROWS_AS(geo.distance(at(0, 0), at(20, 0)), OutOfWindow);
}
