#include <cmath>
#include <numeric>
#include <set>

#include "doctest.h"
#include "rotlab/rotation_set.hpp"

using namespace rotlab;

namespace {

Point2 pt(double a, double b) { return Point2(a, b); }

RotationSet polygon(std::vector<Point2> v) {
    RotationSet rs;
    rs.vertices = std::move(v);
    return rs;
}

using Frac = std::tuple<long long, long long, long long>;  // p1, p2, q

std::set<Frac> as_set(const InteriorPoints& ip) {
    std::set<Frac> out;
    for (const auto& r : ip.points) out.insert({r.p[0], r.p[1], r.q});
    return out;
}

// Reduced fractions strictly inside the triangle x > 0, y > 0, x + y < 1, in
// integer arithmetic.
std::set<Frac> triangle_oracle(int Q) {
    std::set<Frac> out;
    for (long long q = 1; q <= Q; ++q)
        for (long long a = 1; a < q; ++a)
            for (long long b = 1; a + b < q; ++b)
                if (std::gcd(std::gcd(a, b), q) == 1) out.insert({a, b, q});
    return out;
}

}  // namespace

TEST_CASE("planar hull and distances") {
    const std::vector<Point2> pts = {pt(0, 0), pt(1, 0), pt(1, 1), pt(0, 1), pt(0.5, 0.5), pt(0.5, 0), pt(1, 1)};
    const auto hull = convex_hull(pts);
    CHECK(hull.size() == 4);
    CHECK(polygon_area(hull) == doctest::Approx(1.0));
    CHECK(signed_distance(hull, pt(0.5, 0.25)) == doctest::Approx(0.25));
    CHECK(signed_distance(hull, pt(1.5, 0.5)) == doctest::Approx(-0.5));
    CHECK(distance_to_polygon(hull, pt(2, 2)) == doctest::Approx(std::sqrt(2.0)));
    std::vector<Point2> shifted = hull;
    for (auto& p : shifted) p += pt(0.3, 0);
    CHECK(hausdorff_distance(hull, shifted) == doctest::Approx(0.3));
    CHECK(convex_hull({pt(1, 1), pt(1, 1)}).size() == 1);
}

TEST_CASE("equivariance") {
    CHECK(check_equivariance(TorusMapLift::translation(pt(0.3, 0.7)), default_equivariance_samples()).equivariant);
    Eigen::Matrix2d A;
    A << 2, 1, 1, 1;
    const auto anosov = check_equivariance(TorusMapLift::linear(A), default_equivariance_samples());
    CHECK_FALSE(anosov.equivariant);
    CHECK(anosov.max_defect == doctest::Approx(std::sqrt(2.0)));
    CHECK(check_equivariance(TorusMapLift::two_param_shear(0.2, 0.0), default_equivariance_samples()).equivariant);
    CHECK(check_equivariance(TorusMapLift::coupled_sine(0.1, 0.1, 0.1, 0.1), default_equivariance_samples()).equivariant);
    CHECK_THROWS_AS(mz_rotation_set(TorusMapLift::linear(A), 4, 4), PreconditionViolation);
}

TEST_CASE("rotation sets of rigid maps") {
    const auto tr = mz_rotation_set(TorusMapLift::translation(pt(0.3, 0.7)), 8, 50);
    REQUIRE(tr.vertices.size() == 1);
    CHECK((tr.vertices[0] - pt(0.3, 0.7)).norm() < 1e-9);
    const auto id = mz_rotation_set(TorusMapLift::custom("identity", [](const Point2& x) { return x; }), 8, 10);
    REQUIRE(id.vertices.size() == 1);
    CHECK(id.vertices[0].norm() == 0.0);
    CHECK(id.sample_count == 64);
}

TEST_CASE("shear map: the hull is symmetric and conjugation moves it") {
    const auto F = TorusMapLift::two_param_shear(0.8, 0.8);
    // Few iterates, so rounding is not yet amplified by the chaotic dynamics.
    const auto rs = mz_rotation_set(F, 16, 5);
    // F commutes with x -> -x and the sample grid is symmetric, so the hull is
    // centrally symmetric.
    std::vector<Point2> neg = rs.vertices;
    for (auto& p : neg) p = -p;
    CHECK(hausdorff_distance(rs.vertices, neg) < 1e-9);

    IntMat2 A;
    A << 1, 1, 0, 1;
    const auto conj = mz_rotation_set(TorusMapLift::conjugate(F, A), 16, 5);
    std::vector<Point2> image;
    for (const auto& p : rs.vertices) image.push_back(A.cast<double>() * p);
    // A permutes the sample grid mod 1, so the sample sets correspond exactly.
    CHECK(hausdorff_distance(conj.vertices, convex_hull(image)) < 1e-9);
}

TEST_CASE("rational interior points of a triangle") {
    const auto tri = polygon({pt(0, 0), pt(1, 0), pt(0, 1)});
    CHECK(rational_interior_points(tri, 2).points.empty());
    const auto q3 = rational_interior_points(tri, 3);
    CHECK(as_set(q3) == std::set<Frac>{{1, 1, 3}});
    // Every reduced fraction with q <= 5 inside the triangle has depth at least
    // 1 / (5 sqrt 2), well above the margin, so the sets agree exactly.
    CHECK(as_set(rational_interior_points(tri, 5)) == triangle_oracle(5));
    for (const auto& r : rational_interior_points(tri, 5).points)
        CHECK(r.depth == doctest::Approx(signed_distance(tri.vertices, r.value())));
}

TEST_CASE("rational interior points: degenerate hull and a small square") {
    const auto point = rational_interior_points(polygon({pt(0.2, 0.2)}), 4);
    CHECK(point.degenerate);
    CHECK(point.points.empty());
    const auto sq = rational_interior_points(polygon({pt(-0.1, -0.1), pt(0.1, -0.1), pt(0.1, 0.1), pt(-0.1, 0.1)}), 1);
    CHECK(as_set(sq) == std::set<Frac>{{0, 0, 1}});
}

TEST_CASE("periodic points of rigid maps") {
    const auto id = find_periodic_point(TorusMapLift::custom("identity", [](const Point2& x) { return x; }),
                                        IntPoint2(0, 0), 1);
    CHECK(id.found);
    CHECK(id.residual == 0.0);
    const auto half = find_periodic_point(TorusMapLift::translation(pt(0.5, 0)), IntPoint2(1, 0), 2);
    CHECK(half.found);
    CHECK(half.residual == 0.0);
    const auto none = find_periodic_point(TorusMapLift::translation(pt(0.5, 0)), IntPoint2(0, 0), 1);
    CHECK_FALSE(none.found);
}

TEST_CASE("periodic points of a shear map") {
    const auto F = TorusMapLift::two_param_shear(0.8, 0.6);
    const auto fixed = find_periodic_point(F, IntPoint2(0, 0), 1);
    REQUIRE(fixed.found);
    // Direct evaluation: F(x) - x must vanish.
    CHECK((F(fixed.lifted) - fixed.lifted).norm() < 1e-10);
    // x' = x + a sin 2 pi y fixes x only when sin 2 pi y = 0.
    const double s = std::sin(2 * std::numbers::pi * fixed.lifted[1]);
    CHECK(std::abs(s) < 1e-9);
    // A period-2 orbit with rotation vector (1/2, 0) for a large amplitude.
    const auto G = TorusMapLift::two_param_shear(1.2, 1.2);
    const auto two = find_periodic_point(G, IntPoint2(1, 0), 2);
    REQUIRE(two.found);
    CHECK((G.iterate(two.lifted, 2) - two.lifted - pt(1, 0)).norm() < 1e-10);
}

TEST_CASE("JSON output") {
    const auto rs = mz_rotation_set(TorusMapLift::translation(pt(0.25, 0.5)), 4, 8);
    const auto j = to_json(rs);
    CHECK(j["vertices"].size() == 1);
    CHECK(j["vertices"][0][0].get<double>() == doctest::Approx(0.25));
}
