#include <cmath>

#include "doctest.h"
#include "rotlab/torus.hpp"

using namespace rotlab;

namespace {
TorusPoint tp1(double x) { return TorusPoint((Vec(1) << x).finished()); }
}  // namespace

TEST_CASE("reduction mod 1") {
    CHECK(wrap_unit(1.25) == doctest::Approx(0.25));
    CHECK(wrap_unit(-0.25) == doctest::Approx(0.75));
    CHECK(wrap_unit(-1e-18) == 0.0);
    CHECK(minimal_difference(0.05, 0.95) == doctest::Approx(0.1));
    CHECK(minimal_difference(0.95, 0.05) == doctest::Approx(-0.1));
    const TorusPoint p((Vec(2) << 3.5, -0.125).finished());
    CHECK(p.coords()[0] == doctest::Approx(0.5));
    CHECK(p.coords()[1] == doctest::Approx(0.875));
}

TEST_CASE("constant sequence lifts to a constant") {
    std::vector<TorusPoint> pts(5, tp1(0.3));
    const auto lift = lift_unwrap(pts);
    REQUIRE(lift.size() == 5);
    for (const auto& l : lift) CHECK(l.coords[0] == doctest::Approx(0.3));
}

TEST_CASE("winding sequence lifts past 1") {
    const std::vector<TorusPoint> pts = {tp1(0.8), tp1(0.9), tp1(0.0), tp1(0.1)};
    const auto lift = lift_unwrap(pts);
    const double expect[] = {0.8, 0.9, 1.0, 1.1};
    for (int i = 0; i < 4; ++i) CHECK(lift[i].coords[0] == doctest::Approx(expect[i]).epsilon(1e-14));
}

TEST_CASE("sampled diagonal flow unwraps to its displacement") {
    const double dt = 0.01, s = 1.0 / std::sqrt(2.0);
    std::vector<TorusPoint> pts;
    for (int k = 0; k <= 1000; ++k) pts.emplace_back((Vec(2) << k * dt * s, k * dt * s).finished());
    const auto lift = lift_unwrap(pts);
    const Vec disp = lift.back().coords - lift.front().coords;
    CHECK(std::abs(disp[0] - 10 * s) < 1e-9);
    CHECK(std::abs(disp[1] - 10 * s) < 1e-9);
}

TEST_CASE("half-period steps are rejected") {
    const std::vector<TorusPoint> pts = {tp1(0.1), tp1(0.6)};
    CHECK_THROWS_AS(lift_unwrap(pts), StepTooLarge);
    CHECK(lift_unwrap(std::vector<TorusPoint>{}).empty());
}
