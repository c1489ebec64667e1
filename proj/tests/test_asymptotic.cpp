#include <cmath>
#include <numbers>

#include "doctest.h"
#include "rotlab/asymptotic.hpp"

using namespace rotlab;

namespace {

Vec v2(double a, double b) { return (Vec(2) << a, b).finished(); }
const double kGoldenInv = (std::sqrt(5.0) - 1) / 2;

LiftedTrajectory linear_traj(const Vec& x0, const Vec& v, double T, int samples) {
    LiftedTrajectory tr;
    for (int k = 0; k <= samples; ++k) {
        const double t = T * k / samples;
        tr.times.push_back(t);
        tr.states.push_back({x0 + t * v, v});
    }
    return tr;
}

}  // namespace

TEST_CASE("rotation vector of a linear flow") {
    const Vec v = v2(1.0, kGoldenInv);
    const auto est = rotation_vector(linear_traj(v2(0.2, 0.9), v, 100.0, 1000));
    CHECK((est.value - v).norm() < 1e-12);
    CHECK(est.cauchy_gap < 1e-9);
    REQUIRE(est.sub_horizons.size() == 4);
    CHECK(est.sub_horizons[0] == 100.0);
    CHECK(est.sub_horizons[3] == doctest::Approx(12.5));
}

TEST_CASE("rotation vector interpolates between samples") {
    // Positions x(t) = t^2 sampled coarsely: the estimate at T/2 uses the chord.
    std::vector<double> t = {0, 1, 2, 3, 4};
    std::vector<Vec> x;
    for (double s : t) x.push_back((Vec(1) << s * s).finished());
    const auto est = rotation_vector(t, x, 3);
    CHECK(est.value[0] == doctest::Approx(4.0));
    CHECK(est.partial[1][0] == doctest::Approx(2.0));
    CHECK(est.partial[2][0] == doctest::Approx(1.0));  // x(1) / 1
}

TEST_CASE("quasi-orbit of the golden linear flow") {
    const ConstantMetricClosing closing(Mat::Identity(2, 2));
    const Vec x0 = v2(0.3, 0.1);
    const auto tr = linear_traj(x0, v2(1.0, kGoldenInv), 100.0, 200);
    const auto rec = quasi_orbit_class(tr, closing, 100.0);
    // Nearest lattice displacement to (100, 61.8034).
    CHECK(rec.total_class == IntHomologyClass{100, 62});
    CHECK(rec.closing_length == doctest::Approx(std::abs(62 - 100 * kGoldenInv)).epsilon(1e-9));
    CHECK_FALSE(rec.ambiguous);

    const auto zero = quasi_orbit_class(tr, closing, 0.0);
    CHECK(zero.total_class.is_zero());
    CHECK(zero.closing_length == 0.0);
}

TEST_CASE("closed orbit at its period closes with length 0") {
    const ConstantMetricClosing closing(Mat::Identity(2, 2));
    const auto rec = quasi_orbit_from_endpoints(v2(0.25, 0.4), v2(0.25, 1.4), 1.0, closing);
    CHECK(rec.total_class == IntHomologyClass{0, 1});
    CHECK(rec.closing_length < 1e-12);
    CHECK(rec.closing_class.is_zero());
}

TEST_CASE("constant-metric closing uses the metric") {
    Mat g(2, 2);
    g << 9, 0, 0, 1;
    const ConstantMetricClosing closing(g);
    // Displacement (0.45, 0.45): in g the lift (0, 1) at offset (0.45, -0.55) is shorter.
    const auto cl = closing.close(v2(0.45, 0.45), v2(0, 0));
    CHECK(cl.shift == IntHomologyClass{0, 0});
    CHECK(cl.length == doctest::Approx(std::sqrt(9 * 0.45 * 0.45 + 0.45 * 0.45)));
    const auto cl2 = closing.close(v2(0.1, 0.8), v2(0, 0));
    CHECK(cl2.shift == IntHomologyClass{0, 1});
}

TEST_CASE("single-linkage clustering") {
    const std::vector<Vec> pts = {v2(0, 1), v2(0.01, 1.0), v2(0, -1), v2(0.02, 0.99), v2(0, -1.01)};
    const auto cl = cluster_vectors(pts, 0.05);
    REQUIRE(cl.size() == 2);
    CHECK(cl[0].count == 3);
    CHECK(cl[1].count == 2);
    CHECK(cl[0].center[1] == doctest::Approx(0.99667).epsilon(1e-4));
}

TEST_CASE("linear flow accumulates on a single class") {
    const Vec v = v2(1.0, kGoldenInv);
    OrbitSampler sampler = [&](const Vec& base, std::span<const double> hs) {
        std::vector<Vec> out;
        for (double T : hs) out.push_back(base + T * v);
        return out;
    };
    std::vector<Vec> samples;
    for (int i = 0; i < 5; ++i) samples.push_back(v2(0.2 * i, 0.13 * i));
    const auto hs = dyadic_horizons(250.0, 3);
    CHECK(hs == std::vector<double>{250.0, 500.0, 1000.0});
    const auto acc = homology_accumulation(samples, hs, sampler, ConstantMetricClosing(Mat::Identity(2, 2)));
    REQUIRE(acc.clusters.size() == 1);
    CHECK((acc.clusters[0].center - v).norm() < 1e-3);
}

TEST_CASE("cone audit on the product torus") {
    const auto fib = fibred_linear_flow((Vec(3) << 1, 0, 0).finished());
    const ConstantMetricClosing closing(fib.metric);
    const NormModel norm = NormModel::constant_metric(fib.metric);
    const auto h = shortest_transverse_class(norm, (Vec(3) << 1, 0, 0).finished());
    CHECK(h == IntHomologyClass{1, 0, 0});
    const auto audit = cone_bound_audit(fib.flow, (Vec(3) << 0.1, 0.2, 0.3).finished(), 1.0, h, 20, closing, norm);
    REQUIRE(audit.rows.size() == 20);
    for (const auto& r : audit.rows) {
        CHECK(r.ratio == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(r.total_class == IntHomologyClass{r.m, 0, 0});
    }
    CHECK(audit.within_bound);
}

TEST_CASE("cone audit on a tilted flow against the closed-form norm") {
    const Vec dir = (Vec(3) << 1, std::sqrt(2.0) - 1, 0.3).finished();
    const auto fib = fibred_linear_flow(dir);
    // The flow really is linear with unit return time to the leaves x1 = const.
    const Vec x0 = (Vec(3) << 0.1, 0.2, 0.3).finished();
    CHECK((fib.flow(x0, 2.5) - (x0 + 2.5 * dir)).norm() < 1e-12);
    // Orbits are g-orthogonal to the leaves.
    CHECK(std::abs((fib.metric * dir)[1]) < 1e-12);
    CHECK(std::abs((fib.metric * dir)[2]) < 1e-12);

    const ConstantMetricClosing closing(fib.metric);
    const NormModel norm = NormModel::constant_metric(fib.metric);
    const auto h = shortest_transverse_class(norm, (Vec(3) << 1, 0, 0).finished());
    const auto audit = cone_bound_audit(fib.flow, x0, 1.0, h, 30, closing, norm);
    for (const auto& r : audit.rows) {
        const Vec k = r.total_class.to_real();
        CHECK(r.ratio == doctest::Approx(std::sqrt(k.dot(fib.metric * k)) / (r.m * audit.generator_length)));
        CHECK(r.ratio <= r.bound);
    }
    CHECK(audit.limsup_estimate <= 3.05);
}
