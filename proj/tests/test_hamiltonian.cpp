#include <cmath>
#include <numbers>

#include "doctest.h"
#include "rotlab/hamiltonian.hpp"
#include "rotlab/rng.hpp"

using namespace rotlab;

namespace {

constexpr double kPi = std::numbers::pi;

Vec v2(double a, double b) { return (Vec(2) << a, b).finished(); }

HamiltonianModel flat2() { return HamiltonianModel::mechanical(inverse_metric_constant(Mat::Identity(2, 2)), potential_zero(2)); }

HamiltonianModel pendulum() {
    return HamiltonianModel::mechanical(inverse_metric_constant(Mat::Identity(2, 2)),
                                        potential_cosine(2, {{1.0, (IntVec(2) << 1, 0).finished(), 0.0}}));
}

// Diagonal metric diag(2 + sin 2 pi x1, 1 + 0.5 cos 2 pi x2) through its inverse.
HamiltonianModel tilted() {
    const auto g = MetricField::sample(2, 32, [](const Vec& x) {
        Mat m = Mat::Zero(2, 2);
        m(0, 0) = 2 + std::sin(2 * kPi * x[0]);
        m(1, 1) = 1 + 0.5 * std::cos(2 * kPi * x[1]);
        return m;
    });
    return HamiltonianModel::mechanical(inverse_metric_field(g),
                                        potential_cosine(2, {{0.7, (IntVec(2) << 1, 1).finished(), 0.3}}));
}

void check_gradients(const HamiltonianModel& m, const Vec& x, const Vec& p) {
    Vec gx, gp;
    m.gradients(x, p, gx, gp);
    const double h = 1e-6;
    for (int i = 0; i < m.dim(); ++i) {
        Vec e = Vec::Zero(m.dim());
        e[i] = h;
        const double fx = (m.H(x + e, p) - m.H(x - e, p)) / (2 * h);
        const double fp = (m.H(x, p + e) - m.H(x, p - e)) / (2 * h);
        CHECK(gx[i] == doctest::Approx(fx).epsilon(1e-6).scale(1.0));
        CHECK(gp[i] == doctest::Approx(fp).epsilon(1e-6).scale(1.0));
    }
}

}  // namespace

TEST_CASE("Hamiltonian values") {
    CHECK(flat2().H(v2(0.3, 0.1), v2(1, 0)) == doctest::Approx(0.5));
    const auto mane = HamiltonianModel::mane(mane_vector_field());
    CHECK(mane.H(v2(0, 0), v2(1, 0)) == doctest::Approx(1.5));
    for (double x1 : {0.0, 0.13, 0.5, 0.77}) CHECK(mane.H(v2(x1, 0.4), v2(0, 0)) == 0.0);
    // Sign convention: H = |p|^2/2 - V.
    CHECK(pendulum().H(v2(0, 0), v2(0, 0)) == doctest::Approx(-1.0));
}

TEST_CASE("analytic gradients agree with finite differences") {
    CounterRng rng(5, 0);
    for (const auto& m : {flat2(), pendulum(), tilted(), HamiltonianModel::mane(mane_vector_field())})
        for (int k = 0; k < 10; ++k) {
            // Grid-metric models are only piecewise smooth; stay inside cells.
            const Vec x = v2((std::floor(rng.uniform() * 32) + 0.5) / 32, (std::floor(rng.uniform() * 32) + 0.5) / 32);
            check_gradients(m, x, v2(rng.uniform(-2, 2), rng.uniform(-2, 2)));
        }
}

TEST_CASE("Legendre transform of the flat and zero-section models") {
    const Vec x = v2(0.2, 0.7), v = v2(0.4, -1.1);
    const auto flat = flat2();
    CHECK((legendre(flat, x, v) - v).norm() < 1e-12);
    CHECK(fenchel_L(flat, x, v) == doctest::Approx(0.5 * v.squaredNorm()));

    const auto mane = HamiltonianModel::mane(mane_vector_field());
    const Vec X = v2(std::cos(2 * kPi * x[0]), std::sin(2 * kPi * x[0]));
    CHECK((legendre(mane, x, v) - (v - X)).norm() < 1e-12);
    CHECK(fenchel_L(mane, x, v) == doctest::Approx(0.5 * (v - X).squaredNorm()));

    const auto jet = lagrangian_jet(pendulum(), x, v);
    CHECK(jet.L == doctest::Approx(0.5 * v.squaredNorm() + std::cos(2 * kPi * x[0])));
    CHECK(jet.dx[0] == doctest::Approx(-2 * kPi * std::sin(2 * kPi * x[0])));
    CHECK((jet.dv - v).norm() < 1e-12);
}

TEST_CASE("Legendre duality on a non-flat metric") {
    const auto m = tilted();
    CounterRng rng(9, 2);
    for (int k = 0; k < 100; ++k) {
        const Vec x = v2(rng.uniform(), rng.uniform());
        const Vec v = v2(rng.uniform(-3, 3), rng.uniform(-3, 3));
        const Vec p = legendre(m, x, v);
        const double L = fenchel_L(m, x, v);
        CHECK(std::abs(L + m.H(x, p) - p.dot(v)) < 1e-9);
        Vec gx, gp;
        m.gradients(x, p, gx, gp);
        CHECK((gp - v).norm() < 1e-8);
        // Fenchel-Young for an unrelated momentum.
        const Vec q = v2(rng.uniform(-3, 3), rng.uniform(-3, 3));
        CHECK(L + m.H(x, q) - q.dot(v) >= -1e-9);
    }
}

TEST_CASE("non-convex custom Hamiltonian is rejected") {
    auto H = [](const Vec&, const Vec& p) { return 0.5 * p[0] * p[0] - 0.5 * p[1] * p[1]; };
    auto gx = [](const Vec&, const Vec&) { return Vec(Vec::Zero(2)); };
    auto gp = [](const Vec&, const Vec& p) { return v2(p[0], -p[1]); };
    CHECK_THROWS_AS(HamiltonianModel::custom(2, H, gx, gp), PreconditionViolation);
    auto Hc = [](const Vec&, const Vec& p) { return 0.5 * p.squaredNorm(); };
    auto gpc = [](const Vec&, const Vec& p) { return Vec(p); };
    CHECK_NOTHROW(HamiltonianModel::custom(2, Hc, gx, gpc));
}

TEST_CASE("free motion is exact") {
    for (Scheme s : {Scheme::verlet, Scheme::rk4}) {
        IntegratorConfig cfg;
        cfg.scheme = s;
        cfg.step = 1e-2;
        const auto traj = integrate(flat2(), {v2(0.1, 0.2), v2(0.3, -1.7)}, 10.0, cfg);
        const Vec end = traj.states.back().x;
        CHECK((end - (v2(0.1, 0.2) + 10.0 * v2(0.3, -1.7))).norm() < 1e-10);
        CHECK(traj.horizon() == doctest::Approx(10.0));
    }
}

TEST_CASE("verlet is reversible") {
    IntegratorConfig cfg;
    cfg.scheme = Scheme::verlet;
    cfg.step = 1e-3;
    const PhaseState s0{v2(0.1, 0.4), v2(0.7, 0.2)};
    const auto fwd = integrate(pendulum(), s0, 10.0, cfg);
    const PhaseState back_start{fwd.states.back().x, -fwd.states.back().p};
    const auto back = integrate(pendulum(), back_start, 10.0, cfg);
    CHECK((back.states.back().x - s0.x).norm() < 1e-6);
    CHECK((back.states.back().p + s0.p).norm() < 1e-6);
}

TEST_CASE("energy conservation and the drift monitor") {
    IntegratorConfig cfg;
    cfg.step = 1e-3;
    cfg.record_every = 1000;
    const auto traj = integrate(pendulum(), {v2(0.1, 0.0), v2(0.7, 0.3)}, 100.0, cfg);
    CHECK(traj.max_drift < 1e-4);
    cfg.step = 0.08;
    cfg.max_energy_drift = 1e-12;
    CHECK_THROWS_AS(integrate(pendulum(), {v2(0.1, 0.0), v2(3.0, 0.3)}, 8.0, cfg), EnergyDriftExceeded);
    cfg.scheme = Scheme::verlet;
    CHECK_THROWS_AS(integrate(HamiltonianModel::mane(mane_vector_field()), {v2(0, 0), v2(0, 0)}, 1.0, cfg),
                    std::invalid_argument);
}

TEST_CASE("critical value of mechanical systems") {
    CHECK(critical_value_mechanical(ScalarGrid::sample(2, 16, [](const Vec&) { return 0.0; })) == 0.0);
    CHECK(critical_value_mechanical(ScalarGrid::sample(2, 16, [](const Vec& x) { return std::cos(2 * kPi * x[0]); })) ==
          doctest::Approx(1.0));
    CounterRng rng(1, 1);
    std::vector<double> values(24 * 24);
    for (auto& v : values) v = rng.uniform(-2, 3);
    const ScalarGrid V(GridShape(2, 24), values);
    double lo = values[0];
    for (double v : values) lo = std::min(lo, v);
    CHECK(critical_value_mechanical(V) == -lo);
}

TEST_CASE("closed orbits of the zero section") {
    const auto orbits = mane_zero_section_orbits();
    REQUIRE(orbits.size() == 2);
    CHECK(orbits[0].homology == IntHomologyClass{0, 1});
    CHECK(orbits[1].homology == IntHomologyClass{0, -1});
    CHECK(orbits[0].start[0] == 0.25);
    CHECK(orbits[1].start[0] == 0.75);
    for (const auto& o : orbits) {
        CHECK(o.period == 1.0);
        CHECK(o.residual < 1e-12);
    }
}

TEST_CASE("zero section flows along X and is attracted to x1 = 1/4") {
    const auto mane = HamiltonianModel::mane(mane_vector_field());
    IntegratorConfig cfg;
    cfg.step = 1e-3;
    const auto traj = integrate(mane, {v2(0.0, 0.3), v2(0, 0)}, 10.0, cfg);
    for (const auto& s : traj.states) CHECK(s.p.norm() == 0.0);
    // On p = 0 the velocity is X(x): compare with a central difference of the path.
    double worst = 0.0;
    for (std::size_t k = 1; k + 1 < traj.states.size(); k += 997) {
        const Vec vel = (traj.states[k + 1].x - traj.states[k - 1].x) / (2 * cfg.step);
        const double x1 = traj.states[k].x[0];
        worst = std::max(worst, (vel - v2(std::cos(2 * kPi * x1), std::sin(2 * kPi * x1))).norm());
    }
    CHECK(worst < 1e-5);
    CHECK(traj.states.back().x[0] == doctest::Approx(0.25).epsilon(1e-9));
}
