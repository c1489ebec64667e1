#include <cmath>
#include <numbers>
#include <sstream>

#include "doctest.h"
#include "rotlab/mather.hpp"

using namespace rotlab;

namespace {

constexpr double kPi = std::numbers::pi;

Vec v2(double a, double b) { return (Vec(2) << a, b).finished(); }

HamiltonianModel flat() { return HamiltonianModel::mechanical(inverse_metric_constant(Mat::Identity(2, 2)), potential_zero(2)); }

HamiltonianModel pendulum() {
    return HamiltonianModel::mechanical(inverse_metric_constant(Mat::Identity(2, 2)),
                                        potential_cosine(2, {{1.0, (IntVec(2) << 1, 0).finished(), 0.0}}));
}

// Rotating pendulum with L = v^2/2 + cos 2 pi x, one turn in unit time. Energy
// E = v^2/2 - V is conserved, so the turn time is the integral of
// dx / sqrt(2 (E + V)); E is fixed by bisection so that it equals 1, and the
// average action is then the integral of sqrt(2 (E + V)) dx minus E.
double pendulum_beta_oracle() {
    const int N = 200000;
    auto integral = [&](double E, bool action) {
        double s = 0.0;
        for (int i = 0; i < N; ++i) {
            const double w = std::sqrt(2 * (E + std::cos(2 * kPi * (i + 0.5) / N)));
            s += (action ? w : 1.0 / w) / N;
        }
        return s;
    };
    double lo = 1.0 + 1e-9, hi = 50.0;
    for (int it = 0; it < 100; ++it) {
        const double mid = 0.5 * (lo + hi);
        (integral(mid, false) > 1.0 ? lo : hi) = mid;
    }
    const double E = 0.5 * (lo + hi);
    return integral(E, true) - E;
}

}  // namespace

TEST_CASE("discrete action of a straight curve") {
    PeriodicCurve c;
    c.winding = (IntVec(2) << 1, 0).finished();
    c.period = 1.0;
    for (int k = 0; k < 16; ++k) c.nodes.push_back(v2(k / 16.0, 0.3));
    CHECK(discrete_action(flat(), c) == doctest::Approx(0.5));
}

TEST_CASE("flat beta is half the squared norm") {
    const BetaSolver beta(flat());
    CHECK(beta(v2(1, 0)) == doctest::Approx(0.5).epsilon(1e-3));
    CHECK(beta(v2(0.5, -0.25)) == doctest::Approx(0.5 * 0.3125).epsilon(1e-3));
    const auto off = beta.evaluate(v2(0.3 / 3.7, 0.1));
    CHECK(off.interpolated);
    CHECK(off.value >= 0.5 * off.h.squaredNorm() - 1e-9);
    CHECK(off.value - 0.5 * off.h.squaredNorm() < 1e-3);
}

TEST_CASE("mechanical beta at rest is min V") {
    const BetaSolver beta(pendulum());
    const auto ev = beta.evaluate(v2(0, 0));
    CHECK(ev.converged);
    CHECK(ev.value == doctest::Approx(-1.0).epsilon(1e-3));
}

TEST_CASE("rotating pendulum against the energy oracle") {
    const double oracle = pendulum_beta_oracle();
    BetaOptions opt;
    opt.nodes_per_period = 64;
    const BetaSolver beta(pendulum(), opt);
    const auto ev = beta.minimise((IntVec(2) << 1, 0).finished(), 1);
    CHECK(ev.converged);
    CHECK(ev.value == doctest::Approx(oracle).epsilon(1e-3));
}

TEST_CASE("beta is convex on sampled pairs") {
    const BetaSolver beta(pendulum());
    const std::vector<Vec> hs = {v2(0, 0), v2(0.5, 0), v2(1, 0), v2(0, 0.5), v2(0.5, 0.5), v2(-0.5, 0.25)};
    for (std::size_t i = 0; i < hs.size(); ++i)
        for (std::size_t j = i + 1; j < hs.size(); ++j)
            CHECK(beta(0.5 * (hs[i] + hs[j])) <= 0.5 * (beta(hs[i]) + beta(hs[j])) + 2e-3);
}

TEST_CASE("alpha of the flat model and Fenchel-Young") {
    const BetaSolver beta(flat());
    const Vec lo = Vec::Constant(2, -2.0), hi = Vec::Constant(2, 2.0);
    for (const Vec& c : {v2(0, 0), v2(0.5, -0.25), v2(1, 1)}) {
        const auto a = alpha(std::cref(beta), c, lo, hi);
        CHECK(a.value == doctest::Approx(0.5 * c.squaredNorm()).epsilon(2e-3).scale(1.0));
        for (const Vec& h : {v2(0, 0), v2(1, 0), v2(-0.5, 0.5)}) CHECK(a.value + beta(h) - c.dot(h) >= -1e-6);
    }
    CHECK_THROWS_AS(alpha(std::cref(beta), v2(3, 0), lo, hi), BoxTooSmall);
}

TEST_CASE("alpha from samples") {
    const std::vector<Vec> h = {v2(0, 0), v2(1, 0), v2(0, 1)};
    const std::vector<double> b = {0.0, 0.5, 0.5};
    CHECK(alpha_from_samples(h, b, v2(1, 0)) == doctest::Approx(0.5));
    CHECK(alpha_from_samples(h, b, v2(0, 0)) == 0.0);
}

TEST_CASE("subdifferential width") {
    const std::vector<Vec> dirs = {v2(1, 0), v2(0, 1)};
    auto kink = [](const Vec& c) { return std::abs(c[0]); };
    CHECK(alpha_subdifferential_width(kink, v2(0, 0), dirs, 1e-3) == doctest::Approx(2.0));
    auto smooth = [](const Vec& c) { return 0.5 * c.squaredNorm(); };
    const double w1 = alpha_subdifferential_width(smooth, v2(0.3, 0), dirs, 1e-2);
    const double w2 = alpha_subdifferential_width(smooth, v2(0.3, 0), dirs, 1e-3);
    CHECK(w1 == doctest::Approx(1e-2));
    CHECK(w2 == doctest::Approx(1e-3));
}

TEST_CASE("tables") {
    const BetaSolver beta(flat());
    std::ostringstream os;
    write_beta_table(os, {beta.evaluate(v2(1, 0))});
    const std::string s = os.str();
    CHECK(s.find('\n') != std::string::npos);
    CHECK(std::count(s.begin(), s.end(), '\n') == 2);
}
