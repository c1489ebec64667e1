#include <cmath>

#include "doctest.h"
#include "rotlab/tischler.hpp"

using namespace rotlab;

namespace {
IntVec iv(std::initializer_list<long long> xs) {
    IntVec v(static_cast<Eigen::Index>(xs.size()));
    Eigen::Index i = 0;
    for (auto x : xs) v[i++] = x;
    return v;
}
}  // namespace

TEST_CASE("coordinate class is its own fibration") {
    const auto t = tischler_fibration((Vec(3) << 1, 0, 0).finished(), 0.1);
    CHECK(t.q == 1);
    CHECK(t.p == iv({1, 0, 0}));
    CHECK(t.error == 0.0);
    CHECK(t.fibre_coordinate(TorusPoint((Vec(3) << 0.3, 0.9, 0.1).finished())) == doctest::Approx(0.3));
}

TEST_CASE("sqrt2 against its continued fraction") {
    // Convergents of sqrt2 are 1, 3/2, 7/5, 17/12. 17/12 is the first within
    // 0.01, and no denominator below 12 gets that close.
    const auto t = tischler_fibration((Vec(2) << 1, std::sqrt(2.0)).finished(), 0.01);
    CHECK(t.q == 12);
    CHECK(t.p == iv({12, 17}));
    CHECK(t.q <= 100);
    CHECK(std::abs(std::sqrt(2.0) - 17.0 / 12.0) <= 0.01);
    CHECK(std::abs(std::sqrt(2.0) - 7.0 / 5.0) > 0.01);
    CHECK(t.primitive == iv({12, 17}));
}

TEST_CASE("exact rational class") {
    const auto t = tischler_fibration((Vec(2) << 2, 4).finished(), 0.0);
    CHECK(t.q == 1);
    CHECK(t.p == iv({2, 4}));
    CHECK(t.primitive == iv({1, 2}));
    const auto half = tischler_fibration((Vec(2) << 0.5, 0.25).finished(), 0.0);
    CHECK(half.q == 4);
    CHECK(half.p == iv({2, 1}));
}

TEST_CASE("unimodular completion") {
    for (const IntVec& p : {iv({1, 0, 0}), iv({3, 5}), iv({12, 17, 21}), iv({-4, 9, 6}), iv({0, 0, 1})}) {
        const IntMat M = unimodular_completion(p);
        CHECK(M.col(0) == p);
        CHECK(std::abs(M.cast<double>().determinant()) == doctest::Approx(1.0));
        const IntMat Minv = unimodular_inverse(M);
        CHECK(M * Minv == IntMat::Identity(p.size(), p.size()));
    }
    CHECK_THROWS_AS(unimodular_completion(iv({2, 4})), std::invalid_argument);
    CHECK(gcd_of(iv({12, -18, 30})) == 6);
}

TEST_CASE("level sets of a primitive covector are tori") {
    for (const IntVec& p : {iv({1, 0, 0}), iv({1, 2}), iv({2, 3, 5})}) {
        const auto chk = check_fibration_levels(p, 30);
        CHECK(chk.components == 1);
        CHECK(chk.is_torus);
        CHECK(std::llabs(chk.winding_det) == 1);
        CHECK(chk.fibre_basis.cols() == p.size() - 1);
        CHECK((p.transpose() * chk.fibre_basis).isZero());
    }
}

TEST_CASE("a non-primitive covector has several level components") {
    const auto chk = check_fibration_levels(iv({2, 0}), 16);
    CHECK(chk.components == 2);
    CHECK_FALSE(chk.is_torus);
}
