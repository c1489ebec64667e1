#include <cmath>

#include "doctest.h"
#include "rotlab/exact.hpp"

using namespace rotlab;

namespace {
Rational r(long long p, long long q = 1) { return Rational(p, q); }
const std::vector<std::string> kBasis = {"1", "sqrt2", "sqrt3"};

IrrationalVector make(std::vector<std::vector<Rational>> coeffs) { return IrrationalVector{kBasis, std::move(coeffs)}; }

MultiQuadratic component(const IrrationalVector& v, int i) {
    MultiQuadratic out;
    for (int j = 0; j < v.basis_size(); ++j) {
        const long long rad = parse_radical_label(v.basis[j]);
        out = out + MultiQuadratic(v.coeffs[i][j]) * (rad == 1 ? MultiQuadratic(r(1)) : MultiQuadratic::sqrt_of(rad));
    }
    return out;
}
}  // namespace

TEST_CASE("rank over the rationals") {
    CHECK(rational_rank({{r(1), r(2)}, {r(2), r(4)}}) == 1);
    CHECK(rational_rank({{r(1, 3), r(1)}, {r(1), r(3)}, {r(0), r(1)}}) == 2);
    CHECK(rational_rank({{r(0), r(0)}}) == 0);
}

TEST_CASE("radical labels") {
    CHECK(parse_radical_label("1") == 1);
    CHECK(parse_radical_label("sqrt2") == 2);
    CHECK(parse_radical_label("sqrt(15)") == 15);
    CHECK(parse_radical_label("sqrt4") == 0);
    CHECK(parse_radical_label("pi") == 0);
}

TEST_CASE("totally irrational vectors") {
    CHECK(totally_irrational_check(make({{r(1), r(0), r(0)}, {r(0), r(1), r(0)}, {r(0), r(0), r(1)}})));
    CHECK_FALSE(totally_irrational_check(make({{r(1), r(0), r(0)}, {r(2), r(0), r(0)}, {r(3), r(0), r(0)}})));
    CHECK_FALSE(totally_irrational_check(make({{r(0), r(1), r(0)}, {r(0), r(2), r(0)}, {r(1), r(0), r(0)}})));
    // (1 + sqrt2, sqrt2 - 1, 1): the first minus the second is 2 times the third.
    CHECK_FALSE(totally_irrational_check(make({{r(1), r(1), r(0)}, {r(-1), r(1), r(0)}, {r(1), r(0), r(0)}})));
}

TEST_CASE("unimodular images keep the verdict") {
    CounterRng rng(3, 1);
    const auto v = make({{r(1), r(0), r(0)}, {r(0), r(1), r(0)}, {r(0), r(0), r(1)}});
    for (int i = 0; i < 20; ++i) {
        const IntMat A = random_unimodular(3, rng);
        CHECK(std::llabs(static_cast<long long>(std::llround(A.cast<double>().determinant()))) == 1);
        const auto w = transform(A, v);
        CHECK(totally_irrational_check(w));
        CHECK((w.approximate() - A.cast<double>() * v.approximate()).norm() < 1e-9);
    }
}

TEST_CASE("multiquadratic arithmetic") {
    const MultiQuadratic s2 = MultiQuadratic::sqrt_of(2), s3 = MultiQuadratic::sqrt_of(3);
    CHECK((s2 * s2) == MultiQuadratic(r(2)));
    CHECK((s2 * s3) == MultiQuadratic::sqrt_of(6));
    CHECK(((s2 + s3) * (s2 - s3)) == MultiQuadratic(r(-1)));
    const MultiQuadratic x = MultiQuadratic(r(1)) + s2 + s3;
    CHECK((x * x.inverse()) == MultiQuadratic(r(1)));
    CHECK((x / x) == MultiQuadratic(r(1)));
    CHECK(x.to_double() == doctest::Approx(1 + std::sqrt(2.0) + std::sqrt(3.0)));
    CHECK((x - x).is_zero());
    CHECK_FALSE(s2.is_rational());
    CHECK_THROWS(MultiQuadratic().inverse());
}

TEST_CASE("rationality obstruction witness") {
    const auto v1 = make({{r(1), r(0), r(0)}, {r(0), r(1), r(0)}, {r(0), r(0), r(1)}});
    const auto v2 = make({{r(0), r(1), r(0)}, {r(1), r(0), r(0)}, {r(0), r(0), r(1)}});
    const auto w = rationality_obstruction(v1, v2);
    // Independent recomputation of alpha v1 + beta v2.
    for (int i = 0; i < 3; ++i) CHECK((w.alpha * component(v1, i) + w.beta * component(v2, i)) == w.w[i]);
    CHECK(w.w[0] == MultiQuadratic(r(1)));
    CHECK(w.w[1] == MultiQuadratic(r(1)));
    CHECK_FALSE(totally_irrational_check(w.witness));
    CHECK((w.witness.approximate() - Vec::Map(std::vector<double>{w.w[0].to_double(), w.w[1].to_double(),
                                                                   w.w[2].to_double()}.data(), 3))
              .norm() < 1e-12);
}

TEST_CASE("rationality obstruction errors") {
    const auto v1 = make({{r(1), r(0), r(0)}, {r(0), r(1), r(0)}, {r(0), r(0), r(1)}});
    const auto twice = make({{r(2), r(0), r(0)}, {r(0), r(2), r(0)}, {r(0), r(0), r(2)}});
    CHECK_THROWS_AS(rationality_obstruction(v1, twice), NotIndependent);
    const auto rational = make({{r(1), r(0), r(0)}, {r(2), r(0), r(0)}, {r(3), r(0), r(0)}});
    CHECK_THROWS_AS(rationality_obstruction(rational, v1), PreconditionViolation);
    const IrrationalVector pi{{"1", "pi", "e"}, {{r(1), r(0), r(0)}, {r(0), r(1), r(0)}, {r(0), r(0), r(1)}}};
    CHECK_THROWS_AS(rationality_obstruction(pi, pi), NotApplicable);
}

TEST_CASE("JSON round trip") {
    const auto j = nlohmann::json::parse(R"({"basis": ["1", "sqrt2"], "coeffs": [[1, "1/3"], [[2, 5], 0]]})");
    const auto v = irrational_vector_from_json(j);
    CHECK(v.coeffs[0][1] == r(1, 3));
    CHECK(v.coeffs[1][0] == r(2, 5));
    const auto back = irrational_vector_from_json(to_json(v));
    CHECK(back.basis == v.basis);
    CHECK(back.coeffs == v.coeffs);
    CHECK_THROWS_AS(irrational_vector_from_json(nlohmann::json::parse(R"({"basis": ["1"], "coeffs": [[1]], "x": 0})")),
                    FormatError);
    CHECK_THROWS_AS(irrational_vector_from_json(nlohmann::json::parse(R"({"basis": ["1"], "coeffs": [[1, 2]]})")),
                    FormatError);
}
