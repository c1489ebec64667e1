#pragma once

// Exact arithmetic for vectors whose components are rational combinations of
// a declared, rationally independent family of reals {1, b_1, ..., b_k}.

#include <map>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "json.hpp"
#include "rotlab/rng.hpp"
#include "rotlab/types.hpp"

namespace rotlab {

using Rational = boost::multiprecision::cpp_rational;
using RationalMatrix = std::vector<std::vector<Rational>>;

/// Rank over Q by fraction-exact Gaussian elimination.
int rational_rank(RationalMatrix rows);

/// Component i equals sum_j coeffs[i][j] * basis_j. The independence of the
/// basis is an input assumption and is never checked.
struct IrrationalVector {
    std::vector<std::string> basis;
    RationalMatrix coeffs;

    int dim() const { return static_cast<int>(coeffs.size()); }
    int basis_size() const { return static_cast<int>(basis.size()); }
    /// Floating value, available when every label is "1" or "sqrtN".
    Vec approximate() const;
};

/// True iff the components are rationally independent.
bool totally_irrational_check(const IrrationalVector& v);

/// Components A v for an integer matrix A.
IrrationalVector transform(const IntMat& A, const IrrationalVector& v);

/// Product of random elementary moves, determinant +-1.
IntMat random_unimodular(int n, CounterRng& rng, int moves = 12);

/// Element of Q(sqrt p_1, ..., sqrt p_r): rational coefficients keyed by
/// squarefree radicands (key 1 is the rational part).
class MultiQuadratic {
public:
    MultiQuadratic() = default;
    MultiQuadratic(const Rational& r);  // NOLINT: implicit on purpose
    static MultiQuadratic sqrt_of(long long squarefree);

    MultiQuadratic operator+(const MultiQuadratic& o) const;
    MultiQuadratic operator-(const MultiQuadratic& o) const;
    MultiQuadratic operator-() const;
    MultiQuadratic operator*(const MultiQuadratic& o) const;
    MultiQuadratic operator/(const MultiQuadratic& o) const;
    MultiQuadratic inverse() const;
    bool operator==(const MultiQuadratic& o) const { return terms_ == o.terms_; }

    bool is_zero() const { return terms_.empty(); }
    bool is_rational() const { return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first == 1); }
    Rational rational_part() const;
    double to_double() const;
    const std::map<long long, Rational>& terms() const { return terms_; }
    std::string to_string() const;

private:
    std::map<long long, Rational> terms_;
    void add_term(long long key, const Rational& c);
};

/// Squarefree radicand of a label "1" or "sqrtN" (also "sqrt(N)"); 0 if the
/// label is not of that form or N is not squarefree.
long long parse_radical_label(const std::string& label);

struct ObstructionWitness {
    std::pair<int, int> components;  // the pair fixed to Q1 = Q2 = 1
    MultiQuadratic alpha, beta;
    std::vector<MultiQuadratic> w;  // alpha v1 + beta v2
    IrrationalVector witness;       // w over its own radical basis
};

/// Solves alpha v1 + beta v2 = 1 on a pair of components exactly, choosing
/// the first pair whose 2 x 2 minor is invertible. Errors:
/// PreconditionViolation if an input is not totally irrational,
/// NotApplicable if a label is not a square root, NotIndependent if v1 and v2
/// are parallel.
ObstructionWitness rationality_obstruction(const IrrationalVector& v1, const IrrationalVector& v2);

/// {"basis": [...], "coeffs": [[c, ...], ...]} with each coefficient an
/// integer, a [num, den] pair or a "num/den" string.
IrrationalVector irrational_vector_from_json(const nlohmann::json& j);
nlohmann::json to_json(const IrrationalVector& v);

}  // namespace rotlab
