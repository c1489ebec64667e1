#pragma once

// Rational approximation of a cohomology class and the resulting fibration
// of T^n over the circle, plus the integer linear algebra it relies on.

#include "rotlab/homology.hpp"
#include "rotlab/torus.hpp"

namespace rotlab {

/// Integer matrix M with det M = +-1 whose first column is the primitive
/// vector p. Throws std::invalid_argument if p is not primitive.
IntMat unimodular_completion(const IntVec& p);

/// Exact inverse of a unimodular integer matrix.
IntMat unimodular_inverse(const IntMat& m);

long long gcd_of(const IntVec& v);

struct TischlerApproximation {
    IntVec p;          // numerators, p / q approximates c
    long long q = 1;   // smallest denominator achieving the tolerance
    IntVec primitive;  // p / gcd(p): covector of the fibration x -> <primitive, x> mod 1
    double error = 0.0;            // |c - p/q|_inf
    double dirichlet_bound = 0.0;  // ceil(1/eps)^n, an a priori bound on q

    /// Fibration map T^n -> [0, 1).
    double fibre_coordinate(const TorusPoint& x) const;
};

/// Smallest q with |c - round(q c)/q|_inf <= eps. eps below 1e-12 is raised to
/// 1e-12 so exact rational classes terminate.
TischlerApproximation tischler_fibration(const Vec& c, double eps);

struct FibreCheck {
    int components = 0;       // connected components of the discrete level set
    IntMat fibre_basis;       // n x (n-1) integer basis of the fibre lattice
    long long winding_det = 0;  // index of the loop winding lattice in the fibre lattice (signed)
    bool is_torus = false;    // single component with unimodular winding classes
};

/// Counts the components of the level set {<p, x> = 0 mod 1} on the grid
/// (Z/R)^n, linking nodes that differ by a fibre lattice vector, and checks
/// that the winding classes of the fibre loops span a primitive sublattice.
FibreCheck check_fibration_levels(const IntVec& p, int resolution);

}  // namespace rotlab
