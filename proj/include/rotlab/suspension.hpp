#pragma once

// Flows on T^n given by their time-t maps on the cover, suspensions of torus
// maps, first-return maps to the leaves of a linear fibration, and the
// three-orbit general-position check.

#include <array>
#include <functional>
#include <optional>

#include "rotlab/rotation_set.hpp"
#include "rotlab/types.hpp"

namespace rotlab {

struct Flow {
    int dim = 0;
    /// Lifted time-t map, t >= 0.
    std::function<Vec(const Vec&, double)> advance;
    std::function<Vec(const Vec&)> velocity;
};

/// RK4 flow of a periodic vector field with fixed internal step.
Flow vector_field_flow(int n, std::function<Vec(const Vec&)> X, double step = 1e-3);

/// Suspension of F on T^3 with coordinates (s, x, y): s advances at unit speed
/// and between integer times the fibre point moves along the straight segment
/// from x_k to F(x_k), so the time-1 return map of {s = 0} is F.
Flow suspension_flow(const TorusMapLift& F);

/// {(1, sigma) : sigma in rho(F)} as the vertices of the lifted polygon.
struct SuspensionHomologySet {
    RotationSet base;
    std::vector<Vec> vertices;  // (1, sigma_x, sigma_y)
};
SuspensionHomologySet suspension_homology_set(const TorusMapLift& F, int grid, int n_iter, int threads = 1);

struct PoincareOptions {
    double scan_step = 0.05;         // step of the crossing scan
    double time_tol = 1e-10;         // bisection tolerance on the crossing time
    double max_time = 1e3;           // give up beyond this return time
    double transversality = 0.1;     // required cos(angle) between flow and fibre normal
    int transversality_samples = 8;  // per fibre axis
};

/// First-return map to the leaf {<p, x> = 0} of the fibration x -> <p, x> mod 1,
/// in the fibre coordinates given by a unimodular completion of p (the last
/// n-1 coordinates of C x, where C has first row p). Throws NotTransverse.
TorusMapLift poincare_return_map(const Flow& flow, const IntVec& fibration, const PoincareOptions& options = {});

struct HedlundVerdict {
    bool independent = false;  // |det| > threshold
    double det = 0.0;
    std::vector<Point2> sigma;
    InteriorPoints interior;
    std::vector<PeriodicOrbitResult> searches;
};

/// General-position test for three suspension homologies (1, sigma_i). When the
/// determinant is nonzero and a map is supplied, rational points inside the
/// sigma triangle are searched for periodic orbits.
HedlundVerdict hedlund_scenario_check(const std::array<Vec, 3>& rotation_vectors, const TorusMapLift* F = nullptr,
                                      int denominator_bound = 3, double det_threshold = 1e-6, int max_searches = 8);

}  // namespace rotlab
