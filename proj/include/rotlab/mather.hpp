#pragma once

// Minimal average action beta(h) over periodic curves, its convex conjugate
// alpha(c), and a numerical probe of the differentiability of alpha.

#include <functional>
#include <map>
#include <mutex>
#include <ostream>
#include <vector>

#include "rotlab/hamiltonian.hpp"

namespace rotlab {

/// Closed curve on the torus with lifted nodes x_0, ..., x_{N-1} and
/// x_N = x_0 + winding, traversed in time `period`.
struct PeriodicCurve {
    IntVec winding;
    std::vector<Vec> nodes;
    double period = 1.0;
};

struct BetaOptions {
    int nodes_per_period = 32;  // nodes per unit of time, at least 16
    int q_max = 16;             // denominator bound of the rational lattice
    int max_iterations = 20000;
    double gradient_tol = 1e-8;
    int base_scan = 8;  // starting offsets per axis tried before descent
    bool strict = false;  // throw NotConverged instead of flagging
};

struct BetaEvaluation {
    Vec h;
    double value = 0.0;
    bool converged = false;
    bool interpolated = false;  // h off the 1/q_max lattice
    PeriodicCurve optimizer;    // empty when interpolated
    int iterations = 0;
    double gradient_norm = 0.0;
};

/// Average action (1/N) sum_k L(midpoint_k, velocity_k) of a discrete curve.
double discrete_action(const HamiltonianModel& model, const PeriodicCurve& curve);

/// beta on rational homology classes by direct minimisation; other classes are
/// interpolated on the Kuhn simplex of the 1/q_max lattice that contains them,
/// which keeps every value an upper bound for a convex beta. Results for each
/// lattice point are cached and reused; the object may be shared by threads.
class BetaSolver {
public:
    BetaSolver(HamiltonianModel model, BetaOptions options = {});

    BetaEvaluation evaluate(const Vec& h) const;
    double operator()(const Vec& h) const { return evaluate(h).value; }

    /// Minimiser for h = p / q with T = q (T = 1 when p = 0).
    BetaEvaluation minimise(const IntVec& p, long long q) const;

    const HamiltonianModel& model() const { return model_; }
    const BetaOptions& options() const { return options_; }

private:
    HamiltonianModel model_;
    BetaOptions options_;
    mutable std::mutex mutex_;
    mutable std::map<std::vector<long long>, BetaEvaluation> cache_;

    BetaEvaluation lattice_value(const IntVec& k) const;  // h = k / q_max
};

using BetaFunction = std::function<double(const Vec&)>;

struct AlphaOptions {
    int grid = 9;  // samples per axis
    double tol = 1e-3;
    int max_refinements = 8;
    int threads = 1;
};

struct AlphaEvaluation {
    Vec c;
    double value = 0.0;
    Vec argmax;
    int refinements = 0;
    std::size_t samples = 0;
};

/// max_h <c, h> - beta(h) over a grid on the box [lo, hi], refined around the
/// maximiser until the value moves by less than tol. Throws BoxTooSmall when
/// the maximiser sits on the boundary of the box.
AlphaEvaluation alpha(const BetaFunction& beta, const Vec& c, const Vec& lo, const Vec& hi,
                      const AlphaOptions& options = {});

/// max_i <c, h_i> - beta_i.
double alpha_from_samples(const std::vector<Vec>& h, const std::vector<double>& beta, const Vec& c);

/// max over u of (alpha(c + delta u) + alpha(c - delta u) - 2 alpha(c)) / delta:
/// the jump of the one-sided slopes along u, which is O(delta) where alpha is
/// smooth and tends to the kink width where it is not.
double alpha_subdifferential_width(const BetaFunction& alpha_fn, const Vec& c, const std::vector<Vec>& directions,
                                   double delta);

void write_beta_table(std::ostream& os, const std::vector<BetaEvaluation>& rows);
void write_alpha_table(std::ostream& os, const std::vector<AlphaEvaluation>& rows);

}  // namespace rotlab
