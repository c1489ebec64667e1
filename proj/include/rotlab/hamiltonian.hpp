#pragma once

// Tonelli Hamiltonians on T*T^n, their Legendre transforms, and lift-tracked
// integration of Hamilton's equations.
//
// Sign convention for mechanical systems: H = 1/2 g^{ij} p_i p_j - V(x), so the
// Lagrangian is L = 1/2 |v|_g^2 + V(x) and the strict critical value is -min V.

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "rotlab/homology.hpp"
#include "rotlab/metric_field.hpp"

namespace rotlab {

/// Periodic potential V with analytic gradient.
class Potential {
public:
    virtual ~Potential() = default;
    virtual int dim() const = 0;
    virtual double value(const double* x) const = 0;
    virtual void gradient(const double* x, double* g) const = 0;
};

struct CosineMode {
    double amplitude = 1.0;
    IntVec wave;         // integer wave vector k
    double phase = 0.0;  // term: amplitude * cos(2 pi <k, x> + phase)
};

std::shared_ptr<const Potential> potential_zero(int n);
std::shared_ptr<const Potential> potential_constant(int n, double c);
std::shared_ptr<const Potential> potential_cosine(int n, std::vector<CosineMode> modes);
/// Multilinear interpolation of a grid; the gradient is that of the interpolant.
std::shared_ptr<const Potential> potential_grid(ScalarGrid grid);
std::shared_ptr<const Potential> potential_function(int n, std::function<double(const Vec&)> value,
                                                    std::function<Vec(const Vec&)> gradient);

/// Inverse metric g^{ij}(x) with derivatives.
class InverseMetric {
public:
    virtual ~InverseMetric() = default;
    virtual int dim() const = 0;
    virtual bool is_constant() const { return false; }
    /// Writes g^{ij}(x) into out (row-major n x n).
    virtual void value(const double* x, double* out) const = 0;
    /// Writes d g^{ij} / d x_axis into out.
    virtual void derivative(const double* x, int axis, double* out) const = 0;
};

std::shared_ptr<const InverseMetric> inverse_metric_constant(const Mat& ginv);
/// Conformal metric g = exp(2 eps cos 2 pi x_axis) I, inverse exp(-2 eps cos 2 pi x_axis) I.
std::shared_ptr<const InverseMetric> inverse_metric_conformal(int n, double eps, int axis);
/// Pointwise inverse of a grid-sampled metric.
std::shared_ptr<const InverseMetric> inverse_metric_field(MetricField g);

/// Smooth vector field X with Jacobian, for Hamiltonians 1/2 |p|^2 + <p, X>.
class VectorField {
public:
    virtual ~VectorField() = default;
    virtual int dim() const = 0;
    virtual void value(const double* x, double* out) const = 0;
    /// Row-major Jacobian dX_i / dx_j.
    virtual void jacobian(const double* x, double* out) const = 0;
    virtual void value_and_jacobian(const double* x, double* X, double* J) const {
        value(x, X);
        jacobian(x, J);
    }
};

/// X(x) = (cos 2 pi x_1, sin 2 pi x_1) on T^2. The angle is reduced to the first
/// quadrant before evaluation, so X is exact at quarter turns and the closed
/// orbits at x_1 = 1/4 and 3/4 are exactly invariant.
std::shared_ptr<const VectorField> mane_vector_field();
std::shared_ptr<const VectorField> vector_field_function(int n, std::function<Vec(const Vec&)> value,
                                                         std::function<Mat(const Vec&)> jacobian);

struct PhaseState {
    Vec x;  // lifted position
    Vec p;
};

class HamiltonianModel {
public:
    enum class Kind { mechanical, mane, custom };

    static HamiltonianModel mechanical(std::shared_ptr<const InverseMetric> ginv, std::shared_ptr<const Potential> V);
    static HamiltonianModel mane(std::shared_ptr<const VectorField> X);
    /// Custom H with user gradients. Fibre convexity is spot-checked by finite
    /// differences on `convexity_samples` random points; throws
    /// PreconditionViolation if a Hessian in p is not positive definite.
    static HamiltonianModel custom(int n, std::function<double(const Vec&, const Vec&)> H,
                                   std::function<Vec(const Vec&, const Vec&)> grad_x,
                                   std::function<Vec(const Vec&, const Vec&)> grad_p, int convexity_samples = 64);

    Kind kind() const { return kind_; }
    int dim() const { return n_; }
    /// Verlet applies: mechanical with constant inverse metric.
    bool separable() const;

    double H(const Vec& x, const Vec& p) const;
    void gradients(const Vec& x, const Vec& p, Vec& grad_x, Vec& grad_p) const;
    /// d^2 H / dp^2.
    Mat hessian_pp(const Vec& x, const Vec& p) const;

    // Allocation-free kernels used by the integrators.
    double energy_raw(const double* x, const double* p) const;
    /// xdot = dH/dp, pdot = -dH/dx.
    void field_raw(const double* x, const double* p, double* xdot, double* pdot) const;

    const InverseMetric* inverse_metric() const { return ginv_.get(); }
    const Potential* potential() const { return V_.get(); }
    const VectorField* vector_field() const { return X_.get(); }

private:
    HamiltonianModel() = default;

    Kind kind_ = Kind::custom;
    int n_ = 0;
    std::shared_ptr<const InverseMetric> ginv_;
    std::shared_ptr<const Potential> V_;
    std::shared_ptr<const VectorField> X_;
    std::function<double(const Vec&, const Vec&)> h_;
    std::function<Vec(const Vec&, const Vec&)> hx_, hp_;
};

/// Momentum p with dH/dp(x, p) = v by damped Newton. Throws NewtonDiverged
/// after 100 iterations.
Vec legendre(const HamiltonianModel& model, const Vec& x, const Vec& v);

/// L(x, v) = <p, v> - H(x, p) at p = legendre(x, v).
double fenchel_L(const HamiltonianModel& model, const Vec& x, const Vec& v);

/// L with its partial derivatives: dL/dv = p and dL/dx = -dH/dx(x, p).
struct LagrangianJet {
    double L = 0.0;
    Vec dx;
    Vec dv;
    Vec p;
};
LagrangianJet lagrangian_jet(const HamiltonianModel& model, const Vec& x, const Vec& v);

enum class Scheme { verlet, rk4 };

struct IntegratorConfig {
    Scheme scheme = Scheme::rk4;
    double step = 1e-3;
    double max_energy_drift = 1e-4;
    int record_every = 1;  // keep every k-th state (the final state is always kept)
};

struct LiftedTrajectory {
    std::vector<double> times;
    std::vector<PhaseState> states;
    std::vector<double> energy;
    double max_drift = 0.0;  // max |H - H0| / max(|H0|, 1)

    double horizon() const { return times.empty() ? 0.0 : times.back() - times.front(); }
};

/// Integrates to time T with a step that divides T exactly. Positions are
/// never reduced mod 1, so the trajectory is its own continuous lift.
/// Throws EnergyDriftExceeded when the drift exceeds the configured bound.
LiftedTrajectory integrate(const HamiltonianModel& model, const PhaseState& start, double T,
                           const IntegratorConfig& config);

/// CSV with columns t, x1..xn, p1..pn, H.
void write_trajectory_csv(const LiftedTrajectory& traj, const std::string& path);

/// -min V over the grid nodes.
double critical_value_mechanical(const ScalarGrid& V);

struct ClosedOrbit {
    std::string name;
    Vec start;
    IntHomologyClass homology;
    double period = 0.0;
    double residual = 0.0;  // |x(period) - start - homology| after integration
};

/// The two closed orbits of the zero section of 1/2|p|^2 + <p, X> with
/// X = (cos 2 pi x_1, sin 2 pi x_1): x_1 = 1/4 in class (0,1) and x_1 = 3/4 in
/// class (0,-1), both of period 1. Residuals come from integrating each orbit.
std::vector<ClosedOrbit> mane_zero_section_orbits(double step = 1e-2);

}  // namespace rotlab
