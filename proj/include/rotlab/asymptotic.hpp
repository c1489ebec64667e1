#pragma once

// Rotation vectors of trajectories, closed quasi-orbits and their homology
// classes, accumulation sets, and the audit of the slope-3 cone bound.

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "rotlab/grid_geodesic.hpp"
#include "rotlab/hamiltonian.hpp"
#include "rotlab/homology.hpp"
#include "rotlab/torus.hpp"

namespace rotlab {

struct RotationEstimate {
    Vec value;
    double horizon = 0.0;
    double cauchy_gap = 0.0;         // max pairwise deviation of the partial estimates
    std::vector<double> sub_horizons;  // T, T/2, T/4, ...
    std::vector<Vec> partial;          // estimate at each sub-horizon
};

/// (x(T) - x(0)) / T with partial estimates on the dyadic sub-horizons T/2^j,
/// j < window. Positions between samples are linearly interpolated.
RotationEstimate rotation_vector(const LiftedTrajectory& traj, int window = 4);
RotationEstimate rotation_vector(std::span<const double> times, std::span<const Vec> positions, int window = 4);

/// Closes an orbit segment with a shortest path to a lift of its base point.
class ClosingOracle {
public:
    virtual ~ClosingOracle() = default;
    virtual int dim() const = 0;
    virtual GridGeodesic::Closing close(const Vec& from, const Vec& base) const = 0;
    /// Upper estimate of the diameter of the torus for this metric.
    virtual double diameter() const = 0;
    virtual std::string label() const = 0;
};

/// Straight segments of a constant metric g (exact geodesics).
class ConstantMetricClosing final : public ClosingOracle {
public:
    explicit ConstantMetricClosing(Mat g, double ambiguity_tol = 0.02);
    int dim() const override { return static_cast<int>(g_.rows()); }
    GridGeodesic::Closing close(const Vec& from, const Vec& base) const override;
    double diameter() const override { return diameter_; }
    std::string label() const override { return "constant-metric"; }
    const Mat& metric() const { return g_; }

private:
    Mat g_;
    double tol_;
    double diameter_ = 0.0;
};

/// Grid geodesics of a sampled metric.
class GridClosing final : public ClosingOracle {
public:
    explicit GridClosing(std::shared_ptr<const GridGeodesic> geodesic, double ambiguity_tol = 0.02);
    int dim() const override { return geodesic_->dim(); }
    GridGeodesic::Closing close(const Vec& from, const Vec& base) const override {
        return geodesic_->closing(from, base, tol_);
    }
    double diameter() const override { return diameter_; }
    std::string label() const override { return "grid-geodesic"; }

private:
    std::shared_ptr<const GridGeodesic> geodesic_;
    double tol_;
    double diameter_ = 0.0;
};

struct QuasiOrbitRecord {
    TorusPoint base;
    double horizon = 0.0;
    Vec orbit_displacement;           // x(T) - x(0) in the cover
    IntHomologyClass closing_class;   // total_class - round(orbit_displacement)
    IntHomologyClass total_class;     // class of orbit segment + closing path
    double closing_length = 0.0;
    bool ambiguous = false;
};

/// Quasi-orbit from lifted endpoints x(0) = start, x(T) = end.
QuasiOrbitRecord quasi_orbit_from_endpoints(const Vec& start, const Vec& end, double T, const ClosingOracle& closing);
/// Quasi-orbit of a trajectory at horizon T (measured from its first sample).
QuasiOrbitRecord quasi_orbit_class(const LiftedTrajectory& traj, const ClosingOracle& closing, double T);

struct Cluster {
    Vec center;
    double radius = 0.0;  // max distance of a member from the center
    std::size_t count = 0;
};

/// Single-linkage clusters at the given linkage radius, ordered by first member.
std::vector<Cluster> cluster_vectors(std::span<const Vec> points, double linkage = 0.05);

/// Lifted positions x(T_j) of the orbit of `base` at the increasing horizons T_j.
using OrbitSampler = std::function<std::vector<Vec>(const Vec& base, std::span<const double> horizons)>;

/// Sampler integrating `model` from (x, momentum(x)), one segment per horizon.
OrbitSampler model_sampler(const HamiltonianModel& model, std::function<Vec(const Vec&)> momentum,
                           IntegratorConfig config);

struct AccumulationResult {
    std::vector<double> horizons;
    std::vector<std::vector<QuasiOrbitRecord>> records;  // [sample][horizon]
    std::vector<Vec> final_estimates;                    // total_class / T at the last horizon
    std::vector<Cluster> clusters;
};

AccumulationResult homology_accumulation(std::span<const Vec> samples, std::span<const double> horizons,
                                         const OrbitSampler& sampler, const ClosingOracle& closing,
                                         double linkage = 0.05, int threads = 1);

/// Dyadic horizon grid T0, 2 T0, ..., 2^(k-1) T0.
std::vector<double> dyadic_horizons(double T0, int count);

/// Shortest integer class (in `norm`) with <c, k> > 0 among |k|_inf <= radius.
IntHomologyClass shortest_transverse_class(const NormModel& norm, const Vec& cohomology, int radius = 2);

struct ConeAuditRow {
    int m = 0;
    double ratio = 0.0;
    double bound = 0.0;
    double slack = 0.0;
    IntHomologyClass total_class;
    double closing_length = 0.0;
};

struct ConeAudit {
    IntHomologyClass h;
    double generator_length = 0.0;  // stable norm of h
    double diameter = 0.0;
    double tolerance = 0.0;
    std::vector<ConeAuditRow> rows;
    double limsup_estimate = 0.0;  // max ratio over the upper half of the m range
    bool within_bound = true;
};

/// For m = 1..m_max closes the orbit segment of length m * return_time from
/// `base` and compares ||class|| / (m ||h||) against 3 + 3D/(m ||h||) + tolerance.
ConeAudit cone_bound_audit(const std::function<Vec(const Vec&, double)>& flow, const Vec& base, double return_time,
                           const IntHomologyClass& h, int m_max, const ClosingOracle& closing, const NormModel& norm,
                           double tolerance = 0.05);

void write_cone_audit_csv(const ConeAudit& audit, const std::string& path);

/// Linear flow x + t X on T^n with X_1 = 1, made geodesible for the fibration
/// by the leaves x_1 = const: the metric is constant, the orbits are geodesics
/// and the return time to a leaf is 1.
struct FibredLinearFlow {
    Vec direction;
    Mat metric;
    std::function<Vec(const Vec&, double)> flow;
};
FibredLinearFlow fibred_linear_flow(const Vec& direction);

}  // namespace rotlab
