#include "rotlab/asymptotic.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numeric>

#include "rotlab/metric_constructions.hpp"
#include "rotlab/parallel.hpp"

namespace rotlab {

namespace {

Vec position_at(std::span<const double> times, std::span<const Vec> positions, double t) {
    auto it = std::lower_bound(times.begin(), times.end(), t);
    if (it == times.end()) return positions.back();
    const std::size_t i = static_cast<std::size_t>(it - times.begin());
    if (*it == t || i == 0) return positions[i];
    const double t0 = times[i - 1], t1 = times[i];
    const double s = (t - t0) / (t1 - t0);
    return (1.0 - s) * positions[i - 1] + s * positions[i];
}

std::vector<Vec> positions_of(const LiftedTrajectory& traj) {
    std::vector<Vec> xs;
    xs.reserve(traj.states.size());
    for (const auto& s : traj.states) xs.push_back(s.x);
    return xs;
}

}  // namespace

RotationEstimate rotation_vector(std::span<const double> times, std::span<const Vec> positions, int window) {
    if (times.size() != positions.size() || times.size() < 2)
        throw std::invalid_argument("rotation_vector: need at least two samples");
    if (window < 1) throw std::invalid_argument("rotation_vector: window must be positive");
    const double t0 = times.front();
    const double T = times.back() - t0;
    if (!(T > 0.0)) throw std::invalid_argument("rotation_vector: horizon must be positive");
    RotationEstimate est;
    est.horizon = T;
    const Vec& x0 = positions.front();
    for (int j = 0; j < window; ++j) {
        const double Tj = T / std::ldexp(1.0, j);
        est.sub_horizons.push_back(Tj);
        const Vec xj = j == 0 ? positions.back() : position_at(times, positions, t0 + Tj);
        est.partial.push_back((xj - x0) / Tj);
    }
    est.value = est.partial.front();
    for (std::size_t i = 0; i < est.partial.size(); ++i)
        for (std::size_t j = i + 1; j < est.partial.size(); ++j)
            est.cauchy_gap = std::max(est.cauchy_gap, (est.partial[i] - est.partial[j]).norm());
    return est;
}

RotationEstimate rotation_vector(const LiftedTrajectory& traj, int window) {
    auto xs = positions_of(traj);
    return rotation_vector(traj.times, xs, window);
}

// ---------------------------------------------------------------------------

ConstantMetricClosing::ConstantMetricClosing(Mat g, double ambiguity_tol) : g_(std::move(g)), tol_(ambiguity_tol) {
    const int n = dim();
    if (g_.cols() != n) throw InvalidMetric("closing metric must be square");
    Eigen::SelfAdjointEigenSolver<Mat> es(g_, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() <= 0.0) throw InvalidMetric("closing metric must be positive definite");
    // Covering radius of Z^n in the g-norm, sampled on an M^n grid of the unit
    // cell, plus the largest distance to the nearest sample.
    const int M = n <= 3 ? 24 : 8;
    long long count = 1;
    for (int a = 0; a < n; ++a) count *= M + 1;
    double worst = 0.0;
    Vec x(n);
    for (long long c = 0; c < count; ++c) {
        long long rest = c;
        for (int a = 0; a < n; ++a) {
            x[a] = static_cast<double>(rest % (M + 1)) / M;
            rest /= M + 1;
        }
        worst = std::max(worst, close(x, Vec::Zero(n)).length);
    }
    diameter_ = worst + std::sqrt(es.eigenvalues().maxCoeff() * n) / (2.0 * M);
}

GridGeodesic::Closing ConstantMetricClosing::close(const Vec& from, const Vec& base) const {
    const int n = dim();
    if (from.size() != n || base.size() != n) throw std::invalid_argument("closing: dimension mismatch");
    const Vec d = from - base;
    IntVec k(n), best_k(n);
    double best = std::numeric_limits<double>::infinity(), second = best;
    long long count = 1;
    for (int a = 0; a < n; ++a) count *= 4;
    for (long long c = 0; c < count; ++c) {
        long long rest = c;
        for (int a = 0; a < n; ++a) {
            k[a] = static_cast<long long>(std::floor(d[a])) - 1 + rest % 4;
            rest /= 4;
        }
        const Vec r = k.cast<double>() - d;
        const double len = std::sqrt(std::max(0.0, r.dot(g_ * r)));
        if (len < best) {
            second = best;
            best = len;
            best_k = k;
        } else if (len < second) {
            second = len;
        }
    }
    return GridGeodesic::Closing{IntHomologyClass(best_k), best, second <= best * (1.0 + tol_) + 1e-12};
}

GridClosing::GridClosing(std::shared_ptr<const GridGeodesic> geodesic, double ambiguity_tol)
    : geodesic_(std::move(geodesic)), tol_(ambiguity_tol) {
    if (!geodesic_) throw std::invalid_argument("grid closing needs a geodesic engine");
    diameter_ = geodesic_->diameter();
}

// ---------------------------------------------------------------------------

QuasiOrbitRecord quasi_orbit_from_endpoints(const Vec& start, const Vec& end, double T, const ClosingOracle& closing) {
    if (start.size() != closing.dim() || end.size() != closing.dim())
        throw std::invalid_argument("quasi-orbit: dimension mismatch");
    QuasiOrbitRecord rec;
    rec.base = TorusPoint(start);
    rec.horizon = T;
    rec.orbit_displacement = end - start;
    auto c = closing.close(end, start);
    rec.total_class = c.shift;
    rec.closing_length = c.length;
    rec.ambiguous = c.ambiguous;
    rec.closing_class = IntHomologyClass(IntVec(c.shift.coeffs - round_to_class(rec.orbit_displacement).coeffs));
    return rec;
}

QuasiOrbitRecord quasi_orbit_class(const LiftedTrajectory& traj, const ClosingOracle& closing, double T) {
    if (traj.times.empty()) throw std::invalid_argument("quasi-orbit: empty trajectory");
    if (T < 0.0 || T > traj.horizon() * (1.0 + 1e-12)) throw std::invalid_argument("quasi-orbit: T outside the horizon");
    auto xs = positions_of(traj);
    const Vec end = position_at(traj.times, xs, traj.times.front() + T);
    return quasi_orbit_from_endpoints(xs.front(), end, T, closing);
}

std::vector<Cluster> cluster_vectors(std::span<const Vec> points, double linkage) {
    const std::size_t N = points.size();
    std::vector<std::size_t> parent(N);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t i) {
        while (parent[i] != i) i = parent[i] = parent[parent[i]];
        return i;
    };
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = i + 1; j < N; ++j)
            if ((points[i] - points[j]).norm() <= linkage) {
                std::size_t a = find(i), b = find(j);
                if (a != b) parent[std::max(a, b)] = std::min(a, b);
            }
    std::vector<Cluster> out;
    std::vector<long> slot(N, -1);
    std::vector<std::vector<std::size_t>> members;
    for (std::size_t i = 0; i < N; ++i) {
        std::size_t r = find(i);
        if (slot[r] < 0) {
            slot[r] = static_cast<long>(members.size());
            members.emplace_back();
        }
        members[static_cast<std::size_t>(slot[r])].push_back(i);
    }
    for (const auto& m : members) {
        Cluster c;
        c.center = Vec::Zero(points[m.front()].size());
        for (std::size_t i : m) c.center += points[i];
        c.center /= static_cast<double>(m.size());
        for (std::size_t i : m) c.radius = std::max(c.radius, (points[i] - c.center).norm());
        c.count = m.size();
        out.push_back(std::move(c));
    }
    return out;
}

OrbitSampler model_sampler(const HamiltonianModel& model, std::function<Vec(const Vec&)> momentum,
                           IntegratorConfig config) {
    config.record_every = std::numeric_limits<int>::max();
    return [model, momentum = std::move(momentum), config](const Vec& base, std::span<const double> horizons) {
        std::vector<Vec> out;
        PhaseState s{base, momentum(base)};
        double t = 0.0;
        for (double T : horizons) {
            if (T < t) throw std::invalid_argument("sampler: horizons must increase");
            if (T > t) s = integrate(model, s, T - t, config).states.back();
            t = T;
            out.push_back(s.x);
        }
        return out;
    };
}

AccumulationResult homology_accumulation(std::span<const Vec> samples, std::span<const double> horizons,
                                         const OrbitSampler& sampler, const ClosingOracle& closing, double linkage,
                                         int threads) {
    if (samples.empty()) throw std::invalid_argument("homology_accumulation: no samples");
    if (horizons.empty()) throw std::invalid_argument("homology_accumulation: no horizons");
    AccumulationResult res;
    res.horizons.assign(horizons.begin(), horizons.end());
    res.records.resize(samples.size());
    parallel_for(samples.size(), threads, [&](std::size_t i) {
        auto ends = sampler(samples[i], horizons);
        for (std::size_t j = 0; j < horizons.size(); ++j)
            res.records[i].push_back(quasi_orbit_from_endpoints(samples[i], ends[j], horizons[j], closing));
    });
    const double T = horizons.back();
    for (const auto& r : res.records) res.final_estimates.push_back(r.back().total_class.to_real() / T);
    res.clusters = cluster_vectors(res.final_estimates, linkage);
    return res;
}

std::vector<double> dyadic_horizons(double T0, int count) {
    std::vector<double> out;
    for (int j = 0; j < count; ++j) out.push_back(std::ldexp(T0, j));
    return out;
}

IntHomologyClass shortest_transverse_class(const NormModel& norm, const Vec& cohomology, int radius) {
    const Eigen::Index n = cohomology.size();
    long long count = 1;
    for (Eigen::Index a = 0; a < n; ++a) count *= 2 * radius + 1;
    IntVec k(n), best(n);
    double best_len = std::numeric_limits<double>::infinity();
    for (long long c = 0; c < count; ++c) {
        long long rest = c;
        for (Eigen::Index a = 0; a < n; ++a) {
            k[a] = rest % (2 * radius + 1) - radius;
            rest /= 2 * radius + 1;
        }
        const Vec kr = k.cast<double>();
        if (cohomology.dot(kr) <= 1e-12) continue;
        const double len = norm(kr);
        if (len < best_len - 1e-12) {
            best_len = len;
            best = k;
        }
    }
    if (!std::isfinite(best_len)) throw std::invalid_argument("no transverse class in the search radius");
    return IntHomologyClass(best);
}

ConeAudit cone_bound_audit(const std::function<Vec(const Vec&, double)>& flow, const Vec& base, double return_time,
                           const IntHomologyClass& h, int m_max, const ClosingOracle& closing, const NormModel& norm,
                           double tolerance) {
    if (m_max < 1) throw std::invalid_argument("cone audit: m_max must be positive");
    if (!(return_time > 0.0)) throw std::invalid_argument("cone audit: return time must be positive");
    ConeAudit audit;
    audit.h = h;
    audit.generator_length = norm(h.to_real());
    audit.diameter = closing.diameter();
    audit.tolerance = tolerance;
    for (int m = 1; m <= m_max; ++m) {
        const double T = m * return_time;
        auto rec = quasi_orbit_from_endpoints(base, flow(base, T), T, closing);
        ConeAuditRow row;
        row.m = m;
        row.total_class = rec.total_class;
        row.closing_length = rec.closing_length;
        row.ratio = norm(rec.total_class.to_real()) / (m * audit.generator_length);
        row.bound = 3.0 + 3.0 * audit.diameter / (m * audit.generator_length);
        row.slack = row.bound - row.ratio;
        if (row.ratio > row.bound + tolerance) audit.within_bound = false;
        audit.rows.push_back(row);
    }
    const int lo = std::max(1, m_max / 2);
    for (const auto& r : audit.rows)
        if (r.m >= lo) audit.limsup_estimate = std::max(audit.limsup_estimate, r.ratio);
    return audit;
}

void write_cone_audit_csv(const ConeAudit& audit, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "m,ratio,bound,slack\n" << std::setprecision(17);
    for (const auto& r : audit.rows) out << r.m << ',' << r.ratio << ',' << r.bound << ',' << r.slack << '\n';
}

FibredLinearFlow fibred_linear_flow(const Vec& direction) {
    if (direction.size() < 2 || direction[0] == 0.0)
        throw std::invalid_argument("fibred linear flow needs a direction with nonzero first component");
    FibredLinearFlow f;
    f.direction = direction / direction[0];
    const Eigen::Index n = direction.size();
    Vec beta = Vec::Zero(n);
    beta[0] = 1.0;
    f.metric = geodesible_matrix(Mat::Identity(n, n), f.direction, beta, f.direction.squaredNorm());
    Vec X = f.direction;
    f.flow = [X](const Vec& x, double t) { return Vec(x + t * X); };
    return f;
}

}  // namespace rotlab
