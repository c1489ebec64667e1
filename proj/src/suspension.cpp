#include "rotlab/suspension.hpp"

#include <cmath>

#include "rotlab/tischler.hpp"

namespace rotlab {

Flow vector_field_flow(int n, std::function<Vec(const Vec&)> X, double step) {
    if (!(step > 0.0)) throw std::invalid_argument("vector field flow: step must be positive");
    Flow f;
    f.dim = n;
    f.velocity = X;
    f.advance = [X, step](const Vec& x0, double t) {
        if (t < 0.0) throw std::invalid_argument("flow: only forward time is supported");
        const long long steps = t == 0.0 ? 0 : static_cast<long long>(std::ceil(t / step - 1e-9));
        const double dt = steps == 0 ? 0.0 : t / static_cast<double>(steps);
        Vec x = x0;
        for (long long s = 0; s < steps; ++s) {
            const Vec k1 = X(x);
            const Vec k2 = X(x + 0.5 * dt * k1);
            const Vec k3 = X(x + 0.5 * dt * k2);
            const Vec k4 = X(x + dt * k3);
            x += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
        return x;
    };
    return f;
}

namespace {

// Solves y = x + tau (F(x) - x) for x by Newton with a difference Jacobian.
Point2 invert_isotopy(const TorusMapLift& F, const Point2& y, double tau) {
    auto G = [&](const Point2& x) { return Point2(x + tau * (F(x) - x) - y); };
    Point2 x = y - tau * (F(y) - y);
    Point2 g = G(x);
    const double h = 1e-7;
    for (int it = 0; it < 50; ++it) {
        if (g.norm() <= 1e-15 * (1.0 + y.norm())) return x;
        Eigen::Matrix2d J;
        for (int a = 0; a < 2; ++a) {
            Point2 up = x, dn = x;
            up[a] += h;
            dn[a] -= h;
            J.col(a) = (G(up) - G(dn)) / (2.0 * h);
        }
        const Point2 next = x - J.partialPivLu().solve(g);
        const Point2 gn = G(next);
        if (gn.norm() >= g.norm()) break;
        x = next;
        g = gn;
    }
    if (g.norm() > 1e-12 * (1.0 + y.norm()))
        throw NewtonDiverged("suspension flow: fibre isotopy could not be inverted");
    return x;
}

}  // namespace

Flow suspension_flow(const TorusMapLift& F) {
    Flow f;
    f.dim = 3;
    auto base_point = [F](const Vec& X, double tau) {
        const Point2 y(X[1], X[2]);
        return tau == 0.0 ? y : invert_isotopy(F, y, tau);
    };
    f.advance = [F, base_point](const Vec& X, double t) {
        if (X.size() != 3) throw std::invalid_argument("suspension flow: state must be (s, x, y)");
        if (t < 0.0) throw std::invalid_argument("flow: only forward time is supported");
        const double s0 = X[0];
        const double n0 = std::floor(s0);
        Point2 x = base_point(X, s0 - n0);
        const double s1 = s0 + t;
        const double n1 = std::floor(s1);
        x = F.iterate(x, static_cast<int>(n1 - n0));
        const double tau = s1 - n1;
        const Point2 y = tau == 0.0 ? x : Point2(x + tau * (F(x) - x));
        return Vec((Vec(3) << s1, y.x(), y.y()).finished());
    };
    f.velocity = [F, base_point](const Vec& X) {
        const double tau = X[0] - std::floor(X[0]);
        const Point2 x = base_point(X, tau);
        const Point2 d = F(x) - x;
        return Vec((Vec(3) << 1.0, d.x(), d.y()).finished());
    };
    return f;
}

SuspensionHomologySet suspension_homology_set(const TorusMapLift& F, int grid, int n_iter, int threads) {
    SuspensionHomologySet out;
    out.base = mz_rotation_set(F, grid, n_iter, threads);
    for (const auto& v : out.base.vertices) out.vertices.push_back((Vec(3) << 1.0, v.x(), v.y()).finished());
    return out;
}

TorusMapLift poincare_return_map(const Flow& flow, const IntVec& fibration, const PoincareOptions& options) {
    const int n = flow.dim;
    if (n != 3) throw std::invalid_argument("poincare_return_map: only flows on T^3 give planar return maps");
    if (fibration.size() != n) throw std::invalid_argument("poincare_return_map: covector dimension mismatch");
    const IntVec p = fibration / gcd_of(fibration);
    const IntMat Ci = unimodular_completion(p).transpose();
    const Mat C = Ci.cast<double>();
    const Mat Cinv = unimodular_inverse(Ci).cast<double>();
    const Vec pd = p.cast<double>();

    // Transversality on a fibre grid.
    const int m = options.transversality_samples;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            Vec z(3);
            z << 0.0, (i + 0.5) / m, (j + 0.5) / m;
            const Vec x = Cinv * z;
            const Vec v = flow.velocity(x);
            const double c = pd.dot(v) / (pd.norm() * v.norm());
            if (!(c > options.transversality))
                throw NotTransverse("flow makes angle cosine " + std::to_string(c) + " with the fibre normal");
        }

    auto ret = [flow, C, Cinv, pd, options](const Point2& z) {
        Vec x = Cinv * (Vec(3) << 0.0, z.x(), z.y()).finished();
        const double target = pd.dot(x) + 1.0;
        double t = 0.0;
        while (true) {
            const Vec next = flow.advance(x, options.scan_step);
            if (pd.dot(next) >= target) break;
            x = next;
            t += options.scan_step;
            if (t > options.max_time) throw NotTransverse("orbit did not return to the leaf");
        }
        double lo = 0.0, hi = options.scan_step;
        while (hi - lo > options.time_tol) {
            const double mid = 0.5 * (lo + hi);
            if (pd.dot(flow.advance(x, mid)) >= target)
                hi = mid;
            else
                lo = mid;
        }
        Vec hit = flow.advance(x, hi);
        const Vec v = flow.velocity(hit);
        hit -= (pd.dot(hit) - target) / pd.dot(v) * v;
        const Vec w = C * hit;
        return Point2(w[1], w[2]);
    };
    return TorusMapLift::custom("poincare_return", ret);
}

HedlundVerdict hedlund_scenario_check(const std::array<Vec, 3>& rotation_vectors, const TorusMapLift* F,
                                      int denominator_bound, double det_threshold, int max_searches) {
    Eigen::Matrix3d M;
    for (int i = 0; i < 3; ++i) {
        if (rotation_vectors[i].size() != 3) throw std::invalid_argument("hedlund check needs vectors in R^3");
        M.row(i) = rotation_vectors[i].transpose();
    }
    HedlundVerdict v;
    v.det = M.determinant();
    v.independent = std::abs(v.det) > det_threshold;
    for (const auto& r : rotation_vectors) {
        if (r[0] == 0.0) throw std::invalid_argument("hedlund check: fibre component must be nonzero");
        v.sigma.emplace_back(r[1] / r[0], r[2] / r[0]);
    }
    if (!v.independent) return v;
    RotationSet rs;
    rs.vertices = convex_hull(v.sigma);
    v.interior = rational_interior_points(rs, denominator_bound);
    if (F) {
        int done = 0;
        for (const auto& rp : v.interior.points) {
            if (done++ >= max_searches) break;
            v.searches.push_back(find_periodic_point(*F, rp.p, static_cast<int>(rp.q)));
        }
    }
    return v;
}

}  // namespace rotlab
