#include "rotlab/rotation_set.hpp"

#include <cmath>
#include <numbers>
#include <numeric>

#include "rotlab/parallel.hpp"

namespace rotlab {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

TorusMapLift TorusMapLift::translation(const Point2& alpha) {
    TorusMapLift F;
    F.kind_ = Kind::translation;
    F.name_ = "translation";
    F.params_ = {alpha.x(), alpha.y()};
    return F;
}

TorusMapLift TorusMapLift::two_param_shear(double a, double b) {
    TorusMapLift F;
    F.kind_ = Kind::two_param_shear;
    F.name_ = "two_param_shear";
    F.params_ = {a, b};
    return F;
}

TorusMapLift TorusMapLift::coupled_sine(double t1, double t2, double a, double b) {
    TorusMapLift F;
    F.kind_ = Kind::coupled_sine;
    F.name_ = "coupled_sine";
    F.params_ = {t1, t2, a, b};
    return F;
}

TorusMapLift TorusMapLift::linear(const Eigen::Matrix2d& A) {
    TorusMapLift F;
    F.kind_ = Kind::linear;
    F.name_ = "linear";
    F.params_ = {A(0, 0), A(0, 1), A(1, 0), A(1, 1)};
    return F;
}

TorusMapLift TorusMapLift::custom(std::string name, std::function<Point2(const Point2&)> f) {
    TorusMapLift F;
    F.kind_ = Kind::custom;
    F.name_ = std::move(name);
    F.custom_ = std::move(f);
    return F;
}

TorusMapLift TorusMapLift::conjugate(const TorusMapLift& F, const IntMat2& A) {
    const long long det = A(0, 0) * A(1, 1) - A(0, 1) * A(1, 0);
    if (det != 1 && det != -1) throw std::invalid_argument("conjugation needs a matrix in GL(2, Z)");
    IntMat2 inv;
    inv << A(1, 1), -A(0, 1), -A(1, 0), A(0, 0);
    inv *= det;
    const Eigen::Matrix2d Ad = A.cast<double>(), Ainv = inv.cast<double>();
    return custom("conjugate(" + F.name() + ")", [F, Ad, Ainv](const Point2& x) { return Point2(Ad * F(Ainv * x)); });
}

Point2 TorusMapLift::operator()(const Point2& x) const {
    switch (kind_) {
        case Kind::translation:
            return Point2(x.x() + params_[0], x.y() + params_[1]);
        case Kind::two_param_shear: {
            const double xn = x.x() + params_[0] * std::sin(kTwoPi * x.y());
            return Point2(xn, x.y() + params_[1] * std::sin(kTwoPi * xn));
        }
        case Kind::coupled_sine:
            return Point2(x.x() + params_[0] + params_[2] * std::sin(kTwoPi * x.y()),
                          x.y() + params_[1] + params_[3] * std::sin(kTwoPi * x.x()));
        case Kind::linear:
            return Point2(params_[0] * x.x() + params_[1] * x.y(), params_[2] * x.x() + params_[3] * x.y());
        case Kind::custom:
            return custom_(x);
    }
    return x;
}

Point2 TorusMapLift::iterate(Point2 x, int n) const {
    for (int i = 0; i < n; ++i) x = (*this)(x);
    return x;
}

std::vector<Point2> default_equivariance_samples() {
    std::vector<Point2> s;
    for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 8; ++j) s.emplace_back((i + 0.37) / 8.0, (j + 0.61) / 8.0);
    return s;
}

EquivarianceReport check_equivariance(const TorusMapLift& F, const std::vector<Point2>& samples, double tol) {
    EquivarianceReport r;
    const Point2 e[2] = {Point2(1.0, 0.0), Point2(0.0, 1.0)};
    for (const auto& x : samples) {
        const Point2 fx = F(x);
        for (const auto& k : e) r.max_defect = std::max(r.max_defect, (F(x + k) - fx - k).norm());
    }
    r.equivariant = r.max_defect < tol;
    return r;
}

RotationSet mz_rotation_set(const TorusMapLift& F, int grid, int n_iter, int threads) {
    if (grid < 1 || n_iter < 1) throw std::invalid_argument("mz_rotation_set: grid and n_iter must be positive");
    auto eq = check_equivariance(F, default_equivariance_samples());
    if (!eq.equivariant) throw PreconditionViolation("map lift is not equivariant (not homotopic to the identity)");
    const std::size_t count = static_cast<std::size_t>(grid) * static_cast<std::size_t>(grid);
    std::vector<Point2> averages(count);
    parallel_for(count, threads, [&](std::size_t idx) {
        const Point2 x0(static_cast<double>(idx / grid) / grid, static_cast<double>(idx % grid) / grid);
        averages[idx] = (F.iterate(x0, n_iter) - x0) / static_cast<double>(n_iter);
    });
    RotationSet rs;
    rs.vertices = convex_hull(std::move(averages));
    rs.sample_count = count;
    rs.iterate_depth = n_iter;
    return rs;
}

InteriorPoints rational_interior_points(const RotationSet& rs, int denominator_bound, double margin) {
    InteriorPoints out;
    if (rs.vertices.size() < 3 || polygon_area(rs.vertices) <= 1e-9) {
        out.degenerate = true;
        return out;
    }
    double lo[2] = {rs.vertices[0].x(), rs.vertices[0].y()}, hi[2] = {lo[0], lo[1]};
    for (const auto& v : rs.vertices)
        for (int a = 0; a < 2; ++a) {
            lo[a] = std::min(lo[a], v[a]);
            hi[a] = std::max(hi[a], v[a]);
        }
    for (long long q = 1; q <= denominator_bound; ++q) {
        for (long long p1 = static_cast<long long>(std::ceil(lo[0] * q)); p1 <= static_cast<long long>(std::floor(hi[0] * q)); ++p1)
            for (long long p2 = static_cast<long long>(std::ceil(lo[1] * q));
                 p2 <= static_cast<long long>(std::floor(hi[1] * q)); ++p2) {
                if (std::gcd(std::gcd(p1, p2), q) != 1) continue;
                RationalPoint rp{IntPoint2(p1, p2), q, 0.0};
                rp.depth = signed_distance(rs.vertices, rp.value());
                if (rp.depth > margin) out.points.push_back(rp);
            }
    }
    return out;
}

std::vector<Point2> default_newton_seeds() {
    std::vector<Point2> s;
    for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 4; ++j) s.emplace_back((i + 0.5) / 8.0, (j + 0.5) / 4.0);
    return s;
}

namespace {

struct NewtonOutcome {
    Point2 x;
    double residual;
};

NewtonOutcome newton_periodic(const TorusMapLift& F, const Point2& p, int q, Point2 x, double tol) {
    auto G = [&](const Point2& y) { return Point2(F.iterate(y, q) - y - p); };
    Point2 g = G(x);
    double r = g.norm();
    const double h = 1e-7;
    for (int it = 0; it < 60 && r >= tol; ++it) {
        Eigen::Matrix2d J;
        for (int a = 0; a < 2; ++a) {
            Point2 up = x, dn = x;
            up[a] += h;
            dn[a] -= h;
            J.col(a) = (G(up) - G(dn)) / (2.0 * h);
        }
        if (std::abs(J.determinant()) < 1e-14) break;
        const Point2 step = J.partialPivLu().solve(-g);
        double t = 1.0;
        Point2 trial = x + step;
        Point2 gt = G(trial);
        while (gt.norm() >= r && t > 1e-6) {
            t *= 0.5;
            trial = x + t * step;
            gt = G(trial);
        }
        if (gt.norm() >= r) break;
        x = trial;
        g = gt;
        r = gt.norm();
    }
    return {x, r};
}

}  // namespace

PeriodicOrbitResult find_periodic_point(const TorusMapLift& F, const IntPoint2& p, int q,
                                        const std::vector<Point2>& seeds, double tol, int threads) {
    if (q < 1 || q > 64) throw std::invalid_argument("find_periodic_point: q must lie in [1, 64]");
    if (seeds.empty()) throw std::invalid_argument("find_periodic_point: no seeds");
    const Point2 pd = p.cast<double>();
    std::vector<NewtonOutcome> outcomes(seeds.size());
    parallel_for(seeds.size(), threads, [&](std::size_t i) { outcomes[i] = newton_periodic(F, pd, q, seeds[i], tol); });

    PeriodicOrbitResult res;
    res.p = p;
    res.q = q;
    res.residual = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
        const bool ok = outcomes[i].residual < tol;
        if ((ok && !res.found) || (!res.found && outcomes[i].residual < res.residual)) {
            res.found = ok;
            res.lifted = outcomes[i].x;
            res.residual = outcomes[i].residual;
            res.seed_index = static_cast<int>(i);
        }
        if (res.found) break;
    }
    // Residual re-measured by direct iteration of the reported point.
    res.residual = (F.iterate(res.lifted, q) - res.lifted - pd).norm();
    res.found = res.residual < tol;
    res.point = TorusPoint(Vec(res.lifted));
    return res;
}

nlohmann::json to_json(const RotationSet& rs) {
    nlohmann::json v = nlohmann::json::array();
    for (const auto& p : rs.vertices) v.push_back({p.x(), p.y()});
    return {{"vertices", v}, {"sample_count", rs.sample_count}, {"iterate_depth", rs.iterate_depth}};
}

nlohmann::json to_json(const PeriodicOrbitResult& r) {
    return {{"found", r.found},
            {"point", {r.point.coords()[0], r.point.coords()[1]}},
            {"q", r.q},
            {"p", {r.p.x(), r.p.y()}},
            {"residual", r.residual},
            {"seed_index", r.seed_index}};
}

}  // namespace rotlab
