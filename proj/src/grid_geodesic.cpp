#include "rotlab/grid_geodesic.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>
#include <queue>

namespace rotlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

long long wrap_ll(long long i, long long r) {
    long long m = i % r;
    return m < 0 ? m + r : m;
}

int default_radius(int n) {
    if (n <= 2) return 3;
    if (n == 3) return 2;
    return 1;
}

std::vector<std::vector<int>> primitive_offsets(int n, int radius) {
    std::vector<std::vector<int>> out;
    std::vector<int> o(n, -radius);
    while (true) {
        int g = 0;
        for (int v : o) g = std::gcd(g, std::abs(v));
        if (g == 1) out.push_back(o);
        int a = n - 1;
        while (a >= 0 && o[a] == radius) o[a--] = -radius;
        if (a < 0) break;
        ++o[a];
    }
    return out;
}

}  // namespace

struct GridGeodesic::Box {
    std::vector<long long> lo;
    std::vector<long long> extent;
    std::vector<char> periodic;
    std::vector<std::size_t> stride;
    std::size_t size = 1;

    void finish() {
        const std::size_t n = lo.size();
        stride.assign(n, 1);
        size = 1;
        for (std::size_t a = n; a-- > 0;) {
            stride[a] = size;
            size *= static_cast<std::size_t>(extent[a]);
        }
    }
    std::size_t index(const long long* local) const {
        std::size_t idx = 0;
        for (std::size_t a = 0; a < lo.size(); ++a) idx += static_cast<std::size_t>(local[a]) * stride[a];
        return idx;
    }
    void decode(std::size_t idx, long long* local) const {
        for (std::size_t a = 0; a < lo.size(); ++a) {
            local[a] = static_cast<long long>(idx / stride[a]);
            idx %= stride[a];
        }
    }
    bool local_of(const NodeCoord& global, long long* local) const {
        for (std::size_t a = 0; a < lo.size(); ++a) {
            long long l = global[a] - lo[a];
            if (periodic[a]) l = wrap_ll(l, extent[a]);
            if (l < 0 || l >= extent[a]) return false;
            local[a] = l;
        }
        return true;
    }
};

struct GridGeodesic::SearchResult {
    double best = kInf;
    std::size_t best_node = 0;
    int best_target = -1;
    double second = kInf;
};

GridGeodesic::GridGeodesic(MetricField metric, GridGeodesicOptions options)
    : metric_(std::move(metric)), options_(options) {
    const int n = metric_.dim();
    const int R = metric_.resolution();
    const int radius = options_.stencil_radius > 0 ? options_.stencil_radius : default_radius(n);
    offsets_ = primitive_offsets(n, radius);
    const std::size_t S = offsets_.size();
    const GridShape& shape = metric_.shape();
    const std::size_t N = shape.node_count();

    // Quadratic form o^T G o at every node, per offset. The interpolated metric
    // is linear in G, so interpolating these tables is exact.
    std::vector<double> quad(N * S);
    double lam_min = kInf;
    for (std::size_t u = 0; u < N; ++u) {
        const Mat& g = metric_.node(u);
        Eigen::SelfAdjointEigenSolver<Mat> es(g, Eigen::EigenvaluesOnly);
        lam_min = std::min(lam_min, es.eigenvalues().minCoeff());
        for (std::size_t s = 0; s < S; ++s) {
            double q = 0.0;
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) q += offsets_[s][i] * g(i, j) * offsets_[s][j];
            quad[u * S + s] = q;
        }
    }
    min_speed_ = std::sqrt(lam_min) * (1.0 - 1e-12);

    std::vector<std::size_t> negated(S);
    for (std::size_t s = 0; s < S; ++s) {
        std::vector<int> neg(offsets_[s]);
        for (int& v : neg) v = -v;
        negated[s] = static_cast<std::size_t>(std::find(offsets_.begin(), offsets_.end(), neg) - offsets_.begin());
    }

    weights_.assign(N * S, 0.0);
    std::vector<int> base(n), corner(n), target(n);
    std::vector<double> frac(n);
    for (std::size_t u = 0; u < N; ++u) {
        auto idx = shape.multi(u);
        for (std::size_t s = 0; s < S; ++s) {
            const auto& o = offsets_[s];
            bool positive = false;
            for (int v : o)
                if (v != 0) {
                    positive = v > 0;
                    break;
                }
            if (!positive) continue;
            int m = 0;
            for (int v : o) m = std::max(m, std::abs(v));
            double w = 0.0;
            for (int j = 0; j < m; ++j) {
                const double t = (j + 0.5) / m;
                for (int a = 0; a < n; ++a) {
                    double p = idx[a] + t * o[a];
                    double f = std::floor(p);
                    base[a] = static_cast<int>(f);
                    frac[a] = p - f;
                }
                double q = 0.0;
                for (std::size_t c = 0; c < (std::size_t{1} << n); ++c) {
                    double cw = 1.0;
                    for (int a = 0; a < n; ++a) {
                        bool up = (c >> a) & 1U;
                        corner[a] = base[a] + (up ? 1 : 0);
                        cw *= up ? frac[a] : 1.0 - frac[a];
                    }
                    if (cw == 0.0) continue;
                    q += cw * quad[shape.linear(corner.data()) * S + s];
                }
                w += std::sqrt(std::max(q, 0.0));
            }
            w /= static_cast<double>(m) * R;
            for (int a = 0; a < n; ++a) target[a] = idx[a] + o[a];
            weights_[u * S + s] = w;
            weights_[shape.linear(target.data()) * S + negated[s]] = w;
        }
    }
}

NodeCoord GridGeodesic::snap(const Vec& x) const {
    if (x.size() != dim()) throw std::invalid_argument("grid geodesic: dimension mismatch");
    NodeCoord c(dim());
    for (int a = 0; a < dim(); ++a) c[a] = std::llround(x[a] * resolution());
    return c;
}

GridGeodesic::Box GridGeodesic::box_around(const std::vector<NodeCoord>& points, double pad_domains) const {
    const int n = dim();
    const long long R = resolution();
    const long long pad = static_cast<long long>(std::ceil(pad_domains * R));
    Box box;
    box.lo.resize(n);
    box.extent.resize(n);
    box.periodic.assign(n, 0);
    for (int a = 0; a < n; ++a) {
        long long lo = points.front()[a], hi = lo;
        for (const auto& p : points) {
            lo = std::min(lo, p[a]);
            hi = std::max(hi, p[a]);
        }
        box.lo[a] = lo - pad;
        box.extent[a] = hi - lo + 2 * pad + 1;
        if (static_cast<double>(box.extent[a] - 1) > options_.window_domains * R)
            throw OutOfWindow("grid geodesic: endpoints span more than " + std::to_string(options_.window_domains) +
                              " fundamental domains");
    }
    box.finish();
    return box;
}

template <class Target, class Heuristic>
GridGeodesic::SearchResult GridGeodesic::search(const Box& box, const std::vector<std::size_t>& sources,
                                                Target is_target, Heuristic heuristic, double cutoff,
                                                double second_rel) const {
    const int n = dim();
    const long long R = resolution();
    const std::size_t S = offsets_.size();
    std::vector<double> dist(box.size, kInf);
    std::vector<char> done(box.size, 0);
    using Item = std::pair<double, std::size_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> open;
    std::vector<long long> local(n), next(n);

    for (std::size_t s : sources) {
        box.decode(s, local.data());
        dist[s] = 0.0;
        open.push({heuristic(local.data()), s});
    }

    SearchResult res;
    double stop_at = kInf;
    while (!open.empty()) {
        auto [key, u] = open.top();
        open.pop();
        if (done[u]) continue;
        if (key >= cutoff || key > stop_at) break;
        done[u] = 1;
        const int t = is_target(u);
        if (t >= 0) {
            if (res.best_target < 0) {
                res.best = dist[u];
                res.best_node = u;
                res.best_target = t;
                if (second_rel < 0) break;
                stop_at = res.best * (1.0 + second_rel) + 1e-12;
            } else if (t != res.best_target) {
                res.second = dist[u];
                break;
            }
        }
        box.decode(u, local.data());
        std::size_t torus = 0;
        for (int a = 0; a < n; ++a) torus = torus * R + static_cast<std::size_t>(wrap_ll(box.lo[a] + local[a], R));
        for (std::size_t s = 0; s < S; ++s) {
            bool inside = true;
            for (int a = 0; a < n; ++a) {
                long long l = local[a] + offsets_[s][a];
                if (box.periodic[a]) {
                    l = wrap_ll(l, box.extent[a]);
                } else if (l < 0 || l >= box.extent[a]) {
                    inside = false;
                    break;
                }
                next[a] = l;
            }
            if (!inside) continue;
            const std::size_t v = box.index(next.data());
            if (done[v]) continue;
            const double nd = dist[u] + edge_weight(torus, s);
            if (nd < dist[v]) {
                dist[v] = nd;
                open.push({nd + heuristic(next.data()), v});
            }
        }
    }
    return res;
}

double GridGeodesic::node_distance(const NodeCoord& a, const NodeCoord& b, double cutoff) const {
    if (a == b) return 0.0;
    Box box = box_around({a, b}, options_.padding);
    const int n = dim();
    std::vector<long long> la(n), lb(n);
    box.local_of(a, la.data());
    box.local_of(b, lb.data());
    const std::size_t target = box.index(lb.data());
    const double scale = min_speed_ / resolution();
    auto heuristic = [&](const long long* l) {
        double s = 0.0;
        for (int k = 0; k < n; ++k) {
            double d = static_cast<double>(l[k] - lb[k]);
            s += d * d;
        }
        return scale * std::sqrt(s);
    };
    auto res = search(box, {box.index(la.data())}, [&](std::size_t u) { return u == target ? 0 : -1; }, heuristic,
                      cutoff, -1.0);
    return res.best;
}

double GridGeodesic::distance(const LiftedPoint& a, const LiftedPoint& b) const {
    return node_distance(snap(a.coords), snap(b.coords));
}

double GridGeodesic::leaf_distance(int axis, double from, double to) const {
    const int n = dim();
    if (axis < 0 || axis >= n) throw std::invalid_argument("leaf_distance: bad axis");
    const long long R = resolution();
    const long long ia = std::llround(from * R), ib = std::llround(to * R);
    if (ia == ib) return 0.0;
    const long long pad = static_cast<long long>(std::ceil(options_.padding * R));
    Box box;
    box.lo.assign(n, 0);
    box.extent.assign(n, R);
    box.periodic.assign(n, 1);
    box.periodic[axis] = 0;
    box.lo[axis] = std::min(ia, ib) - pad;
    box.extent[axis] = std::llabs(ib - ia) + 2 * pad + 1;
    box.finish();

    const long long la = ia - box.lo[axis], lb = ib - box.lo[axis];
    std::vector<std::size_t> sources;
    std::vector<long long> local(n);
    for (std::size_t u = 0; u < box.size; ++u) {
        box.decode(u, local.data());
        if (local[axis] == la) sources.push_back(u);
    }
    const double scale = min_speed_ / R;
    auto heuristic = [&](const long long* l) { return scale * static_cast<double>(std::llabs(l[axis] - lb)); };
    auto is_target = [&](std::size_t u) {
        return static_cast<long long>(u / box.stride[axis]) % box.extent[axis] == lb ? 0 : -1;
    };
    return search(box, sources, is_target, heuristic, kInf, -1.0).best;
}

GridGeodesic::Closing GridGeodesic::closing(const Vec& from, const Vec& base, double ambiguity_tol) const {
    const int n = dim();
    if (from.size() != n || base.size() != n) throw std::invalid_argument("closing: dimension mismatch");
    const long long R = resolution();
    Vec d = from - base;
    std::vector<IntVec> shifts;
    std::vector<NodeCoord> targets;
    NodeCoord start = snap(from);
    for (std::size_t c = 0; c < (std::size_t{1} << n); ++c) {
        IntVec k(n);
        for (int a = 0; a < n; ++a) k[a] = static_cast<long long>(std::floor(d[a])) + (((c >> a) & 1U) ? 1 : 0);
        shifts.push_back(k);
        targets.push_back(snap(base + k.cast<double>()));
    }
    for (std::size_t i = 0; i < targets.size(); ++i)
        if (targets[i] == start) return Closing{IntHomologyClass(shifts[i]), 0.0, false};

    std::vector<NodeCoord> all(targets);
    all.push_back(start);
    Box box = box_around(all, options_.padding);
    std::vector<long long> local(n);
    std::vector<std::size_t> target_index;
    std::vector<std::vector<long long>> target_local;
    for (const auto& t : targets) {
        box.local_of(t, local.data());
        target_index.push_back(box.index(local.data()));
        target_local.push_back(local);
    }
    box.local_of(start, local.data());
    const std::size_t source = box.index(local.data());
    const double scale = min_speed_ / R;
    auto heuristic = [&](const long long* l) {
        double best = kInf;
        for (const auto& t : target_local) {
            double s = 0.0;
            for (int a = 0; a < n; ++a) {
                double dd = static_cast<double>(l[a] - t[a]);
                s += dd * dd;
            }
            best = std::min(best, s);
        }
        return scale * std::sqrt(best);
    };
    auto is_target = [&](std::size_t u) {
        for (std::size_t i = 0; i < target_index.size(); ++i)
            if (target_index[i] == u) return static_cast<int>(i);
        return -1;
    };
    auto res = search(box, {source}, is_target, heuristic, kInf, ambiguity_tol);
    Closing out;
    out.shift = IntHomologyClass(shifts[res.best_target]);
    out.length = res.best;
    out.ambiguous = std::isfinite(res.second);
    return out;
}

double GridGeodesic::stable_norm_integer(const IntHomologyClass& k, int base_stride) const {
    const int n = dim();
    if (k.dim() != n) throw std::invalid_argument("stable_norm_integer: dimension mismatch");
    if (k.is_zero()) throw std::invalid_argument("stable_norm_integer: class must be nonzero");
    if (base_stride < 1) throw std::invalid_argument("stable_norm_integer: stride must be positive");
    const long long R = resolution();
    Eigen::Index dominant = 0;
    k.coeffs.cwiseAbs().maxCoeff(&dominant);

    std::vector<long long> free_axes;
    for (int a = 0; a < n; ++a)
        if (a != dominant) free_axes.push_back(a);
    const long long per_axis = (R + base_stride - 1) / base_stride;
    long long count = 1;
    for (std::size_t i = 0; i < free_axes.size(); ++i) count *= per_axis;

    double best = kInf;
    NodeCoord a(n, 0), b(n, 0);
    for (long long c = 0; c < count; ++c) {
        long long rest = c;
        for (std::size_t i = free_axes.size(); i-- > 0;) {
            a[free_axes[i]] = (rest % per_axis) * base_stride;
            rest /= per_axis;
        }
        a[dominant] = 0;
        for (int ax = 0; ax < n; ++ax) b[ax] = a[ax] + k.coeffs[ax] * R;
        best = std::min(best, node_distance(a, b, best));
    }
    return best;
}

double GridGeodesic::stable_norm_real(const Vec& v, int denominator_bound, int base_stride) const {
    if (v.size() != dim()) throw std::invalid_argument("stable_norm_real: dimension mismatch");
    if (denominator_bound < 1) throw std::invalid_argument("stable_norm_real: denominator bound must be >= 1");
    const double vn = v.norm();
    if (vn == 0.0) return 0.0;
    IntHomologyClass best;
    double best_err = kInf;
    for (int q = 1; q <= denominator_bound; ++q) {
        IntHomologyClass k = round_to_class(q * v);
        if (k.is_zero()) continue;
        Vec kr = k.to_real();
        double err = (kr / kr.norm() - v / vn).norm();
        if (err < best_err - 1e-12) {
            best_err = err;
            best = k;
        }
    }
    if (best_err == kInf) throw std::invalid_argument("stable_norm_real: denominator bound too small for v");
    Vec kr = best.to_real();
    return stable_norm_integer(best, base_stride) * v.dot(kr) / kr.squaredNorm();
}

NormModel GridGeodesic::stable_norm_model(int denominator_bound, int base_stride) const {
    auto self = std::make_shared<const GridGeodesic>(*this);
    return NormModel::stable(
        [self, denominator_bound, base_stride](const Vec& v) {
            return self->stable_norm_real(v, denominator_bound, base_stride);
        },
        "grid-stable");
}

double GridGeodesic::diameter(int source_stride) const {
    const int n = dim();
    const long long R = resolution();
    if (source_stride <= 0) source_stride = std::max<int>(1, static_cast<int>(R / 2));
    Box box;
    box.lo.assign(n, 0);
    box.extent.assign(n, R);
    box.periodic.assign(n, 1);
    box.finish();

    double lam_max = 0.0;
    for (const Mat& g : metric_.nodes()) {
        Eigen::SelfAdjointEigenSolver<Mat> es(g, Eigen::EigenvaluesOnly);
        lam_max = std::max(lam_max, es.eigenvalues().maxCoeff());
    }

    const long long per_axis = (R + source_stride - 1) / source_stride;
    long long count = 1;
    for (int a = 0; a < n; ++a) count *= per_axis;
    double ecc = 0.0;
    std::vector<long long> local(n);
    for (long long c = 0; c < count; ++c) {
        long long rest = c;
        for (int a = n; a-- > 0;) {
            local[a] = (rest % per_axis) * source_stride;
            rest /= per_axis;
        }
        // Full single-source search: no target, so collect the farthest settled node.
        std::vector<double> dist(box.size, kInf);
        std::vector<char> done(box.size, 0);
        using Item = std::pair<double, std::size_t>;
        std::priority_queue<Item, std::vector<Item>, std::greater<Item>> open;
        std::size_t s = box.index(local.data());
        dist[s] = 0.0;
        open.push({0.0, s});
        std::vector<long long> cur(n), next(n);
        while (!open.empty()) {
            auto [key, u] = open.top();
            open.pop();
            if (done[u]) continue;
            done[u] = 1;
            ecc = std::max(ecc, key);
            box.decode(u, cur.data());
            for (std::size_t o = 0; o < offsets_.size(); ++o) {
                for (int a = 0; a < n; ++a) next[a] = wrap_ll(cur[a] + offsets_[o][a], R);
                std::size_t v = box.index(next.data());
                double nd = key + edge_weight(u, o);
                if (nd < dist[v]) {
                    dist[v] = nd;
                    open.push({nd, v});
                }
            }
        }
    }
    // Every point lies within half a sampling cell of some source.
    const double gap = std::sqrt(lam_max) * source_stride * std::sqrt(static_cast<double>(n)) / (2.0 * R);
    return ecc + gap;
}

}  // namespace rotlab
