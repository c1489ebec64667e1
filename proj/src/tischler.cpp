#include "rotlab/tischler.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <set>

namespace rotlab {

long long gcd_of(const IntVec& v) {
    long long g = 0;
    for (Eigen::Index i = 0; i < v.size(); ++i) g = std::gcd(g, v[i]);
    return g;
}

IntMat unimodular_completion(const IntVec& p) {
    const Eigen::Index n = p.size();
    if (n < 1 || gcd_of(p) != 1) throw std::invalid_argument("unimodular completion needs a primitive vector");
    // Row operations reduce p to e_1; U collects them, Uinv their inverses.
    IntVec v = p;
    IntMat U = IntMat::Identity(n, n);
    IntMat Uinv = IntMat::Identity(n, n);
    auto subtract = [&](Eigen::Index i, Eigen::Index j, long long k) {  // row_i -= k row_j
        v[i] -= k * v[j];
        U.row(i) -= k * U.row(j);
        Uinv.col(j) += k * Uinv.col(i);
    };
    auto swap = [&](Eigen::Index i, Eigen::Index j) {
        std::swap(v[i], v[j]);
        U.row(i).swap(U.row(j));
        Uinv.col(i).swap(Uinv.col(j));
    };
    for (Eigen::Index j = 1; j < n; ++j) {
        while (v[j] != 0) {
            subtract(0, j, v[0] / v[j]);
            swap(0, j);
        }
    }
    if (v[0] < 0) {
        v[0] = -v[0];
        U.row(0) *= -1;
        Uinv.col(0) *= -1;
    }
    return Uinv;
}

IntMat unimodular_inverse(const IntMat& m) {
    const Eigen::Index n = m.rows();
    if (m.cols() != n) throw std::invalid_argument("unimodular inverse: matrix not square");
    // Integer Gauss-Jordan with Euclidean pivoting on [m | I].
    IntMat a = m;
    IntMat inv = IntMat::Identity(n, n);
    for (Eigen::Index c = 0; c < n; ++c) {
        for (Eigen::Index r = c + 1; r < n; ++r) {
            while (a(r, c) != 0) {
                long long k = a(c, c) / a(r, c);
                a.row(c) -= k * a.row(r);
                inv.row(c) -= k * inv.row(r);
                a.row(c).swap(a.row(r));
                inv.row(c).swap(inv.row(r));
            }
        }
        if (a(c, c) != 1 && a(c, c) != -1) throw std::invalid_argument("unimodular inverse: matrix not unimodular");
        if (a(c, c) == -1) {
            a.row(c) *= -1;
            inv.row(c) *= -1;
        }
    }
    for (Eigen::Index c = n; c-- > 0;)
        for (Eigen::Index r = 0; r < c; ++r) {
            long long k = a(r, c);
            a.row(r) -= k * a.row(c);
            inv.row(r) -= k * inv.row(c);
        }
    return inv;
}

double TischlerApproximation::fibre_coordinate(const TorusPoint& x) const {
    double s = 0.0;
    for (Eigen::Index i = 0; i < primitive.size(); ++i) s += static_cast<double>(primitive[i]) * x.coords()[i];
    return wrap_unit(s);
}

TischlerApproximation tischler_fibration(const Vec& c, double eps) {
    if (c.size() < 1 || c.isZero(0.0)) throw std::invalid_argument("tischler: class must be nonzero");
    if (!c.allFinite()) throw std::invalid_argument("tischler: class must be finite");
    eps = std::max(eps, 1e-12);
    const Eigen::Index n = c.size();
    const double bound = std::pow(std::ceil(1.0 / eps), static_cast<double>(n));
    const long long cap = static_cast<long long>(std::min(bound, 1e8));

    TischlerApproximation out;
    out.dirichlet_bound = bound;
    for (long long q = 1; q <= cap; ++q) {
        IntVec p(n);
        double err = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            p[i] = std::llround(q * c[i]);
            err = std::max(err, std::abs(c[i] - static_cast<double>(p[i]) / q));
        }
        if (err <= eps && !p.isZero()) {
            out.p = p;
            out.q = q;
            out.error = err;
            const long long g = gcd_of(p);
            out.primitive = p / g;
            return out;
        }
    }
    throw std::runtime_error("tischler: search cap reached before the tolerance was met");
}

namespace {

// Echelon basis of the integer span of the given row vectors.
std::vector<IntVec> lattice_basis(std::vector<IntVec> rows, Eigen::Index dim) {
    std::vector<IntVec> basis;
    for (Eigen::Index col = 0; col < dim; ++col) {
        while (true) {
            std::vector<std::size_t> live;
            for (std::size_t i = 0; i < rows.size(); ++i)
                if (rows[i][col] != 0) live.push_back(i);
            if (live.empty()) break;
            std::size_t pivot = live.front();
            for (std::size_t i : live)
                if (std::llabs(rows[i][col]) < std::llabs(rows[pivot][col])) pivot = i;
            if (live.size() == 1) {
                basis.push_back(rows[pivot]);
                rows.erase(rows.begin() + static_cast<std::ptrdiff_t>(pivot));
                break;
            }
            for (std::size_t i : live)
                if (i != pivot) rows[i] -= (rows[i][col] / rows[pivot][col]) * rows[pivot];
        }
    }
    return basis;
}

long long integer_det(IntMat a) {
    const Eigen::Index n = a.rows();
    long long sign = 1;
    for (Eigen::Index c = 0; c < n; ++c) {
        for (Eigen::Index r = c + 1; r < n; ++r) {
            while (a(r, c) != 0) {
                long long k = a(c, c) / a(r, c);
                a.row(c) -= k * a.row(r);
                a.row(c).swap(a.row(r));
                sign = -sign;
            }
        }
    }
    long long d = sign;
    for (Eigen::Index c = 0; c < n; ++c) d *= a(c, c);
    return d;
}

}  // namespace

FibreCheck check_fibration_levels(const IntVec& p, int resolution) {
    const Eigen::Index n = p.size();
    if (n < 2) throw std::invalid_argument("fibration check needs n >= 2");
    if (resolution < 2) throw std::invalid_argument("fibration check: resolution must be >= 2");
    const long long g = gcd_of(p);
    if (g == 0) throw std::invalid_argument("fibration check: covector is zero");
    const IntVec prim = p / g;
    const long long R = resolution;

    // Fibre lattice from the completion: C has first row prim, the last n-1
    // columns of C^{-1} span ker prim.
    IntMat C = unimodular_completion(prim).transpose();
    IntMat Cinv = unimodular_inverse(C);
    FibreCheck out;
    out.fibre_basis = Cinv.rightCols(n - 1);

    // Short steps inside the level: all s with |s|_inf <= r and <p, s> = 0.
    long long r = std::min<long long>(std::max<long long>(1, prim.cwiseAbs().maxCoeff()), 40);
    std::vector<IntVec> steps;
    {
        IntVec s = IntVec::Constant(n, -r);
        while (true) {
            if (!s.isZero() && s.dot(prim) == 0) steps.push_back(s);
            Eigen::Index a = n - 1;
            while (a >= 0 && s[a] == r) s[a--] = -r;
            if (a < 0) break;
            ++s[a];
        }
    }

    std::size_t total = 1;
    for (Eigen::Index a = 0; a < n; ++a) total *= static_cast<std::size_t>(R);
    auto encode = [&](const IntVec& lift) {
        std::size_t idx = 0;
        for (Eigen::Index a = 0; a < n; ++a) idx = idx * R + static_cast<std::size_t>(((lift[a] % R) + R) % R);
        return idx;
    };
    auto on_level = [&](std::size_t idx) {
        long long s = 0;
        for (Eigen::Index a = n; a-- > 0;) {
            s += p[a] * static_cast<long long>(idx % R);
            idx /= R;
        }
        return s % R == 0;
    };

    std::vector<char> seen(total, 0);
    std::vector<IntVec> lifts(total);
    std::set<std::vector<long long>> windings;
    for (std::size_t start = 0; start < total; ++start) {
        if (seen[start] || !on_level(start)) continue;
        ++out.components;
        IntVec l(n);
        std::size_t rest = start;
        for (Eigen::Index a = n; a-- > 0;) {
            l[a] = static_cast<long long>(rest % R);
            rest /= R;
        }
        seen[start] = 1;
        lifts[start] = l;
        std::deque<std::size_t> queue{start};
        while (!queue.empty()) {
            std::size_t u = queue.front();
            queue.pop_front();
            for (const IntVec& s : steps) {
                IntVec lv = lifts[u] + s;
                std::size_t v = encode(lv);
                if (!seen[v]) {
                    seen[v] = 1;
                    lifts[v] = lv;
                    queue.push_back(v);
                } else if (out.components == 1) {
                    IntVec w = (lv - lifts[v]) / R;
                    if (!w.isZero()) windings.insert(std::vector<long long>(w.data(), w.data() + n));
                }
            }
        }
    }

    // Winding classes of loops in the first component, in fibre coordinates.
    std::vector<IntVec> rows;
    for (const auto& w : windings) {
        IntVec v = Eigen::Map<const IntVec>(w.data(), n);
        IntVec coords = C * v;  // first entry is <prim, v> = 0
        rows.push_back(coords.tail(n - 1));
    }
    auto basis = lattice_basis(rows, n - 1);
    if (static_cast<Eigen::Index>(basis.size()) == n - 1) {
        IntMat b(n - 1, n - 1);
        for (Eigen::Index i = 0; i < n - 1; ++i) b.row(i) = basis[static_cast<std::size_t>(i)].transpose();
        out.winding_det = integer_det(b);
    }
    out.is_torus = out.components == 1 && std::llabs(out.winding_det) == 1;
    return out;
}

}  // namespace rotlab
