#include "rotlab/mather.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <iomanip>
#include <limits>
#include <numeric>

#include "rotlab/parallel.hpp"

namespace rotlab {

namespace {

struct Workspace {
    int n = 0, M = 0;
    double dt = 0.0;
    Vec shift;                // winding as reals
    std::vector<LagrangianJet> jets;
};

double action(const HamiltonianModel& model, const std::vector<Vec>& x, Workspace& w, bool with_jets) {
    double sum = 0.0;
    for (int k = 0; k < w.M; ++k) {
        const Vec next = k + 1 < w.M ? x[k + 1] : Vec(x[0] + w.shift);
        const Vec mid = 0.5 * (x[k] + next);
        const Vec vel = (next - x[k]) / w.dt;
        if (with_jets) {
            w.jets[k] = lagrangian_jet(model, mid, vel);
            sum += w.jets[k].L;
        } else {
            sum += fenchel_L(model, mid, vel);
        }
    }
    return sum / w.M;
}

// M times the gradient of the average action, from the jets of the last call.
void scaled_gradient(const Workspace& w, std::vector<Vec>& g) {
    g.resize(w.M);
    for (int k = 0; k < w.M; ++k) {
        const LagrangianJet& prev = w.jets[(k + w.M - 1) % w.M];
        const LagrangianJet& cur = w.jets[k];
        g[k] = 0.5 * (prev.dx + cur.dx) + (prev.dv - cur.dv) / w.dt;
    }
}

double max_abs(const std::vector<Vec>& g) {
    double m = 0.0;
    for (const auto& v : g) m = std::max(m, v.cwiseAbs().maxCoeff());
    return m;
}

double dot(const std::vector<Vec>& a, const std::vector<Vec>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i].dot(b[i]);
    return s;
}

long long gcd_all(const IntVec& k, long long q) {
    long long g = q;
    for (int i = 0; i < k.size(); ++i) g = std::gcd(g, std::llabs(k[i]));
    return g;
}

}  // namespace

double discrete_action(const HamiltonianModel& model, const PeriodicCurve& curve) {
    Workspace w;
    w.n = model.dim();
    w.M = static_cast<int>(curve.nodes.size());
    if (w.M < 1) throw std::invalid_argument("discrete_action: empty curve");
    w.dt = curve.period / w.M;
    w.shift = curve.winding.cast<double>();
    return action(model, curve.nodes, w, false);
}

BetaSolver::BetaSolver(HamiltonianModel model, BetaOptions options) : model_(std::move(model)), options_(options) {
    if (options_.nodes_per_period < 16) throw std::invalid_argument("beta: at least 16 nodes per period");
    if (options_.q_max < 1) throw std::invalid_argument("beta: q_max must be positive");
}

BetaEvaluation BetaSolver::minimise(const IntVec& p, long long q) const {
    const int n = model_.dim();
    if (p.size() != n) throw std::invalid_argument("beta: dimension mismatch");
    if (q < 1) throw std::invalid_argument("beta: q must be positive");
    const bool rest = (p.array() == 0).all();
    const double T = rest ? 1.0 : static_cast<double>(q);

    Workspace w;
    w.n = n;
    w.M = options_.nodes_per_period * static_cast<int>(T);
    w.dt = T / w.M;
    w.shift = p.cast<double>();
    w.jets.resize(w.M);

    // Straight line through the best of a coarse grid of starting offsets.
    auto line = [&](const Vec& base) {
        std::vector<Vec> x(w.M);
        for (int k = 0; k < w.M; ++k) x[k] = base + (static_cast<double>(k) / w.M) * w.shift;
        return x;
    };
    const int per_axis = n >= 3 ? std::min(options_.base_scan, 4) : options_.base_scan;
    long long combos = 1;
    for (int a = 0; a < n; ++a) combos *= per_axis;
    std::vector<Vec> x;
    double best = std::numeric_limits<double>::infinity();
    for (long long c = 0; c < combos; ++c) {
        Vec base(n);
        long long r = c;
        for (int a = 0; a < n; ++a) {
            base[a] = static_cast<double>(r % per_axis) / per_axis;
            r /= per_axis;
        }
        auto trial = line(base);
        const double A = action(model_, trial, w, false);
        if (A < best) {
            best = A;
            x = std::move(trial);
        }
    }

    // Barzilai-Borwein descent with a nonmonotone Armijo safeguard.
    double A = action(model_, x, w, true);
    std::vector<Vec> g, g_old, x_old, trial(w.M);
    scaled_gradient(w, g);
    std::deque<double> history{A};
    double step = w.dt * w.dt / 4.0;
    BetaEvaluation ev;
    int it = 0;
    double gnorm = max_abs(g);
    for (; it < options_.max_iterations && gnorm >= options_.gradient_tol; ++it) {
        const double ref = *std::max_element(history.begin(), history.end());
        const double g2 = dot(g, g) / w.M;
        double t = step;
        double At = 0.0;
        for (int back = 0; back < 40; ++back) {
            for (int k = 0; k < w.M; ++k) trial[k] = x[k] - t * g[k];
            At = action(model_, trial, w, true);
            if (At <= ref - 1e-4 * t * g2 || gnorm < 1e-6) break;
            t *= 0.5;
        }
        x_old = x;
        g_old = g;
        x = trial;
        A = At;
        scaled_gradient(w, g);
        gnorm = max_abs(g);
        history.push_back(A);
        if (history.size() > 10) history.pop_front();

        double sy = 0.0, ss = 0.0;
        for (int k = 0; k < w.M; ++k) {
            const Vec s = x[k] - x_old[k];
            sy += s.dot(g[k] - g_old[k]);
            ss += s.squaredNorm();
        }
        step = sy > 0.0 ? std::clamp(ss / sy, 1e-12, 1e6) : w.dt * w.dt / 4.0;
    }

    ev.h = w.shift / T;
    ev.value = A;
    ev.iterations = it;
    ev.gradient_norm = gnorm;
    ev.converged = gnorm < options_.gradient_tol;
    ev.optimizer.winding = p;
    ev.optimizer.period = T;
    ev.optimizer.nodes = std::move(x);
    if (!ev.converged && options_.strict)
        throw NotConverged("beta: descent stopped with gradient " + std::to_string(gnorm));
    return ev;
}

BetaEvaluation BetaSolver::lattice_value(const IntVec& k) const {
    const std::vector<long long> key(k.data(), k.data() + k.size());
    {
        std::lock_guard<std::mutex> lock(mutex_);
        auto it = cache_.find(key);
        if (it != cache_.end()) return it->second;
    }
    const long long g = gcd_all(k, options_.q_max);
    BetaEvaluation ev = minimise(k / g, options_.q_max / g);
    std::lock_guard<std::mutex> lock(mutex_);
    return cache_.emplace(key, std::move(ev)).first->second;
}

BetaEvaluation BetaSolver::evaluate(const Vec& h) const {
    const int n = model_.dim();
    if (h.size() != n) throw std::invalid_argument("beta: dimension mismatch");
    const Vec k = h * static_cast<double>(options_.q_max);
    const Vec kr = k.array().round().matrix();
    if ((k - kr).cwiseAbs().maxCoeff() < 1e-9) {
        BetaEvaluation ev = lattice_value(kr.cast<long long>());
        ev.h = h;
        return ev;
    }
    // Kuhn simplex: walk from floor(k) along axes in decreasing fractional part.
    const Vec base = k.array().floor().matrix();
    const Vec f = k - base;
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return f[a] > f[b]; });
    IntVec vertex = base.cast<long long>();
    BetaEvaluation out;
    out.h = h;
    out.interpolated = true;
    out.converged = true;
    auto accumulate = [&](double weight) {
        if (weight <= 0.0) return;
        const BetaEvaluation ev = lattice_value(vertex);
        out.value += weight * ev.value;
        out.converged = out.converged && ev.converged;
        out.iterations += ev.iterations;
        out.gradient_norm = std::max(out.gradient_norm, ev.gradient_norm);
    };
    accumulate(1.0 - f[order[0]]);
    for (int i = 0; i < n; ++i) {
        vertex[order[i]] += 1;
        accumulate(f[order[i]] - (i + 1 < n ? f[order[i + 1]] : 0.0));
    }
    return out;
}

// ---------------------------------------------------------------------------

double alpha_from_samples(const std::vector<Vec>& h, const std::vector<double>& beta, const Vec& c) {
    if (h.size() != beta.size() || h.empty()) throw std::invalid_argument("alpha: sample size mismatch");
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < h.size(); ++i) best = std::max(best, c.dot(h[i]) - beta[i]);
    return best;
}

AlphaEvaluation alpha(const BetaFunction& beta, const Vec& c, const Vec& lo, const Vec& hi,
                      const AlphaOptions& options) {
    const int n = static_cast<int>(c.size());
    if (lo.size() != n || hi.size() != n) throw std::invalid_argument("alpha: box dimension mismatch");
    if (options.grid < 3) throw std::invalid_argument("alpha: grid needs at least 3 samples per axis");
    if ((hi - lo).minCoeff() <= 0.0) throw std::invalid_argument("alpha: empty box");

    AlphaEvaluation out;
    out.c = c;
    Vec box_lo = lo, box_hi = hi;
    double previous = -std::numeric_limits<double>::infinity();
    for (int round = 0;; ++round) {
        long long count = 1;
        for (int a = 0; a < n; ++a) count *= options.grid;
        std::vector<Vec> pts(count);
        for (long long i = 0; i < count; ++i) {
            Vec h(n);
            long long r = i;
            for (int a = 0; a < n; ++a) {
                const int j = static_cast<int>(r % options.grid);
                r /= options.grid;
                h[a] = box_lo[a] + (box_hi[a] - box_lo[a]) * j / (options.grid - 1);
            }
            pts[i] = h;
        }
        std::vector<double> vals(count);
        parallel_for(static_cast<std::size_t>(count), options.threads,
                     [&](std::size_t i) { vals[i] = beta(pts[i]); });
        out.samples += count;
        for (long long i = 0; i < count; ++i) {
            const double v = c.dot(pts[i]) - vals[i];
            if (out.argmax.size() == 0 || v > out.value) {
                out.value = v;
                out.argmax = pts[i];
            }
        }
        const double spacing_tol = 1e-12 * (1.0 + (hi - lo).cwiseAbs().maxCoeff());
        for (int a = 0; a < n; ++a)
            if (out.argmax[a] <= lo[a] + spacing_tol || out.argmax[a] >= hi[a] - spacing_tol)
                throw BoxTooSmall("alpha: the maximiser lies on the boundary of the sample box");
        out.refinements = round;
        if (round > 0 && std::abs(out.value - previous) < options.tol) break;
        if (round >= options.max_refinements) break;
        previous = out.value;
        for (int a = 0; a < n; ++a) {
            const double s = (box_hi[a] - box_lo[a]) / (options.grid - 1);
            box_lo[a] = std::max(lo[a], out.argmax[a] - 2.0 * s);
            box_hi[a] = std::min(hi[a], out.argmax[a] + 2.0 * s);
        }
    }
    return out;
}

double alpha_subdifferential_width(const BetaFunction& alpha_fn, const Vec& c, const std::vector<Vec>& directions,
                                   double delta) {
    if (!(delta > 0.0)) throw std::invalid_argument("alpha width: delta must be positive");
    if (directions.empty()) throw std::invalid_argument("alpha width: no directions");
    const double a0 = alpha_fn(c);
    double gap = -std::numeric_limits<double>::infinity();
    for (const auto& u0 : directions) {
        const Vec u = u0.normalized();
        gap = std::max(gap, (alpha_fn(c + delta * u) + alpha_fn(c - delta * u) - 2.0 * a0) / delta);
    }
    return gap;
}

void write_beta_table(std::ostream& os, const std::vector<BetaEvaluation>& rows) {
    if (rows.empty()) return;
    const int n = static_cast<int>(rows.front().h.size());
    for (int a = 0; a < n; ++a) os << "h" << a + 1 << ",";
    os << "beta,converged\n" << std::setprecision(17);
    for (const auto& r : rows) {
        for (int a = 0; a < n; ++a) os << r.h[a] << ",";
        os << r.value << "," << (r.converged ? 1 : 0) << "\n";
    }
}

void write_alpha_table(std::ostream& os, const std::vector<AlphaEvaluation>& rows) {
    if (rows.empty()) return;
    const int n = static_cast<int>(rows.front().c.size());
    for (int a = 0; a < n; ++a) os << "c" << a + 1 << ",";
    os << "alpha\n" << std::setprecision(17);
    for (const auto& r : rows) {
        for (int a = 0; a < n; ++a) os << r.c[a] << ",";
        os << r.value << "\n";
    }
}

}  // namespace rotlab
