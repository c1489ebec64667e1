#include "rotlab/hamiltonian.hpp"

#include <array>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>


#include "rotlab/rng.hpp"

namespace rotlab {

namespace {

constexpr int kMaxDim = 6;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check_dim(int n) {
    if (n < 1 || n > kMaxDim) throw std::invalid_argument("hamiltonian models support 1 <= n <= 6");
}

Vec to_vec(const double* x, int n) { return Eigen::Map<const Vec>(x, n); }

class ConstantPotential final : public Potential {
public:
    ConstantPotential(int n, double c) : n_(n), c_(c) {}
    int dim() const override { return n_; }
    double value(const double*) const override { return c_; }
    void gradient(const double*, double* g) const override { std::fill(g, g + n_, 0.0); }

private:
    int n_;
    double c_;
};

class CosinePotential final : public Potential {
public:
    CosinePotential(int n, std::vector<CosineMode> modes) : n_(n), modes_(std::move(modes)) {
        for (const auto& m : modes_)
            if (m.wave.size() != n_) throw std::invalid_argument("cosine potential: wave vector has wrong dimension");
    }
    int dim() const override { return n_; }
    double value(const double* x) const override {
        double v = 0.0;
        for (const auto& m : modes_) v += m.amplitude * std::cos(kTwoPi * phase_arg(m, x) + m.phase);
        return v;
    }
    void gradient(const double* x, double* g) const override {
        std::fill(g, g + n_, 0.0);
        for (const auto& m : modes_) {
            const double s = -m.amplitude * kTwoPi * std::sin(kTwoPi * phase_arg(m, x) + m.phase);
            for (int a = 0; a < n_; ++a) g[a] += s * static_cast<double>(m.wave[a]);
        }
    }

private:
    double phase_arg(const CosineMode& m, const double* x) const {
        double s = 0.0;
        for (int a = 0; a < n_; ++a) s += static_cast<double>(m.wave[a]) * x[a];
        return s;
    }
    int n_;
    std::vector<CosineMode> modes_;
};

class GridPotential final : public Potential {
public:
    explicit GridPotential(ScalarGrid g) : grid_(std::move(g)) {}
    int dim() const override { return grid_.shape().dim(); }
    double value(const double* x) const override { return grid_.at(to_vec(x, dim())); }
    void gradient(const double* x, double* g) const override {
        Vec v = grid_.gradient(to_vec(x, dim()));
        std::copy(v.data(), v.data() + dim(), g);
    }

private:
    ScalarGrid grid_;
};

class FunctionPotential final : public Potential {
public:
    FunctionPotential(int n, std::function<double(const Vec&)> f, std::function<Vec(const Vec&)> g)
        : n_(n), f_(std::move(f)), g_(std::move(g)) {}
    int dim() const override { return n_; }
    double value(const double* x) const override { return f_(to_vec(x, n_)); }
    void gradient(const double* x, double* g) const override {
        Vec v = g_(to_vec(x, n_));
        std::copy(v.data(), v.data() + n_, g);
    }

private:
    int n_;
    std::function<double(const Vec&)> f_;
    std::function<Vec(const Vec&)> g_;
};

class ConstantInverseMetric final : public InverseMetric {
public:
    explicit ConstantInverseMetric(Mat m) : m_(std::move(m)) {}
    int dim() const override { return static_cast<int>(m_.rows()); }
    bool is_constant() const override { return true; }
    void value(const double*, double* out) const override {
        Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(out, dim(), dim()) = m_;
    }
    void derivative(const double*, int, double* out) const override { std::fill(out, out + dim() * dim(), 0.0); }

private:
    Mat m_;
};

class ConformalInverseMetric final : public InverseMetric {
public:
    ConformalInverseMetric(int n, double eps, int axis) : n_(n), eps_(eps), axis_(axis) {}
    int dim() const override { return n_; }
    void value(const double* x, double* out) const override {
        const double f = std::exp(-2.0 * eps_ * std::cos(kTwoPi * x[axis_]));
        fill_diag(out, f);
    }
    void derivative(const double* x, int axis, double* out) const override {
        if (axis != axis_) {
            std::fill(out, out + n_ * n_, 0.0);
            return;
        }
        const double t = kTwoPi * x[axis_];
        const double f = std::exp(-2.0 * eps_ * std::cos(t)) * 2.0 * eps_ * kTwoPi * std::sin(t);
        fill_diag(out, f);
    }

private:
    void fill_diag(double* out, double f) const {
        std::fill(out, out + n_ * n_, 0.0);
        for (int a = 0; a < n_; ++a) out[a * n_ + a] = f;
    }
    int n_;
    double eps_;
    int axis_;
};

class FieldInverseMetric final : public InverseMetric {
public:
    explicit FieldInverseMetric(MetricField g) : g_(std::move(g)) {}
    int dim() const override { return g_.dim(); }
    void value(const double* x, double* out) const override {
        Mat inv = g_.at(to_vec(x, dim())).inverse();
        write(inv, out);
    }
    void derivative(const double* x, int axis, double* out) const override {
        Vec xv = to_vec(x, dim());
        Mat inv = g_.at(xv).inverse();
        Mat d = -inv * g_.derivative(xv, axis) * inv;
        write(d, out);
    }

private:
    void write(const Mat& m, double* out) const {
        for (int i = 0; i < dim(); ++i)
            for (int j = 0; j < dim(); ++j) out[i * dim() + j] = m(i, j);
    }
    MetricField g_;
};

// sin and cos of 2 pi t, reduced to the first quadrant so quarter turns are exact.
void sincos_turns(double t, double& s, double& c) {
    const double r = t - std::floor(t);
    const int q = std::min(3, static_cast<int>(4.0 * r));
    const double theta = kTwoPi * (r - 0.25 * q);
    const double s0 = std::sin(theta), c0 = std::cos(theta);
    switch (q) {
        case 0: s = s0; c = c0; break;
        case 1: s = c0; c = -s0; break;
        case 2: s = -s0; c = -c0; break;
        default: s = -c0; c = s0; break;
    }
}

class ManeField final : public VectorField {
public:
    int dim() const override { return 2; }
    void value(const double* x, double* out) const override { sincos_turns(x[0], out[1], out[0]); }
    void jacobian(const double* x, double* out) const override {
        double s, c;
        sincos_turns(x[0], s, c);
        out[0] = -kTwoPi * s;
        out[1] = 0.0;
        out[2] = kTwoPi * c;
        out[3] = 0.0;
    }
    void value_and_jacobian(const double* x, double* X, double* J) const override {
        double s, c;
        sincos_turns(x[0], s, c);
        X[0] = c;
        X[1] = s;
        J[0] = -kTwoPi * s;
        J[1] = 0.0;
        J[2] = kTwoPi * c;
        J[3] = 0.0;
    }
};

class FunctionField final : public VectorField {
public:
    FunctionField(int n, std::function<Vec(const Vec&)> f, std::function<Mat(const Vec&)> j)
        : n_(n), f_(std::move(f)), j_(std::move(j)) {}
    int dim() const override { return n_; }
    void value(const double* x, double* out) const override {
        Vec v = f_(to_vec(x, n_));
        std::copy(v.data(), v.data() + n_, out);
    }
    void jacobian(const double* x, double* out) const override {
        Mat m = j_(to_vec(x, n_));
        for (int i = 0; i < n_; ++i)
            for (int k = 0; k < n_; ++k) out[i * n_ + k] = m(i, k);
    }

private:
    int n_;
    std::function<Vec(const Vec&)> f_;
    std::function<Mat(const Vec&)> j_;
};

}  // namespace

std::shared_ptr<const Potential> potential_zero(int n) { return potential_constant(n, 0.0); }

std::shared_ptr<const Potential> potential_constant(int n, double c) {
    check_dim(n);
    return std::make_shared<ConstantPotential>(n, c);
}

std::shared_ptr<const Potential> potential_cosine(int n, std::vector<CosineMode> modes) {
    check_dim(n);
    return std::make_shared<CosinePotential>(n, std::move(modes));
}

std::shared_ptr<const Potential> potential_grid(ScalarGrid grid) {
    check_dim(grid.shape().dim());
    return std::make_shared<GridPotential>(std::move(grid));
}

std::shared_ptr<const Potential> potential_function(int n, std::function<double(const Vec&)> value,
                                                    std::function<Vec(const Vec&)> gradient) {
    check_dim(n);
    return std::make_shared<FunctionPotential>(n, std::move(value), std::move(gradient));
}

std::shared_ptr<const InverseMetric> inverse_metric_constant(const Mat& ginv) {
    check_dim(static_cast<int>(ginv.rows()));
    if (ginv.rows() != ginv.cols()) throw InvalidMetric("inverse metric must be square");
    Eigen::LLT<Mat> llt(ginv);
    if (llt.info() != Eigen::Success || (ginv - ginv.transpose()).cwiseAbs().maxCoeff() > 1e-12)
        throw InvalidMetric("inverse metric must be symmetric positive definite");
    return std::make_shared<ConstantInverseMetric>(ginv);
}

std::shared_ptr<const InverseMetric> inverse_metric_conformal(int n, double eps, int axis) {
    check_dim(n);
    if (axis < 0 || axis >= n) throw std::invalid_argument("conformal metric: bad axis");
    return std::make_shared<ConformalInverseMetric>(n, eps, axis);
}

std::shared_ptr<const InverseMetric> inverse_metric_field(MetricField g) {
    check_dim(g.dim());
    return std::make_shared<FieldInverseMetric>(std::move(g));
}

std::shared_ptr<const VectorField> mane_vector_field() { return std::make_shared<ManeField>(); }

std::shared_ptr<const VectorField> vector_field_function(int n, std::function<Vec(const Vec&)> value,
                                                         std::function<Mat(const Vec&)> jacobian) {
    check_dim(n);
    return std::make_shared<FunctionField>(n, std::move(value), std::move(jacobian));
}

// ---------------------------------------------------------------------------

HamiltonianModel HamiltonianModel::mechanical(std::shared_ptr<const InverseMetric> ginv,
                                              std::shared_ptr<const Potential> V) {
    if (!ginv || !V) throw std::invalid_argument("mechanical model needs a metric and a potential");
    if (ginv->dim() != V->dim()) throw std::invalid_argument("mechanical model: dimension mismatch");
    HamiltonianModel m;
    m.kind_ = Kind::mechanical;
    m.n_ = ginv->dim();
    m.ginv_ = std::move(ginv);
    m.V_ = std::move(V);
    return m;
}

HamiltonianModel HamiltonianModel::mane(std::shared_ptr<const VectorField> X) {
    if (!X) throw std::invalid_argument("mane model needs a vector field");
    HamiltonianModel m;
    m.kind_ = Kind::mane;
    m.n_ = X->dim();
    m.X_ = std::move(X);
    return m;
}

HamiltonianModel HamiltonianModel::custom(int n, std::function<double(const Vec&, const Vec&)> H,
                                          std::function<Vec(const Vec&, const Vec&)> grad_x,
                                          std::function<Vec(const Vec&, const Vec&)> grad_p, int convexity_samples) {
    check_dim(n);
    HamiltonianModel m;
    m.kind_ = Kind::custom;
    m.n_ = n;
    m.h_ = std::move(H);
    m.hx_ = std::move(grad_x);
    m.hp_ = std::move(grad_p);
    CounterRng rng(0x5eedc0de, 0);
    for (int s = 0; s < convexity_samples; ++s) {
        Vec x(n), p(n);
        for (int a = 0; a < n; ++a) x[a] = rng.uniform();
        for (int a = 0; a < n; ++a) p[a] = rng.uniform(-2.0, 2.0);
        Mat hpp = m.hessian_pp(x, p);
        Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (hpp + hpp.transpose()), Eigen::EigenvaluesOnly);
        if (es.eigenvalues().minCoeff() <= 0.0)
            throw PreconditionViolation("custom Hamiltonian is not strictly convex in p at a sampled point");
    }
    return m;
}

bool HamiltonianModel::separable() const { return kind_ == Kind::mechanical && ginv_->is_constant(); }

double HamiltonianModel::energy_raw(const double* x, const double* p) const {
    const int n = n_;
    switch (kind_) {
        case Kind::mechanical: {
            std::array<double, kMaxDim * kMaxDim> G{};
            ginv_->value(x, G.data());
            double q = 0.0;
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) q += p[i] * G[i * n + j] * p[j];
            return 0.5 * q - V_->value(x);
        }
        case Kind::mane: {
            std::array<double, kMaxDim> X{};
            X_->value(x, X.data());
            double q = 0.0;
            for (int i = 0; i < n; ++i) q += p[i] * (0.5 * p[i] + X[i]);
            return q;
        }
        case Kind::custom:
            return h_(to_vec(x, n), to_vec(p, n));
    }
    return 0.0;
}

void HamiltonianModel::field_raw(const double* x, const double* p, double* xdot, double* pdot) const {
    const int n = n_;
    switch (kind_) {
        case Kind::mechanical: {
            std::array<double, kMaxDim * kMaxDim> G{}, D{};
            std::array<double, kMaxDim> gv{};
            ginv_->value(x, G.data());
            for (int i = 0; i < n; ++i) {
                double s = 0.0;
                for (int j = 0; j < n; ++j) s += G[i * n + j] * p[j];
                xdot[i] = s;
            }
            V_->gradient(x, gv.data());
            const bool constant = ginv_->is_constant();
            for (int a = 0; a < n; ++a) {
                double q = 0.0;
                if (!constant) {
                    ginv_->derivative(x, a, D.data());
                    for (int i = 0; i < n; ++i)
                        for (int j = 0; j < n; ++j) q += p[i] * D[i * n + j] * p[j];
                }
                pdot[a] = gv[a] - 0.5 * q;
            }
            return;
        }
        case Kind::mane: {
            std::array<double, kMaxDim> X{};
            std::array<double, kMaxDim * kMaxDim> J{};
            X_->value_and_jacobian(x, X.data(), J.data());
            for (int i = 0; i < n; ++i) xdot[i] = p[i] + X[i];
            for (int j = 0; j < n; ++j) {
                double s = 0.0;
                for (int i = 0; i < n; ++i) s += p[i] * J[i * n + j];
                pdot[j] = -s;
            }
            return;
        }
        case Kind::custom: {
            Vec xv = to_vec(x, n), pv = to_vec(p, n);
            Vec gx = hx_(xv, pv), gp = hp_(xv, pv);
            for (int i = 0; i < n; ++i) {
                xdot[i] = gp[i];
                pdot[i] = -gx[i];
            }
            return;
        }
    }
}

double HamiltonianModel::H(const Vec& x, const Vec& p) const {
    if (x.size() != n_ || p.size() != n_) throw std::invalid_argument("H: dimension mismatch");
    return energy_raw(x.data(), p.data());
}

void HamiltonianModel::gradients(const Vec& x, const Vec& p, Vec& grad_x, Vec& grad_p) const {
    if (x.size() != n_ || p.size() != n_) throw std::invalid_argument("gradients: dimension mismatch");
    grad_x.resize(n_);
    grad_p.resize(n_);
    field_raw(x.data(), p.data(), grad_p.data(), grad_x.data());
    grad_x = -grad_x;
}

Mat HamiltonianModel::hessian_pp(const Vec& x, const Vec& p) const {
    switch (kind_) {
        case Kind::mechanical: {
            Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> G(n_, n_);
            ginv_->value(x.data(), G.data());
            return G;
        }
        case Kind::mane:
            return Mat::Identity(n_, n_);
        case Kind::custom: {
            Mat hpp(n_, n_);
            const double h = 1e-5;
            for (int j = 0; j < n_; ++j) {
                Vec up = p, dn = p;
                up[j] += h;
                dn[j] -= h;
                hpp.col(j) = (hp_(x, up) - hp_(x, dn)) / (2.0 * h);
            }
            return hpp;
        }
    }
    return Mat();
}

// ---------------------------------------------------------------------------

Vec legendre(const HamiltonianModel& model, const Vec& x, const Vec& v) {
    const int n = model.dim();
    if (x.size() != n || v.size() != n) throw std::invalid_argument("legendre: dimension mismatch");
    Vec p = Vec::Zero(n);
    Vec gx, gp;
    auto residual = [&](const Vec& q) {
        model.gradients(x, q, gx, gp);
        return Vec(gp - v);
    };
    Vec r = residual(p);
    const double scale = std::max(1.0, v.cwiseAbs().maxCoeff());
    for (int it = 0; it < 100; ++it) {
        const double rn = r.norm();
        if (r.cwiseAbs().maxCoeff() <= 1e-14 * scale) return p;
        Vec step = model.hessian_pp(x, p).ldlt().solve(r);
        double t = 1.0;
        Vec trial = p - step;
        Vec rt = residual(trial);
        int halvings = 0;
        while (rt.norm() >= rn && halvings < 40) {
            t *= 0.5;
            trial = p - t * step;
            rt = residual(trial);
            ++halvings;
        }
        if (rt.norm() >= rn) {
            // No further decrease at machine precision: accept if already tight.
            if (rn <= 1e-12 * scale) return p;
            break;
        }
        p = trial;
        r = rt;
    }
    if (r.cwiseAbs().maxCoeff() <= 1e-12 * scale) return p;
    throw NewtonDiverged("legendre transform: Newton iteration did not converge");
}

double fenchel_L(const HamiltonianModel& model, const Vec& x, const Vec& v) {
    Vec p = legendre(model, x, v);
    return p.dot(v) - model.H(x, p);
}

LagrangianJet lagrangian_jet(const HamiltonianModel& model, const Vec& x, const Vec& v) {
    LagrangianJet jet;
    jet.p = legendre(model, x, v);
    Vec gx, gp;
    model.gradients(x, jet.p, gx, gp);
    jet.L = jet.p.dot(v) - model.H(x, jet.p);
    jet.dx = -gx;
    jet.dv = jet.p;
    return jet;
}

// ---------------------------------------------------------------------------

LiftedTrajectory integrate(const HamiltonianModel& model, const PhaseState& start, double T,
                           const IntegratorConfig& config) {
    const int n = model.dim();
    if (start.x.size() != n || start.p.size() != n) throw std::invalid_argument("integrate: dimension mismatch");
    if (!(config.step > 0.0) || !(config.step < 0.1)) throw std::invalid_argument("integrate: step must lie in (0, 0.1)");
    if (!(T >= 0.0)) throw std::invalid_argument("integrate: horizon must be nonnegative");
    if (config.record_every < 1) throw std::invalid_argument("integrate: record_every must be positive");
    if (config.scheme == Scheme::verlet && !model.separable())
        throw std::invalid_argument("integrate: verlet needs a mechanical model with constant metric");

    const long long steps = T == 0.0 ? 0 : static_cast<long long>(std::ceil(T / config.step - 1e-9));
    const double dt = steps == 0 ? 0.0 : T / static_cast<double>(steps);

    std::array<double, kMaxDim> x{}, p{};
    std::copy(start.x.data(), start.x.data() + n, x.begin());
    std::copy(start.p.data(), start.p.data() + n, p.begin());
    const double h0 = model.energy_raw(x.data(), p.data());
    const double denom = std::max(std::abs(h0), 1.0);

    LiftedTrajectory traj;
    auto record = [&](double t, double h) {
        traj.times.push_back(t);
        traj.states.push_back(PhaseState{to_vec(x.data(), n), to_vec(p.data(), n)});
        traj.energy.push_back(h);
    };
    record(0.0, h0);

    std::array<double, kMaxDim * kMaxDim> G{};
    if (config.scheme == Scheme::verlet) model.inverse_metric()->value(x.data(), G.data());
    std::array<double, kMaxDim> f{}, k1x{}, k1p{}, k2x{}, k2p{}, k3x{}, k3p{}, k4x{}, k4p{}, tx{}, tp{};

    for (long long s = 1; s <= steps; ++s) {
        if (config.scheme == Scheme::verlet) {
            const Potential* V = model.potential();
            V->gradient(x.data(), f.data());
            for (int a = 0; a < n; ++a) p[a] += 0.5 * dt * f[a];
            for (int i = 0; i < n; ++i) {
                double v = 0.0;
                for (int j = 0; j < n; ++j) v += G[i * n + j] * p[j];
                x[i] += dt * v;
            }
            V->gradient(x.data(), f.data());
            for (int a = 0; a < n; ++a) p[a] += 0.5 * dt * f[a];
        } else {
            model.field_raw(x.data(), p.data(), k1x.data(), k1p.data());
            for (int a = 0; a < n; ++a) {
                tx[a] = x[a] + 0.5 * dt * k1x[a];
                tp[a] = p[a] + 0.5 * dt * k1p[a];
            }
            model.field_raw(tx.data(), tp.data(), k2x.data(), k2p.data());
            for (int a = 0; a < n; ++a) {
                tx[a] = x[a] + 0.5 * dt * k2x[a];
                tp[a] = p[a] + 0.5 * dt * k2p[a];
            }
            model.field_raw(tx.data(), tp.data(), k3x.data(), k3p.data());
            for (int a = 0; a < n; ++a) {
                tx[a] = x[a] + dt * k3x[a];
                tp[a] = p[a] + dt * k3p[a];
            }
            model.field_raw(tx.data(), tp.data(), k4x.data(), k4p.data());
            for (int a = 0; a < n; ++a) {
                x[a] += dt / 6.0 * (k1x[a] + 2.0 * k2x[a] + 2.0 * k3x[a] + k4x[a]);
                p[a] += dt / 6.0 * (k1p[a] + 2.0 * k2p[a] + 2.0 * k3p[a] + k4p[a]);
            }
        }
        const double h = model.energy_raw(x.data(), p.data());
        const double drift = std::abs(h - h0) / denom;
        traj.max_drift = std::max(traj.max_drift, drift);
        if (!(drift <= config.max_energy_drift))
            throw EnergyDriftExceeded("energy drift " + std::to_string(drift) + " exceeds " +
                                      std::to_string(config.max_energy_drift) + " at t = " + std::to_string(s * dt));
        if (s % config.record_every == 0 || s == steps) record(s == steps ? T : s * dt, h);
    }
    return traj;
}

void write_trajectory_csv(const LiftedTrajectory& traj, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    const Eigen::Index n = traj.states.empty() ? 0 : traj.states.front().x.size();
    out << "t";
    for (Eigen::Index i = 0; i < n; ++i) out << ",x" << i + 1;
    for (Eigen::Index i = 0; i < n; ++i) out << ",p" << i + 1;
    out << ",H\n" << std::setprecision(17);
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
        out << traj.times[k];
        for (Eigen::Index i = 0; i < n; ++i) out << ',' << traj.states[k].x[i];
        for (Eigen::Index i = 0; i < n; ++i) out << ',' << traj.states[k].p[i];
        out << ',' << traj.energy[k] << '\n';
    }
}

double critical_value_mechanical(const ScalarGrid& V) { return -V.min_value(); }

std::vector<ClosedOrbit> mane_zero_section_orbits(double step) {
    HamiltonianModel model = HamiltonianModel::mane(mane_vector_field());
    std::vector<ClosedOrbit> out{
        ClosedOrbit{"gamma1", (Vec(2) << 0.25, 0.0).finished(), IntHomologyClass{0, 1}, 1.0, 0.0},
        ClosedOrbit{"gamma2", (Vec(2) << 0.75, 0.0).finished(), IntHomologyClass{0, -1}, 1.0, 0.0},
    };
    IntegratorConfig cfg{Scheme::rk4, step, 1e-10, 1 << 30};
    for (auto& orbit : out) {
        auto traj = integrate(model, PhaseState{orbit.start, Vec::Zero(2)}, orbit.period, cfg);
        orbit.residual = (traj.states.back().x - orbit.start - orbit.homology.to_real()).norm();
    }
    return out;
}

}  // namespace rotlab
