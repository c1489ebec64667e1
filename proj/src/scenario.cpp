#include "rotlab/scenario.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <set>
#include <sstream>

#include "rotlab/asymptotic.hpp"
#include "rotlab/hamiltonian.hpp"
#include "rotlab/homology.hpp"
#include "rotlab/mather.hpp"
#include "rotlab/parallel.hpp"
#include "rotlab/rng.hpp"
#include "rotlab/rotation_set.hpp"
#include "rotlab/suspension.hpp"
#include "rotlab/tischler.hpp"

namespace rotlab {

using nlohmann::json;

namespace {

json vec_json(const Vec& v) {
    json a = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
    return a;
}

json int_json(const IntVec& v) {
    json a = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
    return a;
}

json polygon_json(const std::vector<Point2>& poly) {
    json v = json::array();
    for (const auto& p : poly) v.push_back({p.x(), p.y()});
    return {{"vertices", v}};
}

// ---------------------------------------------------------------------------
// Parameter reading with defaults, echo and diagnostics.

class Params {
public:
    Params(const json& obj, std::string prefix, std::vector<std::string>& diags)
        : obj_(obj), prefix_(std::move(prefix)), diags_(diags) {
        if (!obj_.is_object()) fail("", "expected an object");
    }

    /// Appends a diagnostic produced by a nested reader.
    void add(const std::string& diagnostic) { diags_.push_back(diagnostic); }

    void fail(const std::string& key, const std::string& message) {
        diags_.push_back((key.empty() ? prefix_ : path(key)) + ": " + message);
    }
    std::string path(const std::string& key) const { return prefix_ + "." + key; }
    bool has(const std::string& key) const { return obj_.is_object() && obj_.contains(key); }

    const json* get(const std::string& key) {
        used_.insert(key);
        return has(key) ? &obj_.at(key) : nullptr;
    }

    double number(const std::string& key, double def, const std::function<std::string(double)>& check = {}) {
        double v = def;
        if (const json* j = get(key)) {
            if (!j->is_number()) {
                fail(key, key + " must be a number");
                return def;
            }
            v = j->get<double>();
        }
        if (check) {
            const std::string msg = check(v);
            if (!msg.empty()) fail(key, key + " " + msg);
        }
        echo[key] = v;
        return v;
    }

    long long integer(const std::string& key, long long def, long long lo, long long hi) {
        long long v = def;
        if (const json* j = get(key)) {
            if (!j->is_number_integer()) {
                fail(key, key + " must be an integer");
                return def;
            }
            v = j->get<long long>();
        }
        if (v < lo || v > hi) fail(key, key + " must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
        echo[key] = v;
        return v;
    }

    Vec vector(const std::string& key, const Vec& def, int size = -1) {
        Vec v = def;
        if (const json* j = get(key)) v = parse_vector(*j, key);
        if (size >= 0 && v.size() != size) fail(key, key + " must have " + std::to_string(size) + " components");
        if (v.size() == 0) fail(key, key + " must not be empty");
        echo[key] = vec_json(v);
        return v;
    }

    Vec parse_vector(const json& j, const std::string& key) {
        if (!j.is_array()) {
            fail(key, key + " must be an array of numbers");
            return Vec();
        }
        Vec v(j.size());
        for (std::size_t i = 0; i < j.size(); ++i) {
            if (!j[i].is_number()) {
                fail(key, key + " must be an array of numbers");
                return Vec();
            }
            v[i] = j[i].get<double>();
        }
        return v;
    }

    std::string choice(const std::string& key, const std::string& def, const std::vector<std::string>& options) {
        std::string v = def;
        if (const json* j = get(key)) {
            if (!j->is_string()) {
                fail(key, key + " must be a string");
                return def;
            }
            v = j->get<std::string>();
        }
        if (std::find(options.begin(), options.end(), v) == options.end()) {
            std::string list;
            for (const auto& o : options) list += (list.empty() ? "" : ", ") + o;
            fail(key, key + " must be one of: " + list);
        }
        echo[key] = v;
        return v;
    }

    void finish() {
        if (!obj_.is_object()) return;
        for (const auto& [key, value] : obj_.items())
            if (!used_.count(key)) fail(key, "unknown key '" + key + "'");
    }

    json echo = json::object();

private:
    const json& obj_;
    std::string prefix_;
    std::vector<std::string>& diags_;
    std::set<std::string> used_;
};

std::string positive(double v) { return v > 0.0 && std::isfinite(v) ? "" : "must be positive"; }
std::string nonnegative(double v) { return v >= 0.0 && std::isfinite(v) ? "" : "must be nonnegative"; }
std::string small_step(double v) {
    if (!(v > 0.0)) return "must be positive";
    return v < 0.1 ? "" : "must be below 0.1";
}

// Torus map specifications: {"kind": ..., parameters}.
TorusMapLift read_map(const json& j, const std::string& where, std::vector<std::string>& diags, json& echo) {
    Params P(j, where, diags);
    if (!j.is_object()) return TorusMapLift::translation(Point2::Zero());
    const std::string kind =
        P.choice("kind", "two_param_shear", {"translation", "two_param_shear", "coupled_sine", "identity"});
    TorusMapLift F = TorusMapLift::translation(Point2::Zero());
    if (kind == "translation") {
        const Vec a = P.vector("alpha", Vec::Zero(2), 2);
        if (a.size() == 2) F = TorusMapLift::translation(Point2(a[0], a[1]));
    } else if (kind == "two_param_shear") {
        const double a = P.number("a", 1.0), b = P.number("b", 1.0);
        F = TorusMapLift::two_param_shear(a, b);
    } else if (kind == "coupled_sine") {
        const double t1 = P.number("t1", 0.1), t2 = P.number("t2", 0.1);
        const double a = P.number("a", 0.1), b = P.number("b", 0.1);
        F = TorusMapLift::coupled_sine(t1, t2, a, b);
    }
    P.finish();
    echo = P.echo;
    return F;
}

std::vector<CosineMode> read_modes(Params& P, const std::string& key, int dim) {
    std::vector<CosineMode> modes;
    json def = json::array({{{"amplitude", 1.0}, {"wave", json::array({1, 0})}, {"phase", 0.0}},
                            {{"amplitude", 0.5}, {"wave", json::array({0, 1})}, {"phase", 0.0}}});
    const json* j = P.get(key);
    const json& arr = j ? *j : def;
    if (!arr.is_array()) {
        P.fail(key, key + " must be an array of modes");
        return modes;
    }
    json echo = json::array();
    for (std::size_t i = 0; i < arr.size(); ++i) {
        std::vector<std::string> sub;
        Params M(arr[i], P.path(key) + "[" + std::to_string(i) + "]", sub);
        CosineMode mode;
        mode.amplitude = M.number("amplitude", 1.0);
        mode.phase = M.number("phase", 0.0);
        const Vec w = M.vector("wave", Vec::Zero(dim), dim);
        mode.wave = IntVec::Zero(dim);
        for (Eigen::Index a = 0; a < w.size() && a < dim; ++a) {
            if (w[a] != std::round(w[a])) M.fail("wave", "wave must have integer entries");
            mode.wave[a] = static_cast<long long>(std::llround(w[a]));
        }
        M.finish();
        for (const auto& d : sub) P.add(d);
        modes.push_back(mode);
        echo.push_back(M.echo);
    }
    P.echo[key] = echo;
    return modes;
}

// ---------------------------------------------------------------------------

struct Context {
    Report& report;
    std::map<std::string, std::string>& files;
    std::uint64_t seed;
    int threads;

    void check(const std::string& name, double value, const std::string& relation, double threshold) {
        bool ok = false;
        if (relation == "<") ok = value < threshold;
        else if (relation == "<=") ok = value <= threshold;
        else if (relation == ">=") ok = value >= threshold;
        else if (relation == "==") ok = value == threshold;
        report.checks.push_back({name, ok, value, threshold, relation});
        report.results["thresholds"][name] = {{"relation", relation}, {"threshold", threshold}};
    }
};

using ScenarioFn = std::function<void(Params&, Context*)>;

// Each scenario reads its parameters and, given a context, runs.

void linear_flow(Params& P, Context* ctx) {
    const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
    const Vec v = P.vector("direction", (Vec(2) << 1.0, phi).finished());
    const double T = P.number("horizon", 100.0, positive);
    const double step = P.number("step", 1e-3, small_step);
    const double tol = P.number("tolerance", 1e-9, positive);
    if (!ctx) return;
    const int n = static_cast<int>(v.size());
    auto model = HamiltonianModel::mechanical(inverse_metric_constant(Mat::Identity(n, n)), potential_zero(n));
    IntegratorConfig cfg;
    cfg.scheme = Scheme::verlet;
    cfg.step = step;
    cfg.max_energy_drift = 1e-8;
    cfg.record_every = 100;
    const auto traj = integrate(model, {Vec::Zero(n), v}, T, cfg);
    const auto est = rotation_vector(traj);
    const double err = (est.value - v).cwiseAbs().maxCoeff();
    const ConstantMetricClosing closing(Mat::Identity(n, n));
    const auto q = quasi_orbit_class(traj, closing, T);

    auto& r = ctx->report.results;
    r["rotation_vector"] = vec_json(est.value);
    r["expected"] = vec_json(v);
    r["rotation_error"] = err;
    r["cauchy_gap"] = est.cauchy_gap;
    r["quasi_orbit_class"] = int_json(q.total_class.coeffs);
    r["closing_length"] = q.closing_length;
    r["energy_drift"] = traj.max_drift;
    ctx->check("rotation_error", err, "<", tol);

    std::ostringstream csv;
    csv << "horizon";
    for (int a = 0; a < n; ++a) csv << ",rho" << a + 1;
    csv << "\n" << std::setprecision(17);
    for (std::size_t i = 0; i < est.sub_horizons.size(); ++i) {
        csv << est.sub_horizons[i];
        for (int a = 0; a < n; ++a) csv << "," << est.partial[i][a];
        csv << "\n";
    }
    ctx->files["partial_estimates.csv"] = csv.str();
}

void mane_example(Params& P, Context* ctx) {
    const long long samples = P.integer("samples", 100, 1, 100000);
    const double T = P.number("horizon", 1e4, positive);
    const double step = P.number("step", 1e-2, small_step);
    const double tol = P.number("tolerance", 1e-2, positive);
    const double linkage = P.number("linkage", 0.05, positive);
    const long long levels = P.integer("levels", 4, 1, 30);
    if (!ctx) return;

    const auto orbits = mane_zero_section_orbits(step);
    json orbit_json = json::array();
    long long mismatches = 0;
    for (const auto& o : orbits) {
        const IntHomologyClass expected = o.name == "gamma1" ? IntHomologyClass{0, 1} : IntHomologyClass{0, -1};
        if (!(o.homology == expected)) ++mismatches;
        orbit_json.push_back({{"name", o.name},
                              {"start", vec_json(o.start)},
                              {"class", int_json(o.homology.coeffs)},
                              {"period", o.period},
                              {"residual", o.residual}});
    }

    CounterRng rng(ctx->seed, 1);
    std::vector<Vec> starts;
    for (long long i = 0; i < samples; ++i) {
        Vec x(2);
        x[0] = rng.uniform();
        x[1] = rng.uniform();
        starts.push_back(x);
    }
    auto model = HamiltonianModel::mane(mane_vector_field());
    IntegratorConfig cfg;
    cfg.scheme = Scheme::rk4;
    cfg.step = step;
    cfg.max_energy_drift = 1e-8;
    cfg.record_every = 1 << 30;
    const auto sampler = model_sampler(model, [](const Vec& x) { return Vec(Vec::Zero(x.size())); }, cfg);
    const auto horizons = dyadic_horizons(T / std::pow(2.0, static_cast<double>(levels - 1)), static_cast<int>(levels));
    const ConstantMetricClosing closing(Mat::Identity(2, 2));
    const auto acc = homology_accumulation(starts, horizons, sampler, closing, linkage, ctx->threads);

    const Vec target = (Vec(2) << 0.0, 1.0).finished();
    double worst = 0.0;
    for (const auto& e : acc.final_estimates) worst = std::max(worst, (e - target).cwiseAbs().maxCoeff());

    std::vector<Vec> all = acc.final_estimates;
    for (const auto& o : orbits) all.push_back(o.homology.to_real() / o.period);
    const auto clusters = cluster_vectors(all, linkage);
    std::vector<Vec> centers;
    json cluster_json = json::array();
    for (const auto& c : clusters) {
        centers.push_back(c.center);
        cluster_json.push_back({{"center", vec_json(c.center)}, {"radius", c.radius}, {"count", c.count}});
    }
    const auto slope = minimal_slope(target, coordinate_complement(target), NormModel::euclidean(), centers);

    auto& r = ctx->report.results;
    r["closed_orbits"] = orbit_json;
    r["horizons"] = horizons;
    r["max_estimate_error"] = worst;
    r["clusters"] = cluster_json;
    r["minimal_slope"] = slope ? json(*slope) : json("NotProper");
    ctx->check("closed_orbit_class_mismatches", static_cast<double>(mismatches), "==", 0.0);
    ctx->check("max_estimate_error", worst, "<", tol);
    ctx->check("minimal_slope_not_proper", slope ? 0.0 : 1.0, "==", 1.0);

    std::ostringstream csv;
    csv << "x1,x2,rho1,rho2\n" << std::setprecision(17);
    for (std::size_t i = 0; i < starts.size(); ++i)
        csv << starts[i][0] << "," << starts[i][1] << "," << acc.final_estimates[i][0] << ","
            << acc.final_estimates[i][1] << "\n";
    ctx->files["estimates.csv"] = csv.str();
}

void cone_audit(Params& P, Context* ctx) {
    const Vec dir = P.vector("direction", (Vec(3) << 1.0, std::sqrt(2.0) - 1.0, (std::sqrt(5.0) - 1.0) / 4.0).finished());
    const long long m_max = P.integer("m_max", 50, 1, 100000);
    const double tol = P.number("tolerance", 0.05, nonnegative);
    const Vec base = P.vector("base", Vec::Zero(dir.size()), static_cast<int>(dir.size()));
    if (dir.size() >= 1 && dir[0] == 0.0) P.fail("direction", "direction must have a nonzero first component");
    if (!ctx) return;

    const auto f = fibred_linear_flow(dir);
    const ConstantMetricClosing closing(f.metric);
    const NormModel norm = NormModel::constant_metric(f.metric);
    Vec beta = Vec::Zero(dir.size());
    beta[0] = 1.0;
    const IntHomologyClass h = shortest_transverse_class(norm, beta);
    const auto audit = cone_bound_audit(f.flow, base, 1.0, h, static_cast<int>(m_max), closing, norm, tol);

    auto& r = ctx->report.results;
    r["h"] = int_json(h.coeffs);
    r["generator_length"] = audit.generator_length;
    r["diameter"] = audit.diameter;
    r["limsup_estimate"] = audit.limsup_estimate;
    double worst_excess = -std::numeric_limits<double>::infinity();
    for (const auto& row : audit.rows) worst_excess = std::max(worst_excess, row.ratio - row.bound);
    r["max_ratio_minus_bound"] = worst_excess;
    ctx->check("max_ratio_minus_bound", worst_excess, "<=", tol);
    ctx->check("limsup_estimate", audit.limsup_estimate, "<=", 3.0 + tol);

    std::ostringstream csv;
    csv << "m,ratio,bound,slack\n" << std::setprecision(17);
    for (const auto& row : audit.rows) csv << row.m << "," << row.ratio << "," << row.bound << "," << row.slack << "\n";
    ctx->files["cone_audit.csv"] = csv.str();
}

void rotation_set(Params& P, Context* ctx) {
    json map_echo;
    const json* mj = P.get("map");
    const json def_map = {{"kind", "coupled_sine"}, {"t1", 0.1}, {"t2", 0.1}, {"a", 0.1}, {"b", 0.1}};
    std::vector<std::string> sub;
    const TorusMapLift F = read_map(mj ? *mj : def_map, P.path("map"), sub, map_echo);
    for (const auto& d : sub) P.add(d);
    P.echo["map"] = map_echo;
    const long long grid = P.integer("grid", 64, 1, 4096);
    const long long iters = P.integer("iterations", 2000, 1, 10000000);
    const long long ref_grid = P.integer("reference_grid", 0, 0, 4096);
    const long long ref_iters = P.integer("reference_iterations", 20000, 1, 10000000);
    const double htol = P.number("hausdorff_tolerance", 0.02, positive);
    if (!ctx) return;

    const auto rs = mz_rotation_set(F, static_cast<int>(grid), static_cast<int>(iters), ctx->threads);
    auto& r = ctx->report.results;
    r["map"] = {{"name", F.name()}, {"parameters", F.parameters()}};
    r["rotation_set"] = to_json(rs);
    r["area"] = polygon_area(rs.vertices);
    json polys = {{"rotation_set", polygon_json(rs.vertices)}};
    if (ref_grid > 0) {
        const auto ref = mz_rotation_set(F, static_cast<int>(ref_grid), static_cast<int>(ref_iters), ctx->threads);
        const double hd = hausdorff_distance(rs.vertices, ref.vertices);
        r["reference"] = to_json(ref);
        r["hausdorff_to_reference"] = hd;
        polys["reference"] = polygon_json(ref.vertices);
        ctx->check("hausdorff_to_reference", hd, "<", htol);
    }
    ctx->files["polygons.json"] = polys.dump(2) + "\n";
}

json curated_franks_maps() {
    const double ab[10][2] = {{1.0, 1.0}, {1.2, 0.8}, {0.8, 1.3}, {1.5, 1.5}, {2.0, 1.0},
                              {1.0, 2.0}, {0.9, 0.9}, {1.1, 1.4}, {1.3, 1.0}, {2.0, 2.0}};
    json maps = json::array();
    for (const auto& m : ab) maps.push_back({{"kind", "two_param_shear"}, {"a", m[0]}, {"b", m[1]}});
    return maps;
}

void franks_experiment(Params& P, Context* ctx) {
    const json* mj = P.get("maps");
    const json def = curated_franks_maps();
    const json& arr = mj ? *mj : def;
    std::vector<TorusMapLift> maps;
    json echo = json::array();
    if (!arr.is_array() || arr.empty()) {
        P.fail("maps", "maps must be a non-empty array of map objects");
    } else {
        for (std::size_t i = 0; i < arr.size(); ++i) {
            std::vector<std::string> sub;
            json e;
            maps.push_back(read_map(arr[i], P.path("maps") + "[" + std::to_string(i) + "]", sub, e));
            for (const auto& d : sub) P.add(d);
            echo.push_back(e);
        }
    }
    P.echo["maps"] = echo;
    const long long grid = P.integer("grid", 32, 1, 4096);
    const long long iters = P.integer("iterations", 500, 1, 10000000);
    const long long Q = P.integer("denominator_bound", 3, 1, 64);
    const double margin = P.number("margin", 0.05, nonnegative);
    const double tol = P.number("tolerance", 1e-10, positive);
    const long long max_searches = P.integer("max_searches", 8, 1, 1000);
    if (!ctx) return;

    json rows = json::array();
    json polys = json::object();
    std::ostringstream csv;
    csv << "map,p1,p2,q,found,residual\n" << std::setprecision(17);
    long long with_interior = 0, with_orbit = 0;
    for (std::size_t i = 0; i < maps.size(); ++i) {
        const auto rs = mz_rotation_set(maps[i], static_cast<int>(grid), static_cast<int>(iters), ctx->threads);
        const auto interior = rational_interior_points(rs, static_cast<int>(Q), margin);
        json searches = json::array();
        bool found = false;
        long long tried = 0;
        for (const auto& rp : interior.points) {
            if (tried++ >= max_searches || found) break;
            const auto res = find_periodic_point(maps[i], rp.p, static_cast<int>(rp.q), default_newton_seeds(), tol,
                                                 ctx->threads);
            found = found || res.found;
            searches.push_back(to_json(res));
            csv << i << "," << rp.p.x() << "," << rp.p.y() << "," << rp.q << "," << (res.found ? 1 : 0) << ","
                << res.residual << "\n";
        }
        if (!interior.points.empty()) ++with_interior;
        if (found) ++with_orbit;
        json pts = json::array();
        for (const auto& rp : interior.points) pts.push_back({{"p", {rp.p.x(), rp.p.y()}}, {"q", rp.q}, {"depth", rp.depth}});
        rows.push_back({{"map", {{"name", maps[i].name()}, {"parameters", maps[i].parameters()}}},
                        {"rotation_set", to_json(rs)},
                        {"origin_depth", signed_distance(rs.vertices, Point2::Zero())},
                        {"degenerate", interior.degenerate},
                        {"interior_points", pts},
                        {"searches", searches},
                        {"found", found}});
        polys["map_" + std::to_string(i)] = polygon_json(rs.vertices);
    }
    auto& r = ctx->report.results;
    r["maps"] = rows;
    r["maps_with_interior_points"] = with_interior;
    r["maps_with_periodic_orbit"] = with_orbit;
    ctx->check("maps_without_orbit", static_cast<double>(with_interior - with_orbit), "==", 0.0);
    ctx->files["franks.csv"] = csv.str();
    ctx->files["polygons.json"] = polys.dump(2) + "\n";
}

void mather_table(Params& P, Context* ctx) {
    const std::string kind = P.choice("model", "flat", {"flat", "mechanical"});
    const long long dim = P.integer("dim", 2, 1, 3);
    std::vector<CosineMode> modes;
    if (kind == "mechanical") modes = read_modes(P, "potential", static_cast<int>(dim));
    const double hw = P.number("h_half_width", 1.0, positive);
    const long long hg = P.integer("h_grid", 9, 1, 101);
    const double cw = P.number("c_half_width", 1.0, nonnegative);
    const long long cg = P.integer("c_grid", kind == "flat" ? 9 : 1, 1, 101);
    const double box = P.number("alpha_box", 2.0, positive);
    const long long npp = P.integer("nodes_per_period", 32, 16, 4096);
    const long long qmax = P.integer("q_max", 16, 1, 256);
    const double btol = P.number("beta_tolerance", 1e-3, positive);
    const double atol = P.number("alpha_tolerance", 2e-3, positive);
    const double fytol = P.number("fenchel_young_tolerance", 1e-6, nonnegative);
    if (cg % 2 == 0) P.fail("c_grid", "c_grid must be odd so that c = 0 is sampled");
    if (!ctx) return;

    const int n = static_cast<int>(dim);
    std::shared_ptr<const Potential> V = kind == "flat" ? potential_zero(n) : potential_cosine(n, modes);
    auto model = HamiltonianModel::mechanical(inverse_metric_constant(Mat::Identity(n, n)), V);
    BetaOptions bo;
    bo.nodes_per_period = static_cast<int>(npp);
    bo.q_max = static_cast<int>(qmax);
    const BetaSolver beta(model, bo);

    auto grid_points = [n](double half, long long count) {
        std::vector<Vec> pts;
        long long total = 1;
        for (int a = 0; a < n; ++a) total *= count;
        for (long long i = 0; i < total; ++i) {
            Vec v(n);
            long long r = i;
            for (int a = 0; a < n; ++a) {
                const long long j = r % count;
                r /= count;
                v[a] = count == 1 ? 0.0 : -half + 2.0 * half * static_cast<double>(j) / static_cast<double>(count - 1);
            }
            pts.push_back(v);
        }
        return pts;
    };
    const auto hs = grid_points(hw, hg);
    std::vector<BetaEvaluation> betas(hs.size());
    parallel_for(hs.size(), ctx->threads, [&](std::size_t i) { betas[i] = beta.evaluate(hs[i]); });

    const auto cs = grid_points(cw, cg);
    std::vector<AlphaEvaluation> alphas;
    AlphaOptions ao;
    ao.threads = ctx->threads;
    const Vec lo = Vec::Constant(n, -box), hi = Vec::Constant(n, box);
    for (const auto& c : cs) alphas.push_back(alpha(std::cref(beta), c, lo, hi, ao));

    double fy = std::numeric_limits<double>::infinity();
    for (const auto& a : alphas)
        for (const auto& b : betas) fy = std::min(fy, a.value + b.value - a.c.dot(b.h));

    auto& r = ctx->report.results;
    bool all_converged = true;
    for (const auto& b : betas) all_converged = all_converged && b.converged;
    r["beta_converged"] = all_converged;
    r["fenchel_young_min"] = fy;
    ctx->check("fenchel_young_min", fy, ">=", -fytol);
    if (kind == "flat") {
        double be = 0.0, ae = 0.0;
        for (const auto& b : betas) be = std::max(be, std::abs(b.value - 0.5 * b.h.squaredNorm()));
        for (const auto& a : alphas) ae = std::max(ae, std::abs(a.value - 0.5 * a.c.squaredNorm()));
        r["beta_error"] = be;
        r["alpha_error"] = ae;
        ctx->check("beta_error", be, "<", btol);
        ctx->check("alpha_error", ae, "<", atol);
    } else {
        const double crit = critical_value_mechanical(ScalarGrid::sample(n, 256, [&](const Vec& x) {
            return V->value(x.data());
        }));
        double a0 = 0.0;
        for (const auto& a : alphas)
            if (a.c.isZero(0.0)) a0 = a.value;
        r["critical_value"] = crit;
        r["alpha_at_zero"] = a0;
        ctx->check("alpha_zero_minus_critical_value", std::abs(a0 - crit), "<", atol);
    }
    std::ostringstream bcsv, acsv;
    write_beta_table(bcsv, betas);
    write_alpha_table(acsv, alphas);
    ctx->files["beta.csv"] = bcsv.str();
    ctx->files["alpha.csv"] = acsv.str();
}

void hedlund_check(Params& P, Context* ctx) {
    const json def = json::array({json::array({1, 0, 0}), json::array({1, 1, 0}), json::array({1, 0, 1})});
    const json* vj = P.get("vectors");
    const json& arr = vj ? *vj : def;
    std::array<Vec, 3> vecs;
    if (!arr.is_array() || arr.size() != 3) {
        P.fail("vectors", "vectors must hold exactly three vectors");
    } else {
        for (int i = 0; i < 3; ++i) {
            vecs[i] = P.parse_vector(arr[i], "vectors");
            if (vecs[i].size() != 3) {
                P.fail("vectors", "vectors must have 3 components each");
                vecs[i] = Vec::Zero(3);
            } else if (vecs[i][0] == 0.0) {
                P.fail("vectors", "vectors must have a nonzero first component");
            }
        }
    }
    P.echo["vectors"] = arr;
    std::optional<TorusMapLift> F;
    if (const json* mj = P.get("map"); mj && !mj->is_null()) {
        std::vector<std::string> sub;
        json e;
        F = read_map(*mj, P.path("map"), sub, e);
        for (const auto& d : sub) P.add(d);
        P.echo["map"] = e;
    } else {
        P.echo["map"] = nullptr;
    }
    const long long Q = P.integer("denominator_bound", 3, 1, 64);
    const double det_thr = P.number("det_threshold", 1e-6, positive);
    const long long max_searches = P.integer("max_searches", 8, 1, 1000);
    if (!ctx) return;

    const auto v = hedlund_scenario_check(vecs, F ? &*F : nullptr, static_cast<int>(Q), det_thr,
                                          static_cast<int>(max_searches));
    auto& r = ctx->report.results;
    r["det"] = v.det;
    r["verdict"] = v.independent ? "independent_implies_periodic_search" : "degenerate";
    json sig = json::array();
    for (const auto& s : v.sigma) sig.push_back({s.x(), s.y()});
    r["sigma"] = sig;
    json pts = json::array();
    for (const auto& rp : v.interior.points) pts.push_back({{"p", {rp.p.x(), rp.p.y()}}, {"q", rp.q}, {"depth", rp.depth}});
    r["interior_points"] = pts;
    json searches = json::array();
    bool found = false;
    for (const auto& s : v.searches) {
        searches.push_back(to_json(s));
        found = found || s.found;
    }
    r["searches"] = searches;
    if (v.independent && F && !v.interior.points.empty()) ctx->check("periodic_orbit_found", found ? 1.0 : 0.0, "==", 1.0);
    if (v.independent) ctx->files["polygons.json"] = json{{"sigma_hull", polygon_json(convex_hull(v.sigma))}}.dump(2) + "\n";
}

void tischler_demo(Params& P, Context* ctx) {
    const Vec c = P.vector("cohomology", (Vec(3) << 1.0, std::sqrt(2.0), std::sqrt(3.0)).finished());
    const double eps = P.number("eps", 0.01, positive);
    const long long R = P.integer("resolution", 64, 2, 4096);
    if (!ctx) return;
    const auto t = tischler_fibration(c, eps);
    const auto chk = check_fibration_levels(t.primitive, static_cast<int>(R));
    auto& r = ctx->report.results;
    r["p"] = int_json(t.p);
    r["q"] = t.q;
    r["primitive"] = int_json(t.primitive);
    r["error"] = t.error;
    r["dirichlet_bound"] = t.dirichlet_bound;
    r["level_components"] = chk.components;
    r["winding_det"] = chk.winding_det;
    r["level_is_torus"] = chk.is_torus;
    ctx->check("approximation_error", t.error, "<=", eps);
    ctx->check("q_minus_dirichlet_bound", static_cast<double>(t.q) - t.dirichlet_bound, "<=", 0.0);
    ctx->check("level_is_torus", chk.is_torus ? 1.0 : 0.0, "==", 1.0);
}

struct ScenarioEntry {
    std::string id;
    std::string summary;
    ScenarioFn fn;
};

const std::vector<ScenarioEntry>& registry() {
    static const std::vector<ScenarioEntry> r = {
        {"mane_example", "zero-section orbits of the 1/2|p|^2 + <p, X> example and their asymptotic classes",
         mane_example},
        {"linear_flow", "rotation vector of a flat linear flow", linear_flow},
        {"cone_audit", "slope-3 cone bound along a fibred linear flow on T^3", cone_audit},
        {"rotation_set", "rotation set of a torus map lift", rotation_set},
        {"franks_experiment", "periodic orbits for rational interior rotation vectors", franks_experiment},
        {"mather_table", "beta and alpha tables of a mechanical Lagrangian", mather_table},
        {"hedlund_check", "general-position test for three suspension homologies", hedlund_check},
        {"tischler_demo", "rational fibration approximating a closed 1-form", tischler_demo},
    };
    return r;
}

const ScenarioEntry* find_entry(const std::string& id) {
    for (const auto& e : registry())
        if (e.id == id) return &e;
    return nullptr;
}

struct Parsed {
    ScenarioConfig config;
    json echo;
};

Parsed parse_all(const json& j, std::vector<std::string>& diags) {
    Parsed out;
    if (!j.is_object()) {
        diags.push_back("config: expected a JSON object");
        return out;
    }
    for (const auto& [key, value] : j.items())
        if (key != "scenario" && key != "parameters" && key != "seed" && key != "output_dir")
            diags.push_back(key + ": unknown key '" + key + "'");
    if (!j.contains("scenario") || !j["scenario"].is_string()) {
        diags.push_back("scenario: missing scenario id");
        return out;
    }
    out.config.scenario = j["scenario"].get<std::string>();
    if (j.contains("seed")) {
        if (!j["seed"].is_number_unsigned() && !(j["seed"].is_number_integer() && j["seed"].get<long long>() >= 0))
            diags.push_back("seed: seed must be a nonnegative integer");
        else
            out.config.seed = j["seed"].get<std::uint64_t>();
    }
    if (j.contains("output_dir")) {
        if (!j["output_dir"].is_string())
            diags.push_back("output_dir: output_dir must be a string");
        else
            out.config.output_dir = j["output_dir"].get<std::string>();
    }
    const ScenarioEntry* e = find_entry(out.config.scenario);
    if (!e) {
        diags.push_back("scenario: unknown scenario id '" + out.config.scenario + "'");
        return out;
    }
    const json params = j.contains("parameters") ? j["parameters"] : json::object();
    Params P(params, "parameters", diags);
    if (params.is_object()) {
        e->fn(P, nullptr);
        P.finish();
    }
    out.config.parameters = params;
    out.echo = P.echo;
    return out;
}

[[noreturn]] void throw_first(const std::vector<std::string>& diags) {
    const std::string& d = diags.front();
    const auto colon = d.find(": ");
    if (colon == std::string::npos) throw ConfigError("config", d);
    throw ConfigError(d.substr(0, colon), d.substr(colon + 2));
}

}  // namespace

std::vector<std::string> validate_config(const json& j) {
    std::vector<std::string> diags;
    parse_all(j, diags);
    return diags;
}

ScenarioConfig parse_config(const json& j) {
    std::vector<std::string> diags;
    Parsed p = parse_all(j, diags);
    if (!diags.empty()) throw_first(diags);
    return p.config;
}

const std::vector<std::string>& scenario_ids() {
    static const std::vector<std::string> ids = [] {
        std::vector<std::string> v;
        for (const auto& e : registry()) v.push_back(e.id);
        return v;
    }();
    return ids;
}

std::string scenario_summary(const std::string& id) {
    const ScenarioEntry* e = find_entry(id);
    return e ? e->summary : "";
}

bool Report::passed() const {
    if (!error.empty()) return false;
    for (const auto& c : checks)
        if (!c.passed) return false;
    return true;
}

json Report::to_json() const {
    json checks_json = json::array();
    for (const auto& c : checks)
        checks_json.push_back({{"name", c.name},
                               {"passed", c.passed},
                               {"value", c.value},
                               {"relation", c.relation},
                               {"threshold", c.threshold}});
    json j = {{"scenario", scenario}, {"version", version}, {"rng", rng},       {"seed", seed},
              {"inputs", inputs},     {"results", results}, {"checks", checks_json}, {"passed", passed()}};
    if (!error.empty()) j["error"] = error;
    return j;
}

Report Report::from_json(const json& j) {
    Report r;
    r.scenario = j.at("scenario").get<std::string>();
    r.version = j.at("version").get<std::string>();
    r.rng = j.at("rng").get<std::string>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.inputs = j.at("inputs");
    r.results = j.at("results");
    for (const auto& c : j.at("checks"))
        r.checks.push_back({c.at("name").get<std::string>(), c.at("passed").get<bool>(), c.at("value").get<double>(),
                            c.at("threshold").get<double>(), c.at("relation").get<std::string>()});
    if (j.contains("error")) r.error = j.at("error").get<std::string>();
    return r;
}

ScenarioOutput run_scenario(const ScenarioConfig& config, int threads) {
    ScenarioOutput out;
    Report& rep = out.report;
    rep.scenario = config.scenario;
    rep.rng = CounterRng::name;
    rep.seed = config.seed;
    const ScenarioEntry* e = find_entry(config.scenario);
    if (!e) throw ConfigError("scenario", "unknown scenario id '" + config.scenario + "'");
    {
        std::vector<std::string> diags;
        Params check(config.parameters, "parameters", diags);
        e->fn(check, nullptr);
        check.finish();
        if (!diags.empty()) throw_first(diags);
    }
    std::vector<std::string> diags;
    Params P(config.parameters, "parameters", diags);
    Context ctx{rep, out.files, config.seed, std::max(1, threads)};
    try {
        e->fn(P, &ctx);
    } catch (const Error& err) {
        rep.error = err.what();
    } catch (const std::invalid_argument& err) {
        rep.error = err.what();
    }
    rep.inputs = P.echo;
    return out;
}

void write_outputs(const ScenarioOutput& out, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    auto write = [&](const std::string& name, const std::string& content) {
        std::ofstream f(dir / name, std::ios::binary);
        if (!f) throw std::runtime_error("cannot write " + (dir / name).string());
        f << content;
    };
    write("report.json", out.report.to_json().dump(2) + "\n");
    for (const auto& [name, content] : out.files) write(name, content);
}

}  // namespace rotlab
