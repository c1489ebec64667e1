#include "rotlab/metric_field.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace rotlab {

namespace {

int wrap_index(long long i, int r) {
    long long m = i % r;
    return static_cast<int>(m < 0 ? m + r : m);
}

}  // namespace

GridShape::GridShape(int dim, int resolution) : dim_(dim), resolution_(resolution) {
    if (dim < 1) throw std::invalid_argument("grid dimension must be >= 1");
    if (resolution < 2) throw std::invalid_argument("grid resolution must be >= 2");
    count_ = 1;
    for (int i = 0; i < dim; ++i) count_ *= static_cast<std::size_t>(resolution);
}

std::size_t GridShape::linear(const int* idx) const {
    std::size_t lin = 0;
    for (int a = 0; a < dim_; ++a) lin = lin * resolution_ + wrap_index(idx[a], resolution_);
    return lin;
}

std::vector<int> GridShape::multi(std::size_t linear) const {
    std::vector<int> idx(dim_);
    for (int a = dim_ - 1; a >= 0; --a) {
        idx[a] = static_cast<int>(linear % resolution_);
        linear /= resolution_;
    }
    return idx;
}

Vec GridShape::position(std::size_t linear) const {
    auto idx = multi(linear);
    Vec x(dim_);
    for (int a = 0; a < dim_; ++a) x[a] = static_cast<double>(idx[a]) / resolution_;
    return x;
}

GridShape::Stencil GridShape::stencil(const Vec& x) const {
    if (x.size() != dim_) throw std::invalid_argument("grid stencil: dimension mismatch");
    Stencil s;
    s.frac.resize(dim_);
    s.base.resize(dim_);
    for (int a = 0; a < dim_; ++a) {
        double u = x[a] * resolution_;
        double f = std::floor(u);
        s.base[a] = static_cast<int>(static_cast<long long>(f) % resolution_);
        s.frac[a] = u - f;
    }
    const std::size_t corners = std::size_t{1} << dim_;
    s.nodes.resize(corners);
    s.weights.resize(corners);
    std::vector<int> idx(dim_);
    for (std::size_t c = 0; c < corners; ++c) {
        double w = 1.0;
        for (int a = 0; a < dim_; ++a) {
            bool up = (c >> a) & 1U;
            idx[a] = s.base[a] + (up ? 1 : 0);
            w *= up ? s.frac[a] : 1.0 - s.frac[a];
        }
        s.nodes[c] = linear(idx.data());
        s.weights[c] = w;
    }
    return s;
}

// ---------------------------------------------------------------------------

ScalarGrid::ScalarGrid(GridShape shape, std::vector<double> values) : shape_(shape), values_(std::move(values)) {
    if (values_.size() != shape_.node_count()) throw FormatError("scalar grid: wrong number of values");
    for (double v : values_)
        if (!std::isfinite(v)) throw FormatError("scalar grid: non-finite value");
}

ScalarGrid ScalarGrid::sample(int dim, int resolution, const std::function<double(const Vec&)>& f) {
    GridShape shape(dim, resolution);
    std::vector<double> v(shape.node_count());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = f(shape.position(i));
    return ScalarGrid(shape, std::move(v));
}

double ScalarGrid::at(const Vec& x) const {
    auto s = shape_.stencil(x);
    double acc = 0.0;
    for (std::size_t c = 0; c < s.nodes.size(); ++c) acc += s.weights[c] * values_[s.nodes[c]];
    return acc;
}

Vec ScalarGrid::gradient(const Vec& x) const {
    auto s = shape_.stencil(x);
    const int n = shape_.dim();
    Vec g = Vec::Zero(n);
    for (std::size_t c = 0; c < s.nodes.size(); ++c) {
        for (int k = 0; k < n; ++k) {
            double w = 1.0;
            for (int a = 0; a < n; ++a) {
                bool up = (c >> a) & 1U;
                if (a == k)
                    w *= (up ? 1.0 : -1.0) * shape_.resolution();
                else
                    w *= up ? s.frac[a] : 1.0 - s.frac[a];
            }
            g[k] += w * values_[s.nodes[c]];
        }
    }
    return g;
}

Vec ScalarGrid::node_gradient(std::size_t linear) const {
    const int n = shape_.dim();
    auto idx = shape_.multi(linear);
    Vec g(n);
    for (int k = 0; k < n; ++k) {
        auto up = idx, down = idx;
        up[k] += 1;
        down[k] -= 1;
        g[k] = (values_[shape_.linear(up.data())] - values_[shape_.linear(down.data())]) * 0.5 * shape_.resolution();
    }
    return g;
}

double ScalarGrid::min_value() const { return *std::min_element(values_.begin(), values_.end()); }

// ---------------------------------------------------------------------------

MetricField::MetricField(GridShape shape, std::vector<Mat> values) : shape_(shape), values_(std::move(values)) {
    if (values_.size() != shape_.node_count()) throw InvalidMetric("metric field: wrong number of node matrices");
    const int n = shape_.dim();
    for (std::size_t i = 0; i < values_.size(); ++i) {
        const Mat& g = values_[i];
        if (g.rows() != n || g.cols() != n) throw InvalidMetric("metric field: node matrix has wrong shape");
        if (!g.allFinite()) throw InvalidMetric("metric field: non-finite entry at node " + std::to_string(i));
        if ((g - g.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, g.cwiseAbs().maxCoeff()))
            throw InvalidMetric("metric field: non-symmetric matrix at node " + std::to_string(i));
        Eigen::SelfAdjointEigenSolver<Mat> es(g, Eigen::EigenvaluesOnly);
        if (es.eigenvalues().minCoeff() <= 0.0)
            throw InvalidMetric("metric field: matrix not positive definite at node " + std::to_string(i));
    }
}

MetricField MetricField::flat(int dim, int resolution) {
    GridShape shape(dim, resolution);
    return MetricField(shape, std::vector<Mat>(shape.node_count(), Mat::Identity(dim, dim)));
}

MetricField MetricField::sample(int dim, int resolution, const std::function<Mat(const Vec&)>& g) {
    GridShape shape(dim, resolution);
    std::vector<Mat> v(shape.node_count());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = g(shape.position(i));
    return MetricField(shape, std::move(v));
}

Mat MetricField::at(const Vec& x) const {
    auto s = shape_.stencil(x);
    Mat g = Mat::Zero(dim(), dim());
    for (std::size_t c = 0; c < s.nodes.size(); ++c)
        if (s.weights[c] != 0.0) g += s.weights[c] * values_[s.nodes[c]];
    return g;
}

Mat MetricField::derivative(const Vec& x, int axis) const {
    auto s = shape_.stencil(x);
    const int n = dim();
    Mat d = Mat::Zero(n, n);
    for (std::size_t c = 0; c < s.nodes.size(); ++c) {
        double w = 1.0;
        for (int a = 0; a < n; ++a) {
            bool up = (c >> a) & 1U;
            if (a == axis)
                w *= (up ? 1.0 : -1.0) * shape_.resolution();
            else
                w *= up ? s.frac[a] : 1.0 - s.frac[a];
        }
        d += w * values_[s.nodes[c]];
    }
    return d;
}

double MetricField::length(const Vec& x, const Vec& d) const { return std::sqrt(d.dot(at(x) * d)); }

// ---------------------------------------------------------------------------

OneForm::OneForm(Vec cohomology_class, ScalarGrid potential)
    : class_(std::move(cohomology_class)), potential_(std::move(potential)) {
    if (class_.size() != potential_.shape().dim()) throw std::invalid_argument("one-form: dimension mismatch");
}

OneForm OneForm::constant(Vec cohomology_class, int resolution) {
    const int n = static_cast<int>(cohomology_class.size());
    GridShape shape(n, resolution);
    return OneForm(std::move(cohomology_class), ScalarGrid(shape, std::vector<double>(shape.node_count(), 0.0)));
}

Vec OneForm::at_node(std::size_t linear) const { return class_ + potential_.node_gradient(linear); }

Vec OneForm::at(const Vec& x) const {
    auto s = potential_.shape().stencil(x);
    Vec v = Vec::Zero(class_.size());
    for (std::size_t c = 0; c < s.nodes.size(); ++c) v += s.weights[c] * potential_.node_gradient(s.nodes[c]);
    return class_ + v;
}

// ---------------------------------------------------------------------------

namespace {

nlohmann::json read_json(const std::filesystem::path& p) {
    std::ifstream in(p);
    if (!in) throw FormatError("cannot open " + p.string());
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(p.string() + ": " + e.what());
    }
}

}  // namespace

MetricField load_metric_field(const std::filesystem::path& header) {
    auto h = read_json(header);
    int n = 0, res = 0;
    std::string format, body;
    try {
        n = h.at("n").get<int>();
        res = h.at("resolution").get<int>();
        if (h.value("interpolation", std::string("multilinear")) != "multilinear")
            throw FormatError("metric header: only multilinear interpolation is supported");
        format = h.value("format", std::string("csv"));
        body = h.at("body").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        throw FormatError("metric header " + header.string() + ": " + e.what());
    }
    GridShape shape(n, res);
    const std::size_t per = static_cast<std::size_t>(n) * n;
    std::vector<double> flat;
    flat.reserve(shape.node_count() * per);
    auto body_path = header.parent_path() / body;
    if (format == "csv") {
        std::ifstream in(body_path);
        if (!in) throw FormatError("cannot open " + body_path.string());
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty() || line[0] == '#') continue;
            std::stringstream ss(line);
            std::string cell;
            while (std::getline(ss, cell, ',')) {
                try {
                    flat.push_back(std::stod(cell));
                } catch (const std::exception&) {
                    throw FormatError("metric body: bad number '" + cell + "'");
                }
            }
        }
    } else if (format == "binary") {
        std::ifstream in(body_path, std::ios::binary);
        if (!in) throw FormatError("cannot open " + body_path.string());
        flat.resize(shape.node_count() * per);
        in.read(reinterpret_cast<char*>(flat.data()), static_cast<std::streamsize>(flat.size() * sizeof(double)));
        if (in.gcount() != static_cast<std::streamsize>(flat.size() * sizeof(double)))
            throw FormatError("metric body: truncated binary file");
    } else {
        throw FormatError("metric header: unknown body format '" + format + "'");
    }
    if (flat.size() != shape.node_count() * per) throw FormatError("metric body: wrong number of entries");
    std::vector<Mat> values(shape.node_count(), Mat(n, n));
    for (std::size_t i = 0; i < values.size(); ++i)
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c) values[i](r, c) = flat[i * per + r * n + c];
    return MetricField(shape, std::move(values));
}

void save_metric_field(const MetricField& field, const std::filesystem::path& header, BodyFormat format) {
    const int n = field.dim();
    auto body_name = header.stem().string() + (format == BodyFormat::csv ? ".csv" : ".bin");
    nlohmann::json h = {{"n", n},
                        {"resolution", field.resolution()},
                        {"interpolation", "multilinear"},
                        {"format", format == BodyFormat::csv ? "csv" : "binary"},
                        {"body", body_name}};
    std::ofstream(header) << h.dump(2) << '\n';
    auto body_path = header.parent_path() / body_name;
    if (format == BodyFormat::csv) {
        std::ofstream out(body_path);
        out.precision(17);
        for (const Mat& g : field.nodes()) {
            for (int r = 0; r < n; ++r)
                for (int c = 0; c < n; ++c) out << (r + c ? "," : "") << g(r, c);
            out << '\n';
        }
    } else {
        std::ofstream out(body_path, std::ios::binary);
        for (const Mat& g : field.nodes())
            for (int r = 0; r < n; ++r)
                for (int c = 0; c < n; ++c) {
                    double v = g(r, c);
                    out.write(reinterpret_cast<const char*>(&v), sizeof v);
                }
    }
}

ScalarGrid load_scalar_grid(const std::filesystem::path& path) {
    auto j = read_json(path);
    try {
        GridShape shape(j.at("n").get<int>(), j.at("resolution").get<int>());
        return ScalarGrid(shape, j.at("values").get<std::vector<double>>());
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(path.string() + ": " + e.what());
    }
}

void save_scalar_grid(const ScalarGrid& grid, const std::filesystem::path& path) {
    nlohmann::json j = {{"n", grid.shape().dim()}, {"resolution", grid.shape().resolution()}, {"values", grid.values()}};
    std::ofstream(path) << j.dump() << '\n';
}

}  // namespace rotlab
