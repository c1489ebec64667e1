#include "rotlab/metric_constructions.hpp"

#include <cmath>

namespace rotlab {

VectorFieldGrid VectorFieldGrid::sample(int dim, int resolution, const std::function<Vec(const Vec&)>& X) {
    VectorFieldGrid out{GridShape(dim, resolution), {}};
    out.values.reserve(out.shape.node_count());
    for (std::size_t i = 0; i < out.shape.node_count(); ++i) {
        Vec v = X(out.shape.position(i));
        if (v.size() != dim) throw std::invalid_argument("vector field: wrong dimension");
        out.values.push_back(std::move(v));
    }
    return out;
}

Mat geodesible_matrix(const Mat& gbar, const Vec& X, const Vec& b, double kappa2) {
    const double pairing = b.dot(X);
    const Eigen::Index n = X.size();
    Mat P = Mat::Identity(n, n) - X * b.transpose() / pairing;
    Mat g = kappa2 * b * b.transpose() + P.transpose() * gbar * P;
    return 0.5 * (g + g.transpose());
}

namespace {

bool in_region(const std::vector<char>& region, std::size_t i) { return region.empty() || region[i]; }

void check_shapes(const MetricField& base, const VectorFieldGrid& X, const OneForm& beta) {
    if (X.shape.dim() != base.dim() || X.shape.resolution() != base.resolution())
        throw std::invalid_argument("geodesible metric: vector field grid differs from metric grid");
    const GridShape& bs = beta.potential().shape();
    if (bs.dim() != base.dim() || bs.resolution() != base.resolution())
        throw std::invalid_argument("geodesible metric: 1-form grid differs from metric grid");
}

}  // namespace

GeodesibleResult geodesible_metric(const MetricField& base, const VectorFieldGrid& X, const OneForm& beta,
                                   const GeodesibleOptions& options) {
    check_shapes(base, X, beta);
    const std::size_t N = base.shape().node_count();
    if (!options.region.empty() && options.region.size() != N)
        throw std::invalid_argument("geodesible metric: region mask has wrong size");

    std::vector<Vec> forms(N);
    double kappa_sum = 0.0;
    std::size_t count = 0;
    for (std::size_t i = 0; i < N; ++i) {
        if (!in_region(options.region, i)) continue;
        forms[i] = beta.at_node(i);
        const Vec& x = X.values[i];
        const double pairing = forms[i].dot(x);
        if (std::abs(pairing) <= options.pairing_tol * forms[i].norm() * x.norm() || pairing == 0.0)
            throw DegeneratePairing("beta(X) vanishes at node " + std::to_string(i));
        kappa_sum += x.dot(base.node(i) * x) / (pairing * pairing);
        ++count;
    }
    if (count == 0) throw std::invalid_argument("geodesible metric: empty region");
    const double kappa2 = kappa_sum / static_cast<double>(count);

    std::vector<Mat> out(N);
    for (std::size_t i = 0; i < N; ++i)
        out[i] = in_region(options.region, i) ? geodesible_matrix(base.node(i), X.values[i], forms[i], kappa2)
                                              : base.node(i);
    return GeodesibleResult{MetricField(base.shape(), std::move(out)), kappa2};
}

double geodesible_orthogonality_residual(const MetricField& g, const VectorFieldGrid& X, const OneForm& beta,
                                         const std::vector<char>& region) {
    check_shapes(g, X, beta);
    const int n = g.dim();
    double worst = 0.0;
    for (std::size_t i = 0; i < g.shape().node_count(); ++i) {
        if (!in_region(region, i)) continue;
        const Vec b = beta.at_node(i);
        const Vec& x = X.values[i];
        const Mat& G = g.node(i);
        // Basis of ker b: e_j - (b_j / b_k) e_k with k the dominant entry of b.
        Eigen::Index k = 0;
        b.cwiseAbs().maxCoeff(&k);
        const double xn = std::sqrt(x.dot(G * x));
        for (int j = 0; j < n; ++j) {
            if (j == k) continue;
            Vec w = Vec::Zero(n);
            w[j] = 1.0;
            w[k] = -b[j] / b[k];
            const double wn = std::sqrt(w.dot(G * w));
            worst = std::max(worst, std::abs(x.dot(G * w)) / (xn * wn));
        }
    }
    return worst;
}

MetricField maupertuis_metric(const MetricField& g, const ScalarGrid& V, double e) {
    if (V.shape().dim() != g.dim() || V.shape().resolution() != g.resolution())
        throw std::invalid_argument("maupertuis metric: potential grid differs from metric grid");
    std::vector<Mat> out(g.shape().node_count());
    for (std::size_t i = 0; i < out.size(); ++i) {
        const double factor = e + V.node(i);
        if (!(factor > 0.0))
            throw SubcriticalEnergy("energy " + std::to_string(e) + " is below -V at node " + std::to_string(i));
        out[i] = factor * g.node(i);
    }
    return MetricField(g.shape(), std::move(out));
}

}  // namespace rotlab
