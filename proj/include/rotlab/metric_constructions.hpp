#pragma once

// Metrics adapted to a flow: the geodesible metric that turns the orbits of a
// nonsingular field X into geodesics, and the Jacobi (Maupertuis) metric of a
// mechanical system at a fixed energy.

#include <vector>

#include "rotlab/metric_field.hpp"

namespace rotlab {

/// Vector field sampled on the nodes of a periodic grid.
struct VectorFieldGrid {
    GridShape shape;
    std::vector<Vec> values;

    static VectorFieldGrid sample(int dim, int resolution, const std::function<Vec(const Vec&)>& X);
};

/// One node of the geodesible construction. Writes X = X, beta = b, reference
/// metric gbar and horizontal scale kappa2:
///   g = kappa2 * b b^T + P^T gbar P,   P = I - X b^T / b(X).
/// X is g-orthogonal to ker b and g(X, X) = kappa2 * b(X)^2.
Mat geodesible_matrix(const Mat& gbar, const Vec& X, const Vec& b, double kappa2);

struct GeodesibleOptions {
    /// Nodes where the construction is required. Empty means every node. Nodes
    /// outside the region keep the reference metric.
    std::vector<char> region;
    /// Relative threshold below which |b(X)| counts as vanishing.
    double pairing_tol = 1e-12;
};

struct GeodesibleResult {
    MetricField metric;
    double kappa2 = 0.0;  // mean of gbar(X,X)/b(X)^2 over the region
};

/// Metric for which the orbits of X are geodesics and the leaves of ker beta
/// are equidistant. Throws DegeneratePairing if beta(X) vanishes in the region.
GeodesibleResult geodesible_metric(const MetricField& base, const VectorFieldGrid& X, const OneForm& beta,
                                   const GeodesibleOptions& options = {});

/// Largest |g(X, w)| over nodes of the region and a basis w of ker beta,
/// relative to |X|_g |w|_g.
double geodesible_orthogonality_residual(const MetricField& g, const VectorFieldGrid& X, const OneForm& beta,
                                         const std::vector<char>& region = {});

/// Jacobi metric of H = 1/2 g^{ij} p_i p_j - V at energy e: (e + V) g_ij.
/// Its geodesics are the energy-e orbits up to reparametrisation. Throws
/// SubcriticalEnergy if e + V <= 0 at some node.
MetricField maupertuis_metric(const MetricField& g, const ScalarGrid& V, double e);

}  // namespace rotlab
