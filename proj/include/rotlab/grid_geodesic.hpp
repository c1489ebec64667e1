#pragma once

// Shortest paths for a grid-sampled metric on the universal cover of T^n and
// the stable-norm estimators built on them.
//
// The graph has one node per grid point of R^n (spacing 1/R) and one edge per
// primitive offset o with |o|_inf <= stencil radius. The weight of an edge is
// the metric length of the straight segment, integrated with one midpoint
// sample per grid cell crossed. Edge weights depend only on the start node
// mod R, so distances are exactly invariant under deck translations.

#include <limits>
#include <optional>
#include <vector>

#include "rotlab/homology.hpp"
#include "rotlab/metric_field.hpp"
#include "rotlab/torus.hpp"

namespace rotlab {

struct GridGeodesicOptions {
    int stencil_radius = 0;       // 0 picks 3 for n <= 2, 2 for n = 3, 1 otherwise
    double window_domains = 8.0;  // max extent of a search box per axis, in fundamental domains
    double padding = 0.25;        // slack around the endpoints, in fundamental domains
};

/// Offset of a grid node in the cover, in units of grid steps.
using NodeCoord = std::vector<long long>;

class GridGeodesic {
public:
    explicit GridGeodesic(MetricField metric, GridGeodesicOptions options = {});

    const MetricField& metric() const { return metric_; }
    int dim() const { return metric_.dim(); }
    int resolution() const { return metric_.resolution(); }
    const std::vector<std::vector<int>>& stencil() const { return offsets_; }

    /// Snaps a lifted point to the nearest grid node.
    NodeCoord snap(const Vec& x) const;

    /// Grid distance between two lifted points (both snapped to nodes).
    /// Throws OutOfWindow when the search box exceeds the window.
    double distance(const LiftedPoint& a, const LiftedPoint& b) const;
    /// Distance between nodes; returns +inf if it is provably >= cutoff.
    double node_distance(const NodeCoord& a, const NodeCoord& b,
                         double cutoff = std::numeric_limits<double>::infinity()) const;

    /// Distance between the leaves {x_axis = from} and {x_axis = to} of the
    /// coordinate fibration, with the transverse axes taken periodically.
    double leaf_distance(int axis, double from, double to) const;

    /// Nearest lift of `base` as seen from `from`: the lattice vector k minimising
    /// d(from, base + k) among candidates near from - base.
    struct Closing {
        IntHomologyClass shift;  // k
        double length = 0.0;
        bool ambiguous = false;  // a second lift lies within the tolerance
    };
    Closing closing(const Vec& from, const Vec& base, double ambiguity_tol = 0.02) const;

    /// Length of the shortest closed grid curve in the class k: minimum over base
    /// nodes on the section {x_i = 0} (i = dominant coordinate of k) of d(x, x + k).
    /// `base_stride` thins the base nodes along each section axis.
    double stable_norm_integer(const IntHomologyClass& k, int base_stride = 1) const;

    /// Stable norm of a real class from its best rational direction k/q, q <= Q:
    /// ||k||_s * <v,k>/<k,k>, exact whenever v is parallel to an integer class.
    double stable_norm_real(const Vec& v, int denominator_bound, int base_stride = 1) const;

    /// Norm model backed by stable_norm_real.
    NormModel stable_norm_model(int denominator_bound, int base_stride = 1) const;

    /// Diameter of (T^n, g) estimated on the torus graph from sampled sources.
    double diameter(int source_stride = 0) const;

    /// Lower bound c with c|d| <= |d|_g for every grid edge.
    double min_speed() const { return min_speed_; }

private:
    struct Box;
    struct SearchResult;

    template <class Target, class Heuristic>
    SearchResult search(const Box& box, const std::vector<std::size_t>& sources, Target is_target,
                        Heuristic heuristic, double cutoff, double second_tol) const;

    double edge_weight(std::size_t torus_node, std::size_t offset) const {
        return weights_[torus_node * offsets_.size() + offset];
    }
    Box box_around(const std::vector<NodeCoord>& points, double pad_domains) const;

    MetricField metric_;
    GridGeodesicOptions options_;
    std::vector<std::vector<int>> offsets_;
    std::vector<double> weights_;
    double min_speed_ = 0.0;
};

}  // namespace rotlab
