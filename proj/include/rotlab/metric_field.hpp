#pragma once

// Grid-sampled periodic fields on T^n: scalar potentials, Riemannian metrics
// and closed 1-forms. Values live on the nodes i/R, i in {0..R-1}^n, and are
// multilinearly interpolated with periodic wrap-around.

#include <filesystem>
#include <functional>
#include <vector>

#include "rotlab/types.hpp"

namespace rotlab {

/// Node indexing shared by the periodic grids. The last axis varies fastest.
class GridShape {
public:
    GridShape() = default;
    GridShape(int dim, int resolution);

    int dim() const { return dim_; }
    int resolution() const { return resolution_; }
    std::size_t node_count() const { return count_; }
    double spacing() const { return 1.0 / resolution_; }

    std::size_t linear(const int* idx) const;  // idx is reduced mod R
    std::vector<int> multi(std::size_t linear) const;
    Vec position(std::size_t linear) const;

    /// Corners and weights of the multilinear stencil containing x.
    struct Stencil {
        std::vector<std::size_t> nodes;
        std::vector<double> weights;
        std::vector<double> frac;          // fractional offsets per axis
        std::vector<int> base;             // lower-corner index per axis (unreduced)
    };
    Stencil stencil(const Vec& x) const;

private:
    int dim_ = 0;
    int resolution_ = 0;
    std::size_t count_ = 0;
};

/// Periodic scalar field (potential V, 1-form primitive).
class ScalarGrid {
public:
    ScalarGrid() = default;
    ScalarGrid(GridShape shape, std::vector<double> values);
    static ScalarGrid sample(int dim, int resolution, const std::function<double(const Vec&)>& f);

    const GridShape& shape() const { return shape_; }
    const std::vector<double>& values() const { return values_; }
    double node(std::size_t linear) const { return values_[linear]; }

    double at(const Vec& x) const;
    /// Gradient of the multilinear interpolant (one-sided on cell faces).
    Vec gradient(const Vec& x) const;
    /// Central-difference gradient at a node.
    Vec node_gradient(std::size_t linear) const;
    double min_value() const;

private:
    GridShape shape_;
    std::vector<double> values_;
};

/// Symmetric positive definite metric g_ij(x) sampled on a periodic grid.
class MetricField {
public:
    MetricField() = default;
    /// Validates symmetry (1e-12 relative) and positive definiteness at every node.
    MetricField(GridShape shape, std::vector<Mat> values);

    static MetricField flat(int dim, int resolution);
    static MetricField sample(int dim, int resolution, const std::function<Mat(const Vec&)>& g);

    const GridShape& shape() const { return shape_; }
    int dim() const { return shape_.dim(); }
    int resolution() const { return shape_.resolution(); }

    const Mat& node(std::size_t linear) const { return values_[linear]; }
    const std::vector<Mat>& nodes() const { return values_; }

    Mat at(const Vec& x) const;
    /// d g / d x_axis of the interpolant.
    Mat derivative(const Vec& x, int axis) const;
    /// Riemannian length of the vector d at x.
    double length(const Vec& x, const Vec& d) const;

private:
    GridShape shape_;
    std::vector<Mat> values_;
};

/// Closed 1-form on T^n stored as cohomology class plus periodic primitive:
/// beta = c + d(potential).
class OneForm {
public:
    OneForm(Vec cohomology_class, ScalarGrid potential);
    /// Constant form c (zero primitive) on a grid of the given resolution.
    static OneForm constant(Vec cohomology_class, int resolution);

    const Vec& cohomology_class() const { return class_; }
    const ScalarGrid& potential() const { return potential_; }

    Vec at_node(std::size_t linear) const;
    Vec at(const Vec& x) const;

private:
    Vec class_;
    ScalarGrid potential_;
};

enum class BodyFormat { csv, binary };

/// Metric file: JSON header {"n","resolution","interpolation":"multilinear",
/// "format":"csv"|"binary","body":<path relative to header>} and a body of
/// row-major n x n matrices, one per node in grid order.
MetricField load_metric_field(const std::filesystem::path& header);
void save_metric_field(const MetricField& field, const std::filesystem::path& header, BodyFormat format);

/// Potential file: JSON {"n","resolution","values":[...]} in grid order.
ScalarGrid load_scalar_grid(const std::filesystem::path& path);
void save_scalar_grid(const ScalarGrid& grid, const std::filesystem::path& path);

}  // namespace rotlab
