#pragma once

// First homology of the n-torus: integer classes, real classes, norms on
// H1(T^n, R) and cones of slope A around an axis.

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rotlab/types.hpp"

namespace rotlab {

/// Integer class in H1(T^n, Z) = Z^n, coordinates in the standard basis.
struct IntHomologyClass {
    IntVec coeffs;

    IntHomologyClass() = default;
    explicit IntHomologyClass(IntVec c);
    IntHomologyClass(std::initializer_list<long long> c);

    Eigen::Index dim() const { return coeffs.size(); }
    bool is_zero() const { return (coeffs.array() == 0).all(); }
    Vec to_real() const { return coeffs.cast<double>(); }

    friend IntHomologyClass operator+(const IntHomologyClass& a, const IntHomologyClass& b);
    friend IntHomologyClass operator-(const IntHomologyClass& a);
    friend bool operator==(const IntHomologyClass& a, const IntHomologyClass& b);
};

/// Real homology vectors (rotation vectors, asymptotic cycles) are plain
/// Eigen vectors; the alias documents intent at API boundaries.
using HomologyVector = Vec;

/// Nearest lattice vector, coordinate-wise.
IntHomologyClass round_to_class(const Vec& v);

/// A norm on H1(T^n, R). Either the Euclidean norm of the coefficient vector
/// or a stable norm supplied by a metric-backed evaluator.
class NormModel {
public:
    enum class Kind { euclidean, stable };

    static NormModel euclidean();
    static NormModel stable(std::function<double(const Vec&)> evaluator, std::string label);
    /// Stable norm of a constant-coefficient metric g: sqrt(v^T g v).
    static NormModel constant_metric(const Mat& g);

    double operator()(const Vec& v) const { return eval_(v); }
    Kind kind() const { return kind_; }
    const std::string& label() const { return label_; }

private:
    NormModel(Kind k, std::function<double(const Vec&)> f, std::string label);

    Kind kind_;
    std::function<double(const Vec&)> eval_;
    std::string label_;
};

/// Cone of slope A with axis h relative to a splitting H1 = <h> + G.
struct ConeSpec {
    HomologyVector axis;
    Mat complement;  // n x (n-1), columns span G
    double slope = 0.0;
    NormModel norm = NormModel::euclidean();

    /// G spanned by the coordinate vectors other than the axis' dominant coordinate.
    static ConeSpec with_coordinate_complement(HomologyVector axis, double slope,
                                               NormModel norm = NormModel::euclidean());
};

/// Coordinate complement used by default: all e_j except j = argmax |h_j|.
Mat coordinate_complement(const HomologyVector& axis);

struct Decomposition {
    double t = 0.0;
    HomologyVector w;
};

/// Solves v = t*h + w with w in span(complement). Throws SingularBasis.
Decomposition decompose(const HomologyVector& v, const HomologyVector& axis, const Mat& complement);
inline Decomposition decompose(const HomologyVector& v, const ConeSpec& cone) {
    return decompose(v, cone.axis, cone.complement);
}

/// Membership in the cone; v = 0 is in every cone, t = 0 with w != 0 is in none.
bool cone_contains(const HomologyVector& v, const ConeSpec& cone);

/// Smallest A such that every vector lies in the cone of slope A, or nullopt
/// when no proper cone with this axis contains them (some t <= 0).
/// Zero vectors are skipped: they belong to every cone.
std::optional<double> minimal_slope(const HomologyVector& axis, const Mat& complement,
                                    const NormModel& norm, std::span<const HomologyVector> vectors);

}  // namespace rotlab
