#include "rotlab/homology.hpp"

#include <cmath>
#include <limits>
#include <utility>

namespace rotlab {

IntHomologyClass::IntHomologyClass(IntVec c) : coeffs(std::move(c)) {
    if (coeffs.size() < 1) throw std::invalid_argument("homology class needs n >= 1");
}

IntHomologyClass::IntHomologyClass(std::initializer_list<long long> c) : coeffs(static_cast<Eigen::Index>(c.size())) {
    if (c.size() < 1) throw std::invalid_argument("homology class needs n >= 1");
    Eigen::Index i = 0;
    for (long long v : c) coeffs[i++] = v;
}

IntHomologyClass operator+(const IntHomologyClass& a, const IntHomologyClass& b) {
    return IntHomologyClass(IntVec(a.coeffs + b.coeffs));
}

IntHomologyClass operator-(const IntHomologyClass& a) { return IntHomologyClass(IntVec(-a.coeffs)); }

bool operator==(const IntHomologyClass& a, const IntHomologyClass& b) {
    return a.coeffs.size() == b.coeffs.size() && a.coeffs == b.coeffs;
}

IntHomologyClass round_to_class(const Vec& v) {
    IntVec k(v.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) k[i] = std::llround(v[i]);
    return IntHomologyClass(std::move(k));
}

NormModel::NormModel(Kind k, std::function<double(const Vec&)> f, std::string label)
    : kind_(k), eval_(std::move(f)), label_(std::move(label)) {}

NormModel NormModel::euclidean() {
    return NormModel(Kind::euclidean, [](const Vec& v) { return v.norm(); }, "euclidean");
}

NormModel NormModel::stable(std::function<double(const Vec&)> evaluator, std::string label) {
    return NormModel(Kind::stable, std::move(evaluator), std::move(label));
}

NormModel NormModel::constant_metric(const Mat& g) {
    Eigen::LLT<Mat> llt(g);
    if (llt.info() != Eigen::Success) throw InvalidMetric("constant metric is not positive definite");
    Mat upper = llt.matrixU();
    return NormModel(Kind::stable, [upper](const Vec& v) { return (upper * v).norm(); }, "constant-metric");
}

Mat coordinate_complement(const HomologyVector& axis) {
    const Eigen::Index n = axis.size();
    Eigen::Index dominant = 0;
    axis.cwiseAbs().maxCoeff(&dominant);
    Mat g = Mat::Zero(n, n - 1);
    for (Eigen::Index j = 0, col = 0; j < n; ++j) {
        if (j == dominant) continue;
        g(j, col++) = 1.0;
    }
    return g;
}

ConeSpec ConeSpec::with_coordinate_complement(HomologyVector axis, double slope, NormModel norm) {
    if (slope < 0) throw std::invalid_argument("cone slope must be nonnegative");
    Mat g = coordinate_complement(axis);
    return ConeSpec{std::move(axis), std::move(g), slope, std::move(norm)};
}

Decomposition decompose(const HomologyVector& v, const HomologyVector& axis, const Mat& complement) {
    const Eigen::Index n = axis.size();
    if (v.size() != n || complement.rows() != n || complement.cols() != n - 1)
        throw std::invalid_argument("decompose: dimension mismatch");
    if (axis.isZero(0.0)) throw SingularBasis("cone axis is zero");

    Mat basis(n, n);
    basis.col(0) = axis;
    basis.rightCols(n - 1) = complement;
    Eigen::FullPivLU<Mat> lu(basis);
    lu.setThreshold(1e-12);
    if (lu.rank() < n) throw SingularBasis("axis and complement basis are rank deficient");

    Vec c = lu.solve(v);
    Decomposition d;
    d.t = c[0];
    d.w = complement * c.tail(n - 1);
    // w is recomputed as v - t*h so recomposition holds to rounding.
    Vec w_direct = v - d.t * axis;
    if ((w_direct - d.w).norm() <= 1e-12 * std::max(1.0, v.norm())) d.w = w_direct;
    return d;
}

namespace {
constexpr double kBoundaryRelTol = 1e-12;
}

bool cone_contains(const HomologyVector& v, const ConeSpec& cone) {
    Decomposition d = decompose(v, cone);
    if (v.isZero(0.0)) return true;
    if (d.t < 0) return false;
    const double nw = cone.norm(d.w);
    const double nt = cone.norm(d.t * cone.axis);
    if (nt == 0.0) return nw == 0.0;
    return nw <= cone.slope * nt * (1.0 + kBoundaryRelTol) + kBoundaryRelTol * nt;
}

std::optional<double> minimal_slope(const HomologyVector& axis, const Mat& complement,
                                    const NormModel& norm, std::span<const HomologyVector> vectors) {
    if (vectors.empty()) throw std::invalid_argument("minimal_slope: empty vector set");
    double worst = 0.0;
    for (const auto& v : vectors) {
        if (v.isZero(0.0)) continue;
        Decomposition d = decompose(v, axis, complement);
        if (d.t <= 0) return std::nullopt;
        worst = std::max(worst, norm(d.w) / norm(d.t * axis));
    }
    return worst;
}

}  // namespace rotlab
