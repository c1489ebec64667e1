#pragma once

#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace rotlab {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using IntVec = Eigen::Matrix<long long, Eigen::Dynamic, 1>;
using IntMat = Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic>;

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

#define ROTLAB_ERROR(Name)                      \
    class Name : public Error {                 \
    public:                                     \
        using Error::Error;                     \
    }

ROTLAB_ERROR(SingularBasis);
ROTLAB_ERROR(StepTooLarge);
ROTLAB_ERROR(OutOfWindow);
ROTLAB_ERROR(DegeneratePairing);
ROTLAB_ERROR(SubcriticalEnergy);
ROTLAB_ERROR(InvalidMetric);
ROTLAB_ERROR(NewtonDiverged);
ROTLAB_ERROR(EnergyDriftExceeded);
ROTLAB_ERROR(NotTransverse);
ROTLAB_ERROR(NotConverged);
ROTLAB_ERROR(BoxTooSmall);
ROTLAB_ERROR(NotIndependent);
ROTLAB_ERROR(NotApplicable);
ROTLAB_ERROR(PreconditionViolation);
ROTLAB_ERROR(FormatError);

#undef ROTLAB_ERROR

inline Vec to_real(const IntVec& k) { return k.cast<double>(); }

}  // namespace rotlab
